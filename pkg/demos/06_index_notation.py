#!/usr/bin/env python3
"""Index notation: parse, lint, expand, and numerically evaluate.

The validator enforces the two classic well-formedness rules of summation
notation and reports character-accurate spans, so the CLI can underline the
exact offending index.
"""
import numpy as np

from tensorcalc import DenseTensor, evaluate, explicit_form, parse, validate


def show(text):
    report = validate(parse(text))
    print(f"{text!r}: {report.verdict}")
    for v in report.violations:
        start, end = v.span
        print("   " + " " * start + "^" * max(1, end - start),
              f"rule {v.rule}: {v.message}")


def main():
    # well-formed: i is free on both sides, j is summed once up once down
    show("y^i = F^i_j x^j")
    # j appears twice on the same level: not a valid summation pair
    show("c = x^j y^j")
    # free indices of the two sides disagree
    show("z^i = a^i + b_k")

    expr = parse("y^i = F^i_j x^j")
    print("\nexpanded:", explicit_form(expr))

    F = DenseTensor.from_array(np.array([[2.0, 0.0, 0.0],
                                         [0.0, 3.0, 0.0],
                                         [0.0, 0.0, 4.0]]), 1, 1)
    x = DenseTensor.from_array(np.array([1.0, 1.0, 1.0]), 1, 0)
    y = evaluate(expr, {"F": F, "x": x})
    print("evaluated y =", y.array)

    # multi-term expressions with coefficients and signs work the same way
    combo = parse("w^i = 2 x^i - y^i")
    w = evaluate(combo, {"x": x, "y": y})
    print("2x - y =", w.array)

    # a full contraction produces a scalar tensor
    trace = evaluate(parse("s = F^i_i"), {"F": F})
    print("trace F =", trace.item())


if __name__ == "__main__":
    main()
