#!/usr/bin/env python3
"""Bases, transition pairs, and the classic transformation laws.

Shows the specialized vector/covector/operator/bilinear laws, the scalar
quantities they leave alone, and recovery of a symmetric form from its
quadratic values.
"""
import numpy as np

from tensorcalc import (
    Basis,
    OLD_TO_NEW,
    evaluate_bilinear,
    pair_covector_vector,
    quadratic,
    recover_bilinear,
    symmetrize,
    transform_bilinear,
    transform_covector,
    transform_operator,
    transform_vector,
    transition_between,
)


def main():
    e = Basis.standard()
    f = Basis.from_vectors([1.0, 1.0, 0.0], [0.0, 1.0, 1.0], [1.0, 0.0, 1.0])
    pair = transition_between(e, f)
    print("transition S:\n", pair.S)
    print("T.S residual:", np.max(np.abs(pair.T @ pair.S - np.eye(3))))

    x = np.array([2.0, -1.0, 3.0])
    u = np.array([1.0, 0.0, 1.0])
    x_new = transform_vector(x, pair, OLD_TO_NEW)
    u_new = transform_covector(u, pair, OLD_TO_NEW)
    print("\nvector components move with T:", x_new)
    print("covector components move with S^T:", u_new)

    # the pairing u_i x^i is a number and numbers do not care about bases
    print("pairing old:", pair_covector_vector(u, x),
          " new:", pair_covector_vector(u_new, x_new))

    F = np.diag([1.0, 2.0, 3.0])
    F_new = transform_operator(F, pair, OLD_TO_NEW)
    print("\noperator in new basis:\n", F_new)
    print("det before and after:", np.linalg.det(F), np.linalg.det(F_new))

    b = np.array([[2.0, 1.0, 0.0],
                  [0.0, 1.0, 0.0],
                  [0.0, 0.0, 4.0]])
    y = np.array([0.0, 1.0, -1.0])
    b_new = transform_bilinear(b, pair, OLD_TO_NEW)
    print("\nbilinear value old:", evaluate_bilinear(b, x, y))
    print("bilinear value new:",
          evaluate_bilinear(b_new, transform_vector(x, pair),
                            transform_vector(y, pair)))

    # only the symmetric part of b is visible through the quadratic form;
    # probing the form recovers exactly that part
    rebuilt = recover_bilinear(lambda v: quadratic(b, v))
    print("\nrecovered form equals symmetric part:",
          np.max(np.abs(rebuilt - symmetrize(b))))


if __name__ == "__main__":
    main()
