#!/usr/bin/env python3
"""Dense tensors: building blocks, products, contraction, basis changes.

Components are stored in a flat numpy array with the upper (contravariant)
slots first. Public index access is 1-based, matching the usual hand
notation, and every tensor is frozen after construction.
"""
import numpy as np

from tensorcalc import (
    DenseTensor,
    OLD_TO_NEW,
    NEW_TO_OLD,
    TransitionPair,
    Valency,
    compose_transitions,
)


def main():
    # a (1,1) tensor is an operator; start from its matrix
    F = DenseTensor.from_array(np.array([[1.0, 2.0, 0.0],
                                         [0.0, 1.0, 0.0],
                                         [3.0, 0.0, 1.0]]), 1, 1)
    print("operator F, valency", F.valency, "dim", F.dim)
    print("F^1_2 =", F.get((1,), (2,)))

    # tensors are immutable; set() hands back a modified copy
    G = F.set((1,), (2,), 5.0)
    print("after set, F^1_2 =", F.get((1,), (2,)), " G^1_2 =", G.get((1,), (2,)))

    x = DenseTensor.from_array(np.array([1.0, 0.0, -1.0]), 1, 0)
    a = DenseTensor.from_array(np.array([2.0, 1.0, 0.0]), 0, 1)

    # outer product stacks all upper slots before all lower slots
    T = x.tensor_product(a)
    print("\n(x (x) a) valency:", T.valency)
    print("components:\n", T.array)

    # contracting the only upper slot against the only lower slot gives <a, x>
    print("trace of x(x)a =", T.contract(1, 1).item(), " (= a_i x^i)")

    # change of basis: S columns hold the new basis vectors in the old one
    S = np.array([[1.0, 1.0, 0.0],
                  [0.0, 1.0, 0.0],
                  [0.0, 0.0, 1.0]])
    pair = TransitionPair.from_direct(S)
    F_new = F.transform(pair, OLD_TO_NEW)
    print("\nF in sheared basis:\n", F_new.array)
    back = F_new.transform(pair, NEW_TO_OLD)
    print("round trip error:", np.max(np.abs(back.array - F.array)))

    # chaining two changes equals transforming by the composed pair
    S2 = np.array([[0.0, 0.0, 1.0],
                   [1.0, 0.0, 0.0],
                   [0.0, 1.0, 0.0]])
    pair2 = TransitionPair.from_direct(S2)
    both = compose_transitions(pair, pair2)
    stepped = F.transform(pair, OLD_TO_NEW).transform(pair2, OLD_TO_NEW)
    oneshot = F.transform(both, OLD_TO_NEW)
    print("two-step vs composed:", np.max(np.abs(stepped.array - oneshot.array)))

    # everything round-trips through plain dicts for JSON storage
    blob = F.as_dict()
    print("\nserialized keys:", sorted(blob))
    print("restored equals original:",
          np.array_equal(DenseTensor.from_dict(blob).array, F.array))


if __name__ == "__main__":
    main()
