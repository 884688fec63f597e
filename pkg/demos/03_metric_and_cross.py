#!/usr/bin/env python3
"""Metric machinery: gram matrices, index gymnastics, volumes, cross products.

The punchline: computing a cross product with the metric-weighted volume
tensor inside a skewed basis and mapping the answer back to orthonormal
coordinates reproduces numpy's cross product.
"""
import numpy as np

from tensorcalc import (
    Basis,
    DenseTensor,
    NEW_TO_OLD,
    OLD_TO_NEW,
    TransitionPair,
    cross_product,
    gram_from_basis,
    kronecker,
    levi_civita,
    lower_index,
    raise_index,
    transform_vector,
    volume_tensor,
)


def main():
    # gram matrix of a skew basis: lengths and angles of the basis vectors
    cols = np.array([[1.0, 1.0, 0.0],
                     [0.0, 1.0, 0.0],
                     [0.0, 0.0, 2.0]])
    g = gram_from_basis(Basis(cols))
    print("gram matrix:\n", g.matrix)
    print("dual (inverse) metric:\n", g.dual)

    x = np.array([1.0, 2.0, 2.0])
    print("\nlength^2 of x in that basis:", g.dot(x, x))

    # lowering the slot of a vector and raising it again is the identity
    v = DenseTensor.from_array(x, 1, 0)
    lowered = lower_index(g, v, 1)
    print("covariant components g_ij x^j:", lowered.array)
    print("raise back:", raise_index(g, lowered, 1).array)

    # the mixed Kronecker delta has the same components in every basis
    d = kronecker()
    moved = d.transform(TransitionPair.from_direct(cols), OLD_TO_NEW)
    print("\ndelta drift under basis change:", np.max(np.abs(moved.array - np.eye(3))))

    eps = levi_civita()  # plain value table, identical in every basis
    print("epsilon_123, epsilon_213:", eps[0, 1, 2], eps[1, 0, 2])
    omega = volume_tensor(g)  # the sqrt(det g) weight makes it a tensor
    print("volume tensor omega_123 = sqrt(det g) =", omega.get((), (1, 2, 3)))

    # cross product via 'omega with one index raised', done in the skew basis
    pair = TransitionPair.from_direct(cols)
    a0 = np.array([1.0, 0.0, 0.0])
    b0 = np.array([0.0, 1.0, 0.0])
    a = transform_vector(a0, pair, OLD_TO_NEW)
    b = transform_vector(b0, pair, OLD_TO_NEW)
    c = cross_product(g, a, b)
    back = transform_vector(c, pair, NEW_TO_OLD)
    print("\ncross product mapped back:", back)
    print("numpy says:             ", np.cross(a0, b0))


if __name__ == "__main__":
    main()
