"""Metric machinery: Gram matrices, index raising/lowering, volumes, cross products.

The metric of a basis is its Gram matrix g_ij, the pairwise scalar products
of the basis vectors. Its inverse g^ij (the dual metric) raises indices;
g_ij lowers them. The raised slot becomes the FIRST upper slot of the
result and the lowered slot the FIRST lower slot; round trips on first
slots are exact inverses and other slots come back reordered in that
convention.

Orientation machinery (Levi-Civita symbol, volume tensor, cross product) is
implemented for dimension 3 only; other dimensions raise
UnsupportedDimension rather than guessing a convention.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DegenerateMetric, ShapeError, TensorIndexError, UnsupportedDimension
from .frames import Basis
from .tensors import DEFAULT_DIM, DenseTensor, Valency

__all__ = [
    "Metric", "gram_from_basis", "raise_index", "lower_index", "kronecker",
    "kronecker_upper", "kronecker_lower", "levi_civita", "volume_tensor",
    "dual_volume_tensor", "cross_product",
]

SYMMETRY_TOL = 1e-12


class Metric:
    """Symmetric positive definite matrix g with its cached inverse.

    Positive definiteness is established by attempting a Cholesky
    factorization, which succeeds exactly when all pivots are positive.
    """

    __slots__ = ("matrix", "dual", "dim", "_sqrt_det")

    def __init__(self, matrix):
        g = np.asarray(matrix, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise ShapeError(f"metric must be a square matrix, got shape {g.shape}")
        asym = float(np.max(np.abs(g - g.T))) if g.size else 0.0
        scale = float(np.max(np.abs(g))) if g.size else 0.0
        if asym > SYMMETRY_TOL * max(1.0, scale):
            raise DegenerateMetric(f"metric is not symmetric (deviation {asym!r})")
        g = (g + g.T) / 2.0
        try:
            chol = np.linalg.cholesky(g)
        except np.linalg.LinAlgError:
            raise DegenerateMetric("metric is not positive definite")
        dual = np.linalg.inv(g)
        det = float(np.prod(np.diagonal(chol))) ** 2
        g.flags.writeable = False
        dual.flags.writeable = False
        object.__setattr__(self, "matrix", g)
        object.__setattr__(self, "dual", dual)
        object.__setattr__(self, "dim", g.shape[0])
        object.__setattr__(self, "_sqrt_det", math.sqrt(det))

    def __setattr__(self, name, value):
        raise AttributeError("Metric is immutable")

    @classmethod
    def euclidean(cls, dim: int = DEFAULT_DIM) -> "Metric":
        return cls(np.eye(dim))

    @property
    def sqrt_det(self) -> float:
        return self._sqrt_det

    def dot(self, x, y) -> float:
        """Scalar product (x, y) = sum_ij g_ij x^i y^j."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if x.shape != (self.dim,) or y.shape != (self.dim,):
            raise ShapeError("dot expects two vectors matching the metric dimension")
        return float(x @ self.matrix @ y)

    def norm(self, x) -> float:
        return math.sqrt(self.dot(x, x))

    def as_dict(self) -> dict:
        return {"matrix": self.matrix.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "Metric":
        if isinstance(data, dict):
            data = data.get("matrix", data)
        return cls(np.asarray(data, dtype=float))

    def __repr__(self):
        return f"Metric(dim={self.dim})"


def gram_from_basis(basis: Basis) -> Metric:
    """Metric whose entries are the ambient dot products of the basis vectors."""
    cols = basis.columns
    return Metric(cols.T @ cols)


def raise_index(metric: Metric, tensor: DenseTensor, lower_slot: int) -> DenseTensor:
    """Contract g^ps against one lower slot; the new slot leads the uppers.

    X^{p ...} = sum_s g^{ps} X_{... s ...}, valency (r, s) -> (r+1, s-1).
    """
    r, s = tensor.valency.r, tensor.valency.s
    if not 1 <= lower_slot <= s:
        raise TensorIndexError(f"lower slot {lower_slot} out of range 1..{s}")
    if metric.dim != tensor.dim:
        raise ShapeError("metric dimension does not match tensor")
    axis = r + lower_slot - 1
    array = np.tensordot(metric.dual, tensor.array, axes=([1], [axis]))
    # tensordot leaves the new upper axis in front, exactly where it belongs
    return DenseTensor(Valency(r + 1, s - 1), tensor.dim, array)


def lower_index(metric: Metric, tensor: DenseTensor, upper_slot: int) -> DenseTensor:
    """Contract g_ps against one upper slot; the new slot leads the lowers.

    X_{p ...} = sum_s g_{ps} X^{... s ...}, valency (r, s) -> (r-1, s+1).
    """
    r, s = tensor.valency.r, tensor.valency.s
    if not 1 <= upper_slot <= r:
        raise TensorIndexError(f"upper slot {upper_slot} out of range 1..{r}")
    if metric.dim != tensor.dim:
        raise ShapeError("metric dimension does not match tensor")
    axis = upper_slot - 1
    array = np.tensordot(metric.matrix, tensor.array, axes=([1], [axis]))
    # new covariant axis sits in front; move it behind the remaining uppers
    array = np.moveaxis(array, 0, r - 1)
    return DenseTensor(Valency(r - 1, s + 1), tensor.dim, array)


def kronecker(dim: int = DEFAULT_DIM) -> DenseTensor:
    """The (1,1) unit tensor delta^i_j; its components survive any basis change."""
    return DenseTensor(Valency(1, 1), dim, np.eye(dim))


def kronecker_upper(dim: int = DEFAULT_DIM) -> np.ndarray:
    """Raw delta^{ij} value table.

    Deliberately NOT a DenseTensor: read as a (2,0) tensor these components
    are not basis-invariant (only orthonormal changes preserve them).
    """
    return np.eye(dim)


def kronecker_lower(dim: int = DEFAULT_DIM) -> np.ndarray:
    """Raw delta_{ij} value table; same caveat as kronecker_upper."""
    return np.eye(dim)


def levi_civita(dim: int = 3) -> np.ndarray:
    """Completely antisymmetric symbol as a raw 3-index array.

    Only defined here for dim 3. It is a symbol, not a tensor: the same
    value table is used in every basis, which is exactly why the volume
    tensor needs the sqrt(det g) factor.
    """
    if dim != 3:
        raise UnsupportedDimension(f"Levi-Civita symbol is provided for dim 3, not {dim}")
    eps = np.zeros((3, 3, 3))
    for i, j, k, sign in ((0, 1, 2, 1.0), (1, 2, 0, 1.0), (2, 0, 1, 1.0),
                          (0, 2, 1, -1.0), (2, 1, 0, -1.0), (1, 0, 2, -1.0)):
        eps[i, j, k] = sign
    return eps


def volume_tensor(metric: Metric) -> DenseTensor:
    """omega_ijk = sqrt(det g) * epsilon_ijk as a (0,3) tensor."""
    if metric.dim != 3:
        raise UnsupportedDimension("volume tensor needs dimension 3")
    det = metric.sqrt_det ** 2
    if det <= 0.0:
        raise DegenerateMetric("metric determinant must be positive")
    return DenseTensor(Valency(0, 3), 3, metric.sqrt_det * levi_civita())


def dual_volume_tensor(metric: Metric) -> DenseTensor:
    """omega^ijk = sqrt(det g^..) * epsilon^ijk as a (3,0) tensor."""
    if metric.dim != 3:
        raise UnsupportedDimension("volume tensor needs dimension 3")
    dual_det = float(np.linalg.det(metric.dual))
    if dual_det <= 0.0:
        raise DegenerateMetric("dual metric determinant must be positive")
    return DenseTensor(Valency(3, 0), 3, math.sqrt(dual_det) * levi_civita())


def cross_product(metric: Metric, x, y) -> np.ndarray:
    """Vector product in a skew basis: a^r = sum g^{ri} omega_ijk x^j y^k.

    In an orthonormal basis this reduces to the familiar determinant rule;
    in any positively oriented basis it represents the same geometric
    vector.
    """
    if metric.dim != 3:
        raise UnsupportedDimension("cross product needs dimension 3")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (3,) or y.shape != (3,):
        raise ShapeError("cross product expects two 3-vectors")
    omega = volume_tensor(metric).array
    return np.einsum("ri,ijk,j,k->r", metric.dual, omega, x, y)
