"""Dense tensors of fixed valency and the transition machinery between bases.

A tensor of valency (r, s) on a dim-dimensional space is stored as a dense
ndarray with r + s axes, each of length dim. Axis order is all upper
(contravariant) slots first, then all lower (covariant) slots, row-major.
Public component access is 1-based, matching the classical index convention;
internals are plain 0-based numpy.

Nothing here mutates: tensors expose a read-only array, and every operation
returns a fresh object. ``set`` therefore hands back a new tensor with one
component replaced.

Basis changes are driven by a pair of mutually inverse matrices (S, T).
Columns of S are the coordinates of the new basis vectors in the old basis;
T = S^-1. A tensor transforms one slot at a time: mapping components from
the old basis to the new applies T across every upper slot and S^T across
every lower slot; the opposite direction applies S and T^T. Chaining two
changes of basis agrees with the composed transition pair.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CapacityError,
    DegenerateTransition,
    ParameterError,
    ShapeError,
    TensorIndexError,
)

MAX_ORDER = 8
DEFAULT_DIM = 3

OLD_TO_NEW = "old->new"
NEW_TO_OLD = "new->old"

# |det| <= SINGULAR_REL * (product of row norms) counts as singular.
SINGULAR_REL = 1e-12
INVERSE_TOL = 1e-9


@dataclass(frozen=True)
class Valency:
    """Number of upper (contravariant) and lower (covariant) slots."""

    r: int
    s: int

    def __post_init__(self):
        if self.r < 0 or self.s < 0:
            raise ShapeError(f"valency must be non-negative, got ({self.r}, {self.s})")
        if self.order > MAX_ORDER:
            raise CapacityError(
                f"tensor order {self.order} exceeds the supported maximum {MAX_ORDER}"
            )

    @property
    def order(self) -> int:
        return self.r + self.s


def _as_valency(valency) -> Valency:
    if isinstance(valency, Valency):
        return valency
    r, s = valency
    return Valency(int(r), int(s))


def _check_slot_indices(name: str, idx: Sequence[int], count: int, dim: int):
    if len(idx) != count:
        raise TensorIndexError(
            f"expected {count} {name} indices, got {len(idx)}"
        )
    for i in idx:
        if not 1 <= i <= dim:
            raise TensorIndexError(
                f"{name} index {i} out of range 1..{dim}"
            )


class DenseTensor:
    """Immutable dense tensor with upper slots first and 1-based access.

    Parameters
    ----------
    valency : Valency or (r, s) pair
        Slot counts. Order r + s is capped at 8.
    dim : int
        Dimension of the underlying space, default 3.
    components : array-like, optional
        Either an ndarray of shape (dim,) * (r + s) or a flat sequence of
        length dim ** (r + s) in row-major order. Defaults to zeros.
    """

    __slots__ = ("valency", "dim", "_array")

    def __init__(self, valency, dim: int = DEFAULT_DIM, components=None):
        valency = _as_valency(valency)
        if dim < 1:
            raise ShapeError(f"dimension must be positive, got {dim}")
        shape = (dim,) * valency.order
        if components is None:
            array = np.zeros(shape)
        else:
            array = np.array(components, dtype=float)
            if array.shape != shape:
                if array.ndim == 1 and array.size == dim ** valency.order:
                    array = array.reshape(shape)
                else:
                    raise ShapeError(
                        f"components of shape {array.shape} do not fit a "
                        f"({valency.r},{valency.s}) tensor over dim {dim}"
                    )
        if not np.all(np.isfinite(array)):
            raise ShapeError("tensor components must all be finite")
        # note: ascontiguousarray would promote 0-d arrays to shape (1,)
        array = np.asarray(array, dtype=float, order="C")
        if array.base is not None or not array.flags.owndata:
            array = array.copy(order="C")
        array.flags.writeable = False
        object.__setattr__(self, "valency", valency)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "_array", array)

    def __setattr__(self, name, value):
        raise AttributeError("DenseTensor is immutable")

    # -- construction helpers -------------------------------------------------

    @classmethod
    def zeros(cls, valency, dim: int = DEFAULT_DIM) -> "DenseTensor":
        return cls(valency, dim)

    @classmethod
    def from_array(cls, array, r: int, s: int) -> "DenseTensor":
        array = np.asarray(array, dtype=float)
        if array.ndim != r + s:
            raise ShapeError(
                f"array with {array.ndim} axes cannot hold a ({r},{s}) tensor"
            )
        dim = array.shape[0] if array.ndim else DEFAULT_DIM
        return cls(Valency(r, s), dim, array)

    @classmethod
    def scalar(cls, value: float, dim: int = DEFAULT_DIM) -> "DenseTensor":
        return cls(Valency(0, 0), dim, np.asarray(float(value)))

    # -- basic access ----------------------------------------------------------

    @property
    def array(self) -> np.ndarray:
        """Read-only ndarray view of the components."""
        return self._array

    @property
    def components(self) -> np.ndarray:
        """Flat copy of the components in row-major slot order."""
        return self._array.reshape(-1).copy()

    def item(self) -> float:
        if self.valency.order != 0:
            raise ShapeError("item() is only defined for (0,0) tensors")
        return float(self._array)

    def get(self, upper: Sequence[int] = (), lower: Sequence[int] = ()) -> float:
        """Component at 1-based upper and lower index tuples."""
        upper = tuple(upper)
        lower = tuple(lower)
        _check_slot_indices("upper", upper, self.valency.r, self.dim)
        _check_slot_indices("lower", lower, self.valency.s, self.dim)
        pos = tuple(i - 1 for i in upper) + tuple(j - 1 for j in lower)
        return float(self._array[pos])

    def set(self, upper: Sequence[int], lower: Sequence[int], value: float) -> "DenseTensor":
        """New tensor with the addressed component replaced by ``value``."""
        upper = tuple(upper)
        lower = tuple(lower)
        _check_slot_indices("upper", upper, self.valency.r, self.dim)
        _check_slot_indices("lower", lower, self.valency.s, self.dim)
        pos = tuple(i - 1 for i in upper) + tuple(j - 1 for j in lower)
        array = self._array.copy()
        array[pos] = float(value)
        return DenseTensor(self.valency, self.dim, array)

    # -- algebra ---------------------------------------------------------------

    def scale(self, alpha: float) -> "DenseTensor":
        return DenseTensor(self.valency, self.dim, self._array * float(alpha))

    def add(self, other: "DenseTensor") -> "DenseTensor":
        if not isinstance(other, DenseTensor):
            raise ShapeError("can only add another DenseTensor")
        if other.valency != self.valency or other.dim != self.dim:
            raise ShapeError(
                f"cannot add ({other.valency.r},{other.valency.s}) over dim "
                f"{other.dim} to ({self.valency.r},{self.valency.s}) over dim {self.dim}"
            )
        return DenseTensor(self.valency, self.dim, self._array + other._array)

    def tensor_product(self, other: "DenseTensor") -> "DenseTensor":
        """Outer product; upper slots of both factors come before lower slots.

        Slot order of the result is (self upper, other upper, self lower,
        other lower), so the product of a vector and a covector lands in the
        operator layout.
        """
        if not isinstance(other, DenseTensor):
            raise ShapeError("tensor_product needs another DenseTensor")
        if other.dim != self.dim:
            raise ShapeError("tensor_product operands must share the dimension")
        valency = Valency(self.valency.r + other.valency.r,
                          self.valency.s + other.valency.s)
        raw = np.multiply.outer(self._array, other._array)
        # raw axes: (self.upper, self.lower, other.upper, other.lower);
        # move other's upper block in front of self's lower block.
        r1, s1 = self.valency.r, self.valency.s
        r2 = other.valency.r
        src = list(range(r1 + s1, r1 + s1 + r2))
        dst = list(range(r1, r1 + r2))
        raw = np.moveaxis(raw, src, dst)
        return DenseTensor(valency, self.dim, raw)

    def contract(self, upper_slot: int, lower_slot: int) -> "DenseTensor":
        """Sum over one upper and one lower slot (1-based slot numbers)."""
        r, s = self.valency.r, self.valency.s
        if not 1 <= upper_slot <= r:
            raise TensorIndexError(f"upper slot {upper_slot} out of range 1..{r}")
        if not 1 <= lower_slot <= s:
            raise TensorIndexError(f"lower slot {lower_slot} out of range 1..{s}")
        array = np.trace(self._array, axis1=upper_slot - 1, axis2=r + lower_slot - 1)
        return DenseTensor(Valency(r - 1, s - 1), self.dim, array)

    def transform(self, pair: "TransitionPair", direction: str = OLD_TO_NEW) -> "DenseTensor":
        """Components of the same tensor in the other basis.

        ``old->new`` applies T to every upper slot and S^T to every lower
        slot; ``new->old`` applies S and T^T. One matrix application per
        slot, so valency is preserved.
        """
        if pair.dim != self.dim:
            raise ShapeError("transition pair dimension does not match tensor")
        if direction == OLD_TO_NEW:
            up, low = pair.T, pair.S.T
        elif direction == NEW_TO_OLD:
            up, low = pair.S, pair.T.T
        else:
            raise ParameterError(
                f"direction must be {OLD_TO_NEW!r} or {NEW_TO_OLD!r}, got {direction!r}"
            )
        array = self._array
        r, s = self.valency.r, self.valency.s
        for axis in range(r):
            array = _apply_to_axis(up, array, axis)
        for axis in range(r, r + s):
            array = _apply_to_axis(low, array, axis)
        return DenseTensor(self.valency, self.dim, array)

    # -- sugar -----------------------------------------------------------------

    def __add__(self, other):
        return self.add(other)

    def __sub__(self, other):
        return self.add(other.scale(-1.0))

    def __mul__(self, alpha):
        return self.scale(alpha)

    __rmul__ = __mul__

    def __neg__(self):
        return self.scale(-1.0)

    def allclose(self, other: "DenseTensor", tol: float = 1e-12) -> bool:
        return (self.valency == other.valency and self.dim == other.dim
                and bool(np.allclose(self._array, other._array, rtol=0.0, atol=tol)))

    def __repr__(self):
        return (f"DenseTensor(r={self.valency.r}, s={self.valency.s}, "
                f"dim={self.dim})")

    # -- interchange -----------------------------------------------------------

    def as_dict(self) -> dict:
        return {
            "r": self.valency.r,
            "s": self.valency.s,
            "dim": self.dim,
            "components": self.components.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DenseTensor":
        try:
            r, s, dim = int(data["r"]), int(data["s"]), int(data["dim"])
            components = data["components"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ShapeError(f"malformed tensor record: {exc}") from exc
        return cls(Valency(r, s), dim, np.asarray(components, dtype=float))

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "DenseTensor":
        return cls.from_dict(json.loads(text))


def _apply_to_axis(matrix: np.ndarray, array: np.ndarray, axis: int) -> np.ndarray:
    """Contract ``matrix``'s second index against one axis of ``array``.

    Result keeps the axis in place: out[..., i, ...] = sum_h M[i, h] a[..., h, ...].
    """
    moved = np.tensordot(matrix, array, axes=([1], [axis]))
    return np.moveaxis(moved, 0, axis)


def invert_matrix(matrix: np.ndarray) -> np.ndarray:
    """Inverse with an explicit scale-aware singularity check.

    Raises DegenerateTransition when |det| falls below 1e-12 of the Hadamard
    bound (product of the row norms), which makes the test invariant under
    uniform rescaling of the matrix.
    """
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {matrix.shape}")
    det = float(np.linalg.det(matrix))
    scale = float(np.prod(np.linalg.norm(matrix, axis=1)))
    if scale == 0.0 or abs(det) <= SINGULAR_REL * scale:
        raise DegenerateTransition(
            f"matrix is singular within tolerance (det={det!r})"
        )
    return np.linalg.inv(matrix)


class TransitionPair:
    """Mutually inverse direct/inverse transition matrices (S, T).

    S's columns hold the new basis vectors' coordinates in the old basis;
    T = S^-1 recovers old-basis coordinates of the old vectors in the new
    basis. The constructor verifies T.S = I within 1e-9 (inf norm).
    """

    __slots__ = ("S", "T", "dim")

    def __init__(self, S, T):
        S = np.asarray(S, dtype=float)
        T = np.asarray(T, dtype=float)
        if S.ndim != 2 or S.shape[0] != S.shape[1]:
            raise ShapeError(f"S must be square, got shape {S.shape}")
        if T.shape != S.shape:
            raise ShapeError(f"T shape {T.shape} does not match S shape {S.shape}")
        residual = float(np.max(np.abs(T @ S - np.eye(S.shape[0]))))
        if not math.isfinite(residual) or residual > INVERSE_TOL:
            raise DegenerateTransition(
                f"T.S deviates from identity by {residual!r} (tolerance {INVERSE_TOL})"
            )
        S = S.copy()
        T = T.copy()
        S.flags.writeable = False
        T.flags.writeable = False
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "dim", S.shape[0])

    def __setattr__(self, name, value):
        raise AttributeError("TransitionPair is immutable")

    @classmethod
    def from_direct(cls, S) -> "TransitionPair":
        """Build the pair from S alone, inverting for T."""
        S = np.asarray(S, dtype=float)
        return cls(S, invert_matrix(S))

    def swapped(self) -> "TransitionPair":
        """Pair for the reverse change of basis (new system viewed as old)."""
        return TransitionPair(self.T, self.S)

    def __repr__(self):
        return f"TransitionPair(dim={self.dim})"


def compose_transitions(first: TransitionPair, second: TransitionPair) -> TransitionPair:
    """Pair for the one-shot change basis1 -> basis3 given 1->2 and 2->3.

    Direct matrices compose as S13 = S12.S23; inverse ones in the opposite
    order, T13 = T23.T12.
    """
    if first.dim != second.dim:
        raise ShapeError("cannot compose transitions of different dimensions")
    return TransitionPair(first.S @ second.S, second.T @ first.T)


def zeros(valency, dim: int = DEFAULT_DIM) -> DenseTensor:
    """Zero tensor of the given valency."""
    return DenseTensor.zeros(valency, dim)
