"""Tensor fields over Cartesian coordinates and the vector-calculus operators.

A TensorField maps a coordinate triple (plus an optional external parameter
t) to a DenseTensor of fixed valency. Differentiation is analytic when the
field supplies its partial derivatives and central finite differences
otherwise. In this module the covariant derivative is the plain partial
derivative, which is only valid in Cartesian coordinates with a constant
metric; curvilinear charts get their Gamma-corrected version in the
curvilinear module.

The derivative of an (r, s) field has valency (r, s+1) and the new
covariant slot comes FIRST among the lower slots.
"""

from __future__ import annotations

import numpy as np

from . import metric as metric_mod
from .errors import DomainError, ParameterError, ShapeError
from .tensors import DEFAULT_DIM, DenseTensor, Valency

__all__ = [
    "DifferentiationScheme", "TensorField", "nabla", "parameter_derivative",
    "gradient_covector", "gradient_vector", "divergence", "laplacian",
    "dalembert", "rotor",
]

_EPS = float(np.finfo(float).eps)
_FIRST_STEP = _EPS ** (1.0 / 3.0)
_SECOND_STEP = _EPS ** 0.25


class DifferentiationScheme:
    """Central finite-difference configuration.

    order 2 uses the two-point central stencils, order 4 the four-point
    ones. When ``step`` is None the step is chosen per coordinate:
    cbrt(eps) * max(1, |x|) for first derivatives and eps**(1/4) *
    max(1, |x|) for second derivatives, the usual truncation/round-off
    compromise.
    """

    __slots__ = ("order", "step")

    def __init__(self, order: int = 2, step: float | None = None):
        if order not in (2, 4):
            raise ParameterError(f"scheme order must be 2 or 4, got {order}")
        if step is not None and not step > 0:
            raise ParameterError(f"step must be positive, got {step}")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "step", step)

    def __setattr__(self, name, value):
        raise AttributeError("DifferentiationScheme is immutable")

    def first_step(self, coord: float) -> float:
        if self.step is not None:
            return self.step
        return _FIRST_STEP * max(1.0, abs(coord))

    def second_step(self, coord: float) -> float:
        if self.step is not None:
            return self.step
        return _SECOND_STEP * max(1.0, abs(coord))

    def __repr__(self):
        return f"DifferentiationScheme(order={self.order}, step={self.step})"


DEFAULT_SCHEME = DifferentiationScheme()


def _scheme(scheme) -> DifferentiationScheme:
    return DEFAULT_SCHEME if scheme is None else scheme


class TensorField:
    """Field of fixed-valency tensors over Cartesian coordinates.

    Parameters
    ----------
    valency : Valency or (r, s) pair
    func : callable
        ``func(point)`` or, when has_parameter, ``func(point, t)``. May
        return a DenseTensor, an ndarray of the component shape, or a plain
        number for scalar fields.
    dim : int
    partials : callable, optional
        Analytic derivative map with the same signature returning an array
        of shape (dim,) + component shape; entry [q] holds the derivative
        of every component along coordinate q. Used in place of finite
        differences when present.
    has_parameter : bool
        Whether the field depends on the external parameter t.
    """

    __slots__ = ("valency", "dim", "has_parameter", "_func", "_partials")

    def __init__(self, valency, func, dim: int = DEFAULT_DIM,
                 partials=None, has_parameter: bool = False):
        if not isinstance(valency, Valency):
            valency = Valency(*valency)
        object.__setattr__(self, "valency", valency)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "has_parameter", bool(has_parameter))
        object.__setattr__(self, "_func", func)
        object.__setattr__(self, "_partials", partials)

    def __setattr__(self, name, value):
        raise AttributeError("TensorField is immutable")

    # -- constructors ----------------------------------------------------------

    @classmethod
    def scalar(cls, func, dim: int = DEFAULT_DIM, partials=None,
               has_parameter: bool = False) -> "TensorField":
        return cls(Valency(0, 0), func, dim, partials, has_parameter)

    @classmethod
    def vector(cls, func, dim: int = DEFAULT_DIM, partials=None,
               has_parameter: bool = False) -> "TensorField":
        return cls(Valency(1, 0), func, dim, partials, has_parameter)

    @classmethod
    def covector(cls, func, dim: int = DEFAULT_DIM, partials=None,
                 has_parameter: bool = False) -> "TensorField":
        return cls(Valency(0, 1), func, dim, partials, has_parameter)

    @classmethod
    def constant(cls, tensor: DenseTensor) -> "TensorField":
        return cls(tensor.valency, lambda point: tensor, tensor.dim)

    # -- evaluation ------------------------------------------------------------

    def _call(self, func, point: np.ndarray, t):
        if self.has_parameter:
            if t is None:
                raise ParameterError("field depends on t; pass the parameter value")
            return func(point, t)
        return func(point)

    def evaluate_array(self, point, t: float | None = None) -> np.ndarray:
        point = np.asarray(point, dtype=float)
        if point.shape != (self.dim,):
            raise ShapeError(f"point shape {point.shape} does not match dim {self.dim}")
        value = self._call(self._func, point, t)
        if isinstance(value, DenseTensor):
            if value.valency != self.valency or value.dim != self.dim:
                raise ShapeError("field returned a tensor of the wrong valency")
            return value.array
        value = np.asarray(value, dtype=float)
        shape = (self.dim,) * self.valency.order
        if value.shape != shape:
            raise ShapeError(
                f"field returned shape {value.shape}, expected {shape}"
            )
        return value

    def evaluate(self, point, t: float | None = None) -> DenseTensor:
        return DenseTensor(self.valency, self.dim, self.evaluate_array(point, t))

    def partials_array(self, point, t: float | None = None):
        """Analytic derivative table, or None when the field has none."""
        if self._partials is None:
            return None
        point = np.asarray(point, dtype=float)
        table = np.asarray(self._call(self._partials, point, t), dtype=float)
        shape = (self.dim,) + (self.dim,) * self.valency.order
        if table.shape != shape:
            raise ShapeError(
                f"partials returned shape {table.shape}, expected {shape}"
            )
        return table

    def __repr__(self):
        return (f"TensorField(r={self.valency.r}, s={self.valency.s}, "
                f"dim={self.dim}{', t' if self.has_parameter else ''})")


def _probe(evaluate, point: np.ndarray, t):
    """Evaluate at a displaced probe point, mapping failures to DomainError."""
    try:
        return evaluate(point, t)
    except DomainError:
        raise
    except (ArithmeticError, ValueError) as exc:
        raise DomainError(f"field evaluation failed at {point.tolist()}: {exc}") from exc


def _first_derivative(evaluate, point: np.ndarray, axis: int, t,
                      scheme: DifferentiationScheme) -> np.ndarray:
    h = scheme.first_step(point[axis])
    e = np.zeros_like(point)
    e[axis] = 1.0
    if scheme.order == 2:
        return (_probe(evaluate, point + h * e, t)
                - _probe(evaluate, point - h * e, t)) / (2.0 * h)
    return (-_probe(evaluate, point + 2 * h * e, t)
            + 8.0 * _probe(evaluate, point + h * e, t)
            - 8.0 * _probe(evaluate, point - h * e, t)
            + _probe(evaluate, point - 2 * h * e, t)) / (12.0 * h)


def _pure_second(evaluate, point: np.ndarray, axis: int, t,
                 scheme: DifferentiationScheme) -> np.ndarray:
    h = scheme.second_step(point[axis])
    e = np.zeros_like(point)
    e[axis] = 1.0
    center = _probe(evaluate, point, t)
    if scheme.order == 2:
        return (_probe(evaluate, point + h * e, t) - 2.0 * center
                + _probe(evaluate, point - h * e, t)) / (h * h)
    return (-_probe(evaluate, point + 2 * h * e, t)
            + 16.0 * _probe(evaluate, point + h * e, t)
            - 30.0 * center
            + 16.0 * _probe(evaluate, point - h * e, t)
            - _probe(evaluate, point - 2 * h * e, t)) / (12.0 * h * h)


def derivative_table(field: TensorField, point, t=None,
                     scheme: DifferentiationScheme | None = None) -> np.ndarray:
    """All first partials of the components: entry [q] = d(components)/dx^q.

    Analytic when the field carries partials, otherwise central FD.
    """
    scheme = _scheme(scheme)
    point = np.asarray(point, dtype=float)
    table = field.partials_array(point, t)
    if table is not None:
        return table
    return np.stack([
        _first_derivative(field.evaluate_array, point, q, t, scheme)
        for q in range(field.dim)
    ])


def nabla(field: TensorField, scheme: DifferentiationScheme | None = None) -> TensorField:
    """Derivative field: valency (r, s+1), new covariant slot first lower.

    Component [i..., q, j...] holds the coordinate derivative along x^q of
    component [i..., j...]. Plain partials: valid for Cartesian coordinates
    only.
    """
    scheme = _scheme(scheme)
    r = field.valency.r
    out = Valency(field.valency.r, field.valency.s + 1)

    def func(point, t=None):
        table = derivative_table(field, point, t, scheme)
        return np.moveaxis(table, 0, r)

    return TensorField(out, func, field.dim, has_parameter=field.has_parameter)


def parameter_derivative(field: TensorField, t0: float,
                         scheme: DifferentiationScheme | None = None) -> TensorField:
    """d(field)/dt at t = t0, a parameter-free field of the same valency."""
    scheme = _scheme(scheme)
    if not field.has_parameter:
        zero = DenseTensor.zeros(field.valency, field.dim)
        return TensorField.constant(zero)

    def func(point):
        h = scheme.first_step(t0)
        def at(tau):
            return _probe(field.evaluate_array, np.asarray(point, dtype=float), tau)
        if scheme.order == 2:
            return (at(t0 + h) - at(t0 - h)) / (2.0 * h)
        return (-at(t0 + 2 * h) + 8.0 * at(t0 + h)
                - 8.0 * at(t0 - h) + at(t0 - 2 * h)) / (12.0 * h)

    return TensorField(field.valency, func, field.dim)


def gradient_covector(phi: TensorField,
                      scheme: DifferentiationScheme | None = None) -> TensorField:
    """a_q = derivative of the scalar along x^q, as a covector field."""
    if phi.valency.order != 0:
        raise ShapeError("gradient needs a scalar field")
    return nabla(phi, scheme)


def gradient_vector(g: "metric_mod.Metric", phi: TensorField,
                    scheme: DifferentiationScheme | None = None) -> TensorField:
    """Index-raised gradient: component q is sum_i g^{qi} a_i."""
    covector = gradient_covector(phi, scheme)

    def func(point, t=None):
        return g.dual @ covector.evaluate_array(point, t)

    return TensorField(Valency(1, 0), func, phi.dim,
                       has_parameter=phi.has_parameter)


def divergence(field: TensorField, slot: int = 1,
               scheme: DifferentiationScheme | None = None) -> TensorField:
    """Contraction of the derivative slot with the chosen upper slot."""
    if field.valency.r < 1:
        raise ShapeError("divergence needs at least one upper slot")
    if not 1 <= slot <= field.valency.r:
        raise ShapeError(f"upper slot {slot} out of range 1..{field.valency.r}")
    grad = nabla(field, scheme)

    def func(point, t=None):
        return grad.evaluate(point, t).contract(slot, 1).array

    return TensorField(Valency(field.valency.r - 1, field.valency.s),
                       func, field.dim, has_parameter=field.has_parameter)


def _hessian(phi: TensorField, point: np.ndarray, t,
             scheme: DifferentiationScheme) -> np.ndarray:
    """Symmetric table of second partials of a scalar field."""
    dim = phi.dim
    hess = np.empty((dim, dim))
    if phi.partials_array(point, t) is not None:
        # differentiate the analytic first partials once
        for i in range(dim):
            row = _first_derivative(
                lambda p, tau: phi.partials_array(p, tau), point, i, t, scheme)
            hess[i, :] = row
        return (hess + hess.T) / 2.0
    for i in range(dim):
        hess[i, i] = _pure_second(phi.evaluate_array, point, i, t, scheme)
    for i in range(dim):
        for j in range(i + 1, dim):
            def inner(p, tau, j=j):
                return _first_derivative(phi.evaluate_array, p, j, tau, scheme)
            # nested first-derivative stencils, second-derivative step scale
            hi = scheme.second_step(point[i])
            e = np.zeros(dim)
            e[i] = 1.0
            if scheme.order == 2:
                val = (inner(point + hi * e, t) - inner(point - hi * e, t)) / (2.0 * hi)
            else:
                val = (-inner(point + 2 * hi * e, t) + 8.0 * inner(point + hi * e, t)
                       - 8.0 * inner(point - hi * e, t) + inner(point - 2 * hi * e, t)) / (12.0 * hi)
            hess[i, j] = hess[j, i] = float(val)
    return hess


def laplacian(g: "metric_mod.Metric", phi: TensorField,
              scheme: DifferentiationScheme | None = None) -> TensorField:
    """Scalar field sum_ij g^{ij} (second partial i j of phi)."""
    if phi.valency.order != 0:
        raise ShapeError("laplacian needs a scalar field")
    scheme = _scheme(scheme)

    def func(point, t=None):
        hess = _hessian(phi, np.asarray(point, dtype=float), t, scheme)
        return float(np.sum(g.dual * hess))

    return TensorField(Valency(0, 0), func, phi.dim,
                       has_parameter=phi.has_parameter)


def dalembert(c: float, phi: TensorField,
              scheme: DifferentiationScheme | None = None) -> TensorField:
    """(1/c^2) d2(phi)/dt2 minus the Euclidean laplacian of phi.

    t is the external parameter, not a fourth coordinate. Static fields
    have zero time derivative, so the operator degenerates to -laplacian.
    """
    if not c > 0:
        raise ParameterError(f"wave speed must be positive, got {c}")
    scheme = _scheme(scheme)
    g = metric_mod.Metric.euclidean(phi.dim)
    lap = laplacian(g, phi, scheme)

    def func(point, t=None):
        point = np.asarray(point, dtype=float)
        spatial = lap.evaluate_array(point, t)
        if not phi.has_parameter:
            return -spatial
        h = scheme.second_step(t)
        if scheme.order == 2:
            ptt = (phi.evaluate_array(point, t + h)
                   - 2.0 * phi.evaluate_array(point, t)
                   + phi.evaluate_array(point, t - h)) / (h * h)
        else:
            ptt = (-phi.evaluate_array(point, t + 2 * h)
                   + 16.0 * phi.evaluate_array(point, t + h)
                   - 30.0 * phi.evaluate_array(point, t)
                   + 16.0 * phi.evaluate_array(point, t - h)
                   - phi.evaluate_array(point, t - 2 * h)) / (12.0 * h * h)
        return float(ptt) / (c * c) - spatial

    return TensorField(Valency(0, 0), func, phi.dim,
                       has_parameter=phi.has_parameter)


def rotor(g: "metric_mod.Metric", field: TensorField,
          scheme: DifferentiationScheme | None = None) -> TensorField:
    """Curl of a vector field: component r is sum g^{ri} w_ijk g^{jm} d_m X^k.

    With the identity metric this is the familiar determinant rule; the
    volume tensor w keeps it meaningful in any positively oriented skew
    basis.
    """
    if field.valency != Valency(1, 0):
        raise ShapeError("rotor needs a vector field")
    if field.dim != 3:
        raise ShapeError("rotor is defined for dimension 3")
    scheme = _scheme(scheme)
    omega = metric_mod.volume_tensor(g).array

    def func(point, t=None):
        table = derivative_table(field, point, t, scheme)  # [q, k] = d_q X^k
        return np.einsum("ri,ijk,jm,mk->r", g.dual, omega, g.dual, table)

    return TensorField(Valency(1, 0), func, field.dim,
                       has_parameter=field.has_parameter)
