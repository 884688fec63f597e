"""Curvilinear charts: Jacobi matrices, moving frames, Christoffel symbols,
covariant derivatives, and the chart versions of the vector-calculus
operators.

A chart is an invertible differentiable map between curvilinear coordinates
y and ambient Cartesian coordinates x. Its Jacobi matrices

    S^i_j = dx^i/dy^j        T^i_j = dy^i/dx^j (taken at x(y))

are mutually inverse wherever the chart is regular. Columns of S form the
moving frame, the pointwise basis tangent to the coordinate lines; its Gram
matrix is the metric in the chart. Christoffel symbols are assembled from
the frame derivatives, and the covariant derivative corrects the plain
partial derivative with one Gamma term per slot, keeping tensor character.

Built-in charts (identity, cylindrical, spherical) carry analytic Jacobians
and analytic Jacobian derivatives. Custom charts may supply only the
forward/inverse maps; everything else falls back to central finite
differences. Singular points (cylindrical axis, spherical poles) are
excluded by domain predicates and fail fast with DomainError.
"""

from __future__ import annotations

import json
import math
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import (
    DegenerateTransition,
    DomainError,
    ParameterError,
    ShapeError,
)
from .fields import (
    DEFAULT_SCHEME,
    DifferentiationScheme,
    TensorField,
    _hessian,
    _probe,
    derivative_table,
)
from .frames import Basis
from .metric import Metric, volume_tensor
from .tensors import (
    NEW_TO_OLD,
    OLD_TO_NEW,
    DenseTensor,
    TransitionPair,
    Valency,
    invert_matrix,
)

__all__ = [
    "Chart", "ChristoffelArray", "builtin_chart", "load_chart", "jacobians",
    "jacobian_direct", "jacobian_inverse", "jacobian_derivative",
    "moving_frame", "metric_in_chart", "christoffel", "christoffel_alt",
    "covariant_derivative", "chart_to_chart_transform", "coordinate_line",
    "gradient_covector_in_chart", "gradient_vector_in_chart",
    "divergence_in_chart", "laplacian_in_chart", "rotor_in_chart",
]

_EPS = float(np.finfo(float).eps)
_JAC_STEP = _EPS ** (1.0 / 3.0)
_DSTEP = 1e-5  # FD step scale for Jacobian derivatives
FD_CONSISTENCY_TOL = 1e-4
ANALYTIC_CONSISTENCY_TOL = 1e-6


class Chart:
    """Coordinate chart with optional analytic Jacobian data.

    Parameters
    ----------
    name : str
    forward : callable y -> x (ambient Cartesian coordinates)
    inverse : callable x -> y
    jac_forward : callable y -> S matrix, optional
    jac_inverse : callable y -> T matrix (at x(y)), optional
    jac_forward_partials : callable y -> array dS with dS[q, i, j] =
        d S^q_i / d y^j, optional
    domain : callable y -> bool, optional (default: everywhere)
    sample_bounds : three (lo, hi) pairs used when drawing random domain
        points for audits and demos, optional
    """

    __slots__ = ("name", "forward", "inverse", "jac_forward", "jac_inverse",
                 "jac_forward_partials", "domain", "sample_bounds", "dim")

    def __init__(self, name: str, forward: Callable, inverse: Callable,
                 jac_forward: Optional[Callable] = None,
                 jac_inverse: Optional[Callable] = None,
                 jac_forward_partials: Optional[Callable] = None,
                 domain: Optional[Callable] = None,
                 sample_bounds: Optional[Sequence] = None,
                 dim: int = 3):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "forward", forward)
        object.__setattr__(self, "inverse", inverse)
        object.__setattr__(self, "jac_forward", jac_forward)
        object.__setattr__(self, "jac_inverse", jac_inverse)
        object.__setattr__(self, "jac_forward_partials", jac_forward_partials)
        object.__setattr__(self, "domain", domain)
        if sample_bounds is None:
            sample_bounds = ((-1.0, 1.0),) * dim
        object.__setattr__(self, "sample_bounds",
                           tuple((float(lo), float(hi)) for lo, hi in sample_bounds))
        object.__setattr__(self, "dim", dim)

    def __setattr__(self, name, value):
        raise AttributeError("Chart is immutable")

    @property
    def analytic(self) -> bool:
        return self.jac_forward is not None and self.jac_inverse is not None

    def contains(self, y) -> bool:
        y = np.asarray(y, dtype=float)
        if y.shape != (self.dim,):
            raise ShapeError(f"point shape {y.shape} does not match dim {self.dim}")
        if not np.all(np.isfinite(y)):
            return False
        return True if self.domain is None else bool(self.domain(y))

    def require(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        if not self.contains(y):
            raise DomainError(f"point {y.tolist()} outside domain of chart {self.name!r}")
        return y

    def sample_points(self, n: int, rng) -> np.ndarray:
        """n random domain points inside the chart's sampling box."""
        lo = np.array([b[0] for b in self.sample_bounds])
        hi = np.array([b[1] for b in self.sample_bounds])
        pts = []
        attempts = 0
        while len(pts) < n:
            y = lo + (hi - lo) * rng.random(self.dim)
            attempts += 1
            if self.contains(y):
                pts.append(y)
            if attempts > 100 * max(n, 10):
                raise DomainError(
                    f"could not sample {n} points inside chart {self.name!r}")
        return np.array(pts)

    def __repr__(self):
        return f"Chart({self.name!r})"


class ChristoffelArray:
    """Christoffel symbols at one point: values[k, i, j] holds the symbol
    with upper index k and lower indices i, j."""

    __slots__ = ("values", "point")

    def __init__(self, values, point):
        values = np.asarray(values, dtype=float)
        if values.shape != (3, 3, 3):
            raise ShapeError(f"expected a 3x3x3 array, got {values.shape}")
        values = values.copy()
        values.flags.writeable = False
        point = np.asarray(point, dtype=float).copy()
        point.flags.writeable = False
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "point", point)

    def __setattr__(self, name, value):
        raise AttributeError("ChristoffelArray is immutable")

    def get(self, k: int, i: int, j: int) -> float:
        """Symbol with 1-based indices."""
        if not all(1 <= a <= 3 for a in (k, i, j)):
            raise ShapeError("Christoffel indices run from 1 to 3")
        return float(self.values[k - 1, i - 1, j - 1])

    def symmetry_residual(self) -> float:
        return float(np.max(np.abs(self.values - np.swapaxes(self.values, 1, 2))))

    def __repr__(self):
        return f"ChristoffelArray(point={self.point.tolist()})"


# -- built-in charts -----------------------------------------------------------


def _cylindrical() -> Chart:
    def forward(y):
        r, th, z = y
        return np.array([r * math.cos(th), r * math.sin(th), z])

    def inverse(x):
        return np.array([math.hypot(x[0], x[1]), math.atan2(x[1], x[0]), x[2]])

    def jac_forward(y):
        r, th, _ = y
        c, s = math.cos(th), math.sin(th)
        return np.array([[c, -r * s, 0.0],
                         [s, r * c, 0.0],
                         [0.0, 0.0, 1.0]])

    def jac_inverse(y):
        r, th, _ = y
        c, s = math.cos(th), math.sin(th)
        return np.array([[c, s, 0.0],
                         [-s / r, c / r, 0.0],
                         [0.0, 0.0, 1.0]])

    def jac_forward_partials(y):
        r, th, _ = y
        c, s = math.cos(th), math.sin(th)
        dS = np.zeros((3, 3, 3))
        # d/dr
        dS[:, :, 0] = [[0.0, -s, 0.0], [0.0, c, 0.0], [0.0, 0.0, 0.0]]
        # d/dtheta
        dS[:, :, 1] = [[-s, -r * c, 0.0], [c, -r * s, 0.0], [0.0, 0.0, 0.0]]
        return dS

    return Chart(
        "cylindrical", forward, inverse, jac_forward, jac_inverse,
        jac_forward_partials,
        domain=lambda y: y[0] > 0.0,
        sample_bounds=((0.5, 3.0), (-math.pi, math.pi), (-2.0, 2.0)),
    )


def _spherical() -> Chart:
    # theta is the polar angle measured from the +z axis, phi the azimuth
    def forward(y):
        r, th, ph = y
        st, ct = math.sin(th), math.cos(th)
        cp, sp = math.cos(ph), math.sin(ph)
        return np.array([r * st * cp, r * st * sp, r * ct])

    def inverse(x):
        r = float(np.linalg.norm(x))
        if r == 0.0:
            raise DomainError("origin has no spherical coordinates")
        return np.array([r, math.acos(max(-1.0, min(1.0, x[2] / r))),
                         math.atan2(x[1], x[0])])

    def jac_forward(y):
        r, th, ph = y
        st, ct = math.sin(th), math.cos(th)
        cp, sp = math.cos(ph), math.sin(ph)
        return np.array([
            [st * cp, r * ct * cp, -r * st * sp],
            [st * sp, r * ct * sp, r * st * cp],
            [ct, -r * st, 0.0],
        ])

    def jac_inverse(y):
        r, th, ph = y
        st, ct = math.sin(th), math.cos(th)
        cp, sp = math.cos(ph), math.sin(ph)
        return np.array([
            [st * cp, st * sp, ct],
            [ct * cp / r, ct * sp / r, -st / r],
            [-sp / (r * st), cp / (r * st), 0.0],
        ])

    def jac_forward_partials(y):
        r, th, ph = y
        st, ct = math.sin(th), math.cos(th)
        cp, sp = math.cos(ph), math.sin(ph)
        dS = np.zeros((3, 3, 3))
        # d/dr
        dS[:, :, 0] = [
            [0.0, ct * cp, -st * sp],
            [0.0, ct * sp, st * cp],
            [0.0, -st, 0.0],
        ]
        # d/dtheta
        dS[:, :, 1] = [
            [ct * cp, -r * st * cp, -r * ct * sp],
            [ct * sp, -r * st * sp, r * ct * cp],
            [-st, -r * ct, 0.0],
        ]
        # d/dphi
        dS[:, :, 2] = [
            [-st * sp, -r * ct * sp, -r * st * cp],
            [st * cp, r * ct * cp, -r * st * sp],
            [0.0, 0.0, 0.0],
        ]
        return dS

    return Chart(
        "spherical", forward, inverse, jac_forward, jac_inverse,
        jac_forward_partials,
        domain=lambda y: y[0] > 0.0 and 0.0 < y[1] < math.pi,
        sample_bounds=((0.5, 3.0), (0.3, math.pi - 0.3), (-math.pi, math.pi)),
    )


def _identity() -> Chart:
    eye = np.eye(3)

    return Chart(
        "identity",
        forward=lambda y: np.asarray(y, dtype=float).copy(),
        inverse=lambda x: np.asarray(x, dtype=float).copy(),
        jac_forward=lambda y: eye.copy(),
        jac_inverse=lambda y: eye.copy(),
        jac_forward_partials=lambda y: np.zeros((3, 3, 3)),
        sample_bounds=((-2.0, 2.0),) * 3,
    )


_BUILTIN = {"cylindrical": _cylindrical, "spherical": _spherical,
            "identity": _identity}


def builtin_chart(name: str) -> Chart:
    """Named chart with analytic Jacobians: cylindrical, spherical, identity."""
    try:
        factory = _BUILTIN[name]
    except KeyError:
        raise ParameterError(
            f"unknown chart {name!r}; choose from {sorted(_BUILTIN)}")
    return factory()


# -- Jacobi matrices -----------------------------------------------------------


def _fd_jacobian(mapping: Callable, point: np.ndarray) -> np.ndarray:
    """Central-difference Jacobian of a vector map, column per coordinate."""
    dim = point.shape[0]
    jac = np.empty((dim, dim))
    for j in range(dim):
        h = _JAC_STEP * max(1.0, abs(point[j]))
        e = np.zeros(dim)
        e[j] = 1.0
        plus = np.asarray(mapping(point + h * e), dtype=float)
        minus = np.asarray(mapping(point - h * e), dtype=float)
        jac[:, j] = (plus - minus) / (2.0 * h)
    return jac


def jacobian_direct(chart: Chart, y) -> np.ndarray:
    """S at y: analytic when the chart has it, else central FD on forward."""
    y = chart.require(y)
    if chart.jac_forward is not None:
        return np.asarray(chart.jac_forward(y), dtype=float)
    return _fd_jacobian(chart.forward, y)


def jacobian_inverse(chart: Chart, y) -> np.ndarray:
    """T at the same point: analytic, else central FD on inverse at x(y)."""
    y = chart.require(y)
    if chart.jac_inverse is not None:
        return np.asarray(chart.jac_inverse(y), dtype=float)
    x = np.asarray(chart.forward(y), dtype=float)
    return _fd_jacobian(chart.inverse, x)


def jacobians(chart: Chart, y) -> TransitionPair:
    """Transition pair (S, T) of the chart at y.

    S comes from the forward map and T from the inverse map; their product
    is checked against the identity (1e-6 when both are analytic, 1e-4 for
    FD) so a broken inverse map surfaces as DegenerateTransition. The
    returned pair always satisfies the strict pair invariant: when the
    independently obtained T is not exact enough, S is inverted instead.
    """
    y = chart.require(y)
    S = jacobian_direct(chart, y)
    T = jacobian_inverse(chart, y)
    tol = ANALYTIC_CONSISTENCY_TOL if chart.analytic else FD_CONSISTENCY_TOL
    residual = float(np.max(np.abs(T @ S - np.eye(chart.dim))))
    if not math.isfinite(residual) or residual > tol:
        raise DegenerateTransition(
            f"Jacobi matrices of chart {chart.name!r} at {y.tolist()} are not "
            f"mutually inverse (residual {residual!r})")
    if residual > 1e-10:
        T = invert_matrix(S)
    return TransitionPair(S, T)


def jacobian_derivative(chart: Chart, y) -> np.ndarray:
    """dS[q, i, j] = second partial d^2 x^q / dy^i dy^j of the forward map.

    Uses analytic second partials when supplied; otherwise central FD on
    the analytic Jacobian with step 1e-5 * max(1, |y_j|); otherwise direct
    second-difference stencils on the forward map.
    """
    y = chart.require(y)
    dim = chart.dim
    if chart.jac_forward_partials is not None:
        dS = np.asarray(chart.jac_forward_partials(y), dtype=float)
        if dS.shape != (dim, dim, dim):
            raise ShapeError(f"jac_forward_partials returned shape {dS.shape}")
        return dS
    if chart.jac_forward is not None:
        dS = np.empty((dim, dim, dim))
        for j in range(dim):
            h = _DSTEP * max(1.0, abs(y[j]))
            e = np.zeros(dim)
            e[j] = 1.0
            dS[:, :, j] = (np.asarray(chart.jac_forward(y + h * e), dtype=float)
                           - np.asarray(chart.jac_forward(y - h * e), dtype=float)) / (2.0 * h)
        return dS
    # no analytic Jacobian at all: second differences of the forward map
    hstep = _EPS ** 0.25
    dS = np.empty((dim, dim, dim))
    f0 = np.asarray(chart.forward(y), dtype=float)
    steps = [hstep * max(1.0, abs(y[a])) for a in range(dim)]
    for i in range(dim):
        hi = steps[i]
        ei = np.zeros(dim)
        ei[i] = 1.0
        dS[:, i, i] = (np.asarray(chart.forward(y + hi * ei), dtype=float)
                       - 2.0 * f0
                       + np.asarray(chart.forward(y - hi * ei), dtype=float)) / (hi * hi)
        for j in range(i + 1, dim):
            hj = steps[j]
            ej = np.zeros(dim)
            ej[j] = 1.0
            mixed = (np.asarray(chart.forward(y + hi * ei + hj * ej), dtype=float)
                     - np.asarray(chart.forward(y + hi * ei - hj * ej), dtype=float)
                     - np.asarray(chart.forward(y - hi * ei + hj * ej), dtype=float)
                     + np.asarray(chart.forward(y - hi * ei - hj * ej), dtype=float)
                     ) / (4.0 * hi * hj)
            dS[:, i, j] = mixed
            dS[:, j, i] = mixed
    return dS


# -- frame, metric, Christoffel -------------------------------------------------


def moving_frame(chart: Chart, y) -> Basis:
    """Basis of tangent vectors to the coordinate lines (columns of S)."""
    return Basis(jacobian_direct(chart, y))


def metric_in_chart(chart: Chart, y) -> Metric:
    """Gram matrix of the moving frame: g_ij = (E_i, E_j) = (S^T S)_ij."""
    S = jacobian_direct(chart, y)
    return Metric(S.T @ S)


def christoffel(chart: Chart, y) -> ChristoffelArray:
    """Gamma^k_ij = sum_q T^k_q dS^q_i/dy^j at y."""
    y = chart.require(y)
    T = jacobians(chart, y).T
    dS = jacobian_derivative(chart, y)
    gamma = np.einsum("kq,qij->kij", T, dS)
    return ChristoffelArray(gamma, y)


def christoffel_alt(chart: Chart, y) -> np.ndarray:
    """Alternative route: Gamma^k_ij = -sum_q S^q_i dT^k_q/dy^j.

    dT/dy is taken by central FD on the inverse Jacobian; kept as a raw
    array for cross-checking the main construction.
    """
    y = chart.require(y)
    S = jacobian_direct(chart, y)
    dim = chart.dim
    dT = np.empty((dim, dim, dim))
    for j in range(dim):
        h = _DSTEP * max(1.0, abs(y[j]))
        e = np.zeros(dim)
        e[j] = 1.0
        dT[:, :, j] = (jacobian_inverse(chart, y + h * e)
                       - jacobian_inverse(chart, y - h * e)) / (2.0 * h)
    return -np.einsum("qi,kqj->kij", S, dT)


# -- covariant derivative --------------------------------------------------------


def covariant_derivative(chart: Chart, field: TensorField,
                         scheme: DifferentiationScheme | None = None) -> TensorField:
    """Gamma-corrected derivative of a field given in chart coordinates.

    Valency (r, s) -> (r, s+1) with the new covariant slot first among the
    lower slots, matching the Cartesian nabla. Each upper slot contributes
    +Gamma X, each lower slot -Gamma X; in the identity chart all
    corrections vanish and this is exactly the fields-module nabla.
    """
    scheme = scheme if scheme is not None else DEFAULT_SCHEME
    r, s = field.valency.r, field.valency.s
    out = Valency(r, s + 1)

    def func(y, t=None):
        y = chart.require(y)
        table = derivative_table(field, y, t, scheme)  # [p, components]
        if r + s:
            arr = field.evaluate_array(y, t)
            gamma = christoffel(chart, y).values
            for a in range(r):
                term = np.tensordot(gamma, arr, axes=([2], [a]))  # (k, p, rest)
                term = np.moveaxis(term, 1, 0)                    # (p, k, rest)
                table = table + np.moveaxis(term, 1, 1 + a)
            for b in range(s):
                a = r + b
                term = np.tensordot(gamma, arr, axes=([0], [a]))  # (p, j, rest)
                table = table - np.moveaxis(term, 1, 1 + a)
        return np.moveaxis(table, 0, r)

    return TensorField(out, func, field.dim, has_parameter=field.has_parameter)


def chart_to_chart_transform(field: TensorField, source: Chart,
                             target: Chart) -> TensorField:
    """The same tensor field, re-expressed in another chart's frame.

    Evaluation at target coordinates walks through the ambient Cartesian
    point: frame components at the matching source point are pushed to the
    ambient basis with the source Jacobians and pulled back with the
    target's.
    """

    def func(y_target, t=None):
        y_target = target.require(y_target)
        x = np.asarray(target.forward(y_target), dtype=float)
        y_source = np.asarray(source.inverse(x), dtype=float)
        if not source.contains(y_source):
            raise DomainError(
                f"point {x.tolist()} is outside chart {source.name!r}; "
                "charts do not overlap here")
        tensor = field.evaluate(y_source, t)
        ambient = tensor.transform(jacobians(source, y_source), NEW_TO_OLD)
        return ambient.transform(jacobians(target, y_target), OLD_TO_NEW).array

    return TensorField(field.valency, func, field.dim,
                       has_parameter=field.has_parameter)


def coordinate_line(chart: Chart, y0, axis: int, values) -> np.ndarray:
    """Ambient points traced by varying one chart coordinate.

    axis is 1-based; values are the parameter samples substituted into that
    coordinate slot.
    """
    y0 = chart.require(y0)
    if not 1 <= axis <= chart.dim:
        raise ShapeError(f"axis {axis} out of range 1..{chart.dim}")
    pts = []
    for v in np.asarray(values, dtype=float):
        y = y0.copy()
        y[axis - 1] = v
        pts.append(np.asarray(chart.forward(chart.require(y)), dtype=float))
    return np.array(pts)


# -- vector calculus in a chart ---------------------------------------------------


def gradient_covector_in_chart(chart: Chart, phi: TensorField,
                               scheme: DifferentiationScheme | None = None) -> TensorField:
    """Covariant gradient of a scalar; for scalars just the y-partials."""
    if phi.valency.order != 0:
        raise ShapeError("gradient needs a scalar field")
    return covariant_derivative(chart, phi, scheme)


def gradient_vector_in_chart(chart: Chart, phi: TensorField,
                             scheme: DifferentiationScheme | None = None) -> TensorField:
    """Gradient with the index raised by the chart metric."""
    covector = gradient_covector_in_chart(chart, phi, scheme)

    def func(y, t=None):
        g = metric_in_chart(chart, y)
        return g.dual @ covector.evaluate_array(y, t)

    return TensorField(Valency(1, 0), func, phi.dim,
                       has_parameter=phi.has_parameter)


def divergence_in_chart(chart: Chart, field: TensorField, slot: int = 1,
                        scheme: DifferentiationScheme | None = None) -> TensorField:
    """Contraction of the covariant derivative with an upper slot."""
    if field.valency.r < 1:
        raise ShapeError("divergence needs at least one upper slot")
    if not 1 <= slot <= field.valency.r:
        raise ShapeError(f"upper slot {slot} out of range 1..{field.valency.r}")
    grad = covariant_derivative(chart, field, scheme)

    def func(y, t=None):
        return grad.evaluate(y, t).contract(slot, 1).array

    return TensorField(Valency(field.valency.r - 1, field.valency.s),
                       func, field.dim, has_parameter=field.has_parameter)


def laplacian_in_chart(chart: Chart, phi: TensorField,
                       scheme: DifferentiationScheme | None = None) -> TensorField:
    """sum_ij g^ij (d_i d_j phi - Gamma^n_ij d_n phi) over the chart metric.

    For a scalar the second covariant derivative expands into the Hessian
    minus a single Gamma correction, so no nested differencing is needed.
    """
    if phi.valency.order != 0:
        raise ShapeError("laplacian needs a scalar field")
    scheme = scheme if scheme is not None else DEFAULT_SCHEME

    def func(y, t=None):
        y = chart.require(y)
        g = metric_in_chart(chart, y)
        gamma = christoffel(chart, y).values
        hess = _hessian(phi, y, t, scheme)
        first = derivative_table(phi, y, t, scheme)
        second = hess - np.einsum("nij,n->ij", gamma, first)
        return float(np.sum(g.dual * second))

    return TensorField(Valency(0, 0), func, phi.dim,
                       has_parameter=phi.has_parameter)


def rotor_in_chart(chart: Chart, field: TensorField,
                   scheme: DifferentiationScheme | None = None) -> TensorField:
    """Curl against the chart metric and its volume tensor."""
    if field.valency != Valency(1, 0):
        raise ShapeError("rotor needs a vector field")
    if field.dim != 3:
        raise ShapeError("rotor is defined for dimension 3")
    scheme = scheme if scheme is not None else DEFAULT_SCHEME
    grad = covariant_derivative(chart, field, scheme)

    def func(y, t=None):
        y = chart.require(y)
        g = metric_in_chart(chart, y)
        omega = volume_tensor(g).array
        cov = grad.evaluate_array(y, t)  # [k, m] = covariant d_m X^k
        return np.einsum("ri,ijk,jm,km->r", g.dual, omega, g.dual, cov)

    return TensorField(Valency(1, 0), func, field.dim,
                       has_parameter=field.has_parameter)


# -- custom charts from coefficient tables ----------------------------------------


def _compile_component(terms: list, where: str) -> Callable:
    """Compile one coordinate map component from its coefficient table.

    Each term is {"coeff": c, "powers": [p1,p2,p3]} with an optional
    "trig": [spec|null, ...] where spec = {"fn": "sin"|"cos", "freq": f}.
    The term value is c * prod_a y_a**p_a * trig_a(freq_a * y_a).
    """
    compiled = []
    for n, term in enumerate(terms):
        if not isinstance(term, dict) or "coeff" not in term:
            raise ParameterError(f"{where}: term {n} needs a 'coeff'")
        coeff = float(term["coeff"])
        powers = [int(p) for p in term.get("powers", [0, 0, 0])]
        if len(powers) != 3 or any(p < 0 for p in powers):
            raise ParameterError(f"{where}: term {n} powers must be three counts")
        trig = term.get("trig", [None, None, None])
        if len(trig) != 3:
            raise ParameterError(f"{where}: term {n} trig must have three entries")
        trig_fns = []
        for spec in trig:
            if spec is None:
                trig_fns.append(None)
                continue
            fn = {"sin": math.sin, "cos": math.cos}.get(spec.get("fn"))
            if fn is None:
                raise ParameterError(f"{where}: term {n} trig fn must be sin or cos")
            trig_fns.append((fn, float(spec.get("freq", 1.0))))
        compiled.append((coeff, powers, trig_fns))

    def component(y):
        total = 0.0
        for coeff, powers, trig_fns in compiled:
            value = coeff
            for a in range(3):
                if powers[a]:
                    value *= y[a] ** powers[a]
                if trig_fns[a] is not None:
                    fn, freq = trig_fns[a]
                    value *= fn(freq * y[a])
            total += value
        return total

    return component


def _compile_map(spec: list, where: str) -> Callable:
    if not isinstance(spec, list) or len(spec) != 3:
        raise ParameterError(f"{where}: expected three component term lists")
    components = [_compile_component(spec[i], f"{where}[{i}]") for i in range(3)]

    def mapping(p):
        return np.array([c(p) for c in components])

    return mapping


def load_chart(source) -> Chart:
    """Chart from a JSON config: coefficient tables for forward and inverse.

    ``source`` may be a path, a JSON string, or an already-parsed dict. The
    config must define "forward" and "inverse" as three term lists each;
    optional "bounds" {"min": [...], "max": [...]} (null entries mean
    unbounded) both restrict the domain and set the sampling box. Jacobians
    are taken by central finite differences.
    """
    if isinstance(source, dict):
        config = source
    else:
        text = str(source)
        if text.lstrip().startswith("{"):
            config = json.loads(text)
        else:
            with open(text, "r", encoding="utf-8") as fh:
                config = json.load(fh)
    if "forward" not in config or "inverse" not in config:
        raise ParameterError("chart config needs 'forward' and 'inverse' maps")
    name = str(config.get("name", "custom"))
    forward = _compile_map(config["forward"], f"chart {name!r} forward")
    inverse = _compile_map(config["inverse"], f"chart {name!r} inverse")

    bounds = config.get("bounds") or {}
    lo = bounds.get("min", [None, None, None])
    hi = bounds.get("max", [None, None, None])
    if len(lo) != 3 or len(hi) != 3:
        raise ParameterError("bounds need three min and three max entries")

    def domain(y):
        for a in range(3):
            if lo[a] is not None and not y[a] > lo[a]:
                return False
            if hi[a] is not None and not y[a] < hi[a]:
                return False
        return True

    sample = []
    for a in range(3):
        a_lo = -1.0 if lo[a] is None else float(lo[a])
        a_hi = 1.0 if hi[a] is None else float(hi[a])
        span = a_hi - a_lo
        if not span > 0:
            raise ParameterError("bounds must leave an open interval per axis")
        sample.append((a_lo + 0.1 * span, a_hi - 0.1 * span))

    has_domain = any(b is not None for b in list(lo) + list(hi))
    return Chart(name, forward, inverse,
                 domain=domain if has_domain else None,
                 sample_bounds=sample)
