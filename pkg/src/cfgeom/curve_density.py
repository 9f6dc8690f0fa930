"""Areal and angular densities of plane curves seen from an observation point.

For a unit-speed curve ``gamma`` and a point ``O``

    A(t) = |O gamma(t) x gamma'(t)|        (sector area rate)
    B(t) = kappa(t) / A(t)**2              (angular density)

Signs follow the counter-clockwise convention: a circle run counter-clockwise
around its centre has ``A > 0`` and ``kappa > 0``. Curves with a general
parametrization are accepted; every density is normalized to arclength.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np
from scipy import integrate

from .errors import CollinearError, DegenerateError, DomainError, NumericalError
from .polyline import Polyline, lls_of

QUAD_RTOL = 1e-10
QUAD_LIMIT = 500
DEGENERATE_TOL = 1e-9


def _cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


@dataclass(frozen=True)
class ParamCurve:
    """A regular C^2 plane curve with analytic first and second derivatives.

    ``eval``, ``deriv1`` and ``deriv2`` map a scalar or array ``t`` to an
    array of shape ``(2,) + shape(t)``.
    """

    eval: Callable
    deriv1: Callable
    deriv2: Callable
    domain: tuple
    param_kind: str = "general"
    # for reparametrized curves: arclength -> original parameter
    base_param: Optional[Callable] = field(default=None, compare=False)

    @property
    def span(self) -> float:
        return self.domain[1] - self.domain[0]

    def speed(self, t):
        d = self.deriv1(t)
        return np.hypot(d[0], d[1])

    def restrict(self, lo, hi) -> "ParamCurve":
        return replace(self, domain=(lo, hi))


@dataclass(frozen=True)
class DensitySample:
    t: float
    x: float
    y: float
    A: float
    B: float
    kappa: float


@dataclass(frozen=True)
class Preset:
    """A named curve together with its observation point and closed-form densities."""

    name: str
    params: dict
    curve: ParamCurve
    O: tuple
    areal: Callable
    angular: Callable


def areal_density(c: ParamCurve, O, t):
    """Signed sector-area rate ``det(gamma - O, gamma') / |gamma'|``."""
    p = c.eval(t)
    d = c.deriv1(t)
    return _cross((p[0] - O[0], p[1] - O[1]), d) / np.hypot(d[0], d[1])


def curvature(c: ParamCurve, t):
    d1 = c.deriv1(t)
    d2 = c.deriv2(t)
    return _cross(d1, d2) / np.hypot(d1[0], d1[1]) ** 3


def _fd_angular(c: ParamCurve, O, t: float, h: float) -> float:
    p0 = c.eval(t)
    pm = c.eval(t - h)
    pp = c.eval(t + h)
    # oriented so that the limit is +kappa/A^2 (counter-clockwise convention)
    turn = _cross(pp - p0, pm - p0)
    left = _cross(pm - O, p0 - O)
    right = _cross(p0 - O, pp - O)
    return turn / (h * c.speed(t) * left * right)


def angular_density(c: ParamCurve, O, t: float, method: str = "curvature", eps: float = 1e-4):
    """Angular density ``kappa / A**2``.

    ``method="finite_difference"`` evaluates the three-point quotient with
    arclength step ``eps`` and ``eps/2`` and combines them by one Richardson
    step (the quotient is even in the step, so the error drops to O(eps^4)).
    """
    O = np.asarray(O, dtype=float)
    if method == "curvature":
        a = areal_density(c, O, t)
        if np.any(np.abs(a) <= DEGENERATE_TOL):
            raise DegenerateError(f"areal density vanishes at t={t}: O gamma and gamma' collinear")
        return curvature(c, t) / a**2
    if method == "finite_difference":
        if abs(areal_density(c, O, t)) <= DEGENERATE_TOL:
            raise DegenerateError(f"areal density vanishes at t={t}: O gamma and gamma' collinear")
        h = eps / float(c.speed(t))
        coarse = _fd_angular(c, O, t, h)
        fine = _fd_angular(c, O, t, h / 2)
        return (4.0 * fine - coarse) / 3.0
    raise ValueError(f"unknown method {method!r}")


def sample(c: ParamCurve, O, ts) -> list[DensitySample]:
    O = np.asarray(O, dtype=float)
    out = []
    for t in ts:
        x, y = c.eval(t)
        a = float(areal_density(c, O, t))
        k = float(curvature(c, t))
        b = k / a**2 if abs(a) > DEGENERATE_TOL else math.nan
        out.append(DensitySample(float(t), float(x), float(y), a, b, k))
    return out


def _quad(f, lo, hi, rtol=QUAD_RTOL, limit=QUAD_LIMIT):
    val, err, info, *rest = integrate.quad(f, lo, hi, epsrel=rtol, epsabs=0.0,
                                           limit=limit, full_output=1)
    if rest:
        # quad reports trouble through a fourth return value
        raise NumericalError(f"quadrature on [{lo}, {hi}] did not converge: {rest[0].splitlines()[0]}")
    return val


def sector_area(c: ParamCurve, O, t0: float, t1: float, rtol: float = QUAD_RTOL) -> float:
    """Signed triangle-sector area ``(1/2) int det(gamma - O, gamma') dt`` swept from ``t0`` to ``t1``."""
    O = np.asarray(O, dtype=float)

    def rate(t):
        p = c.eval(t)
        return _cross(p - O, c.deriv1(t))

    return 0.5 * _quad(rate, t0, t1, rtol)


# -- presets -----------------------------------------------------------------


def _line(a=1.0, lo=-5.0, hi=5.0) -> Preset:
    a = float(a)
    if a == 0:
        raise DomainError("line x=a through O has zero areal density; need a != 0")
    zero = lambda s: np.zeros_like(np.asarray(s, float))
    curve = ParamCurve(
        eval=lambda s: np.array([a + zero(s), np.asarray(s, float)]),
        deriv1=lambda s: np.array([zero(s), 1 + zero(s)]),
        deriv2=lambda s: np.array([zero(s), zero(s)]),
        domain=(lo, hi),
        param_kind="arclength",
    )
    return Preset("line", {"a": a}, curve, (0.0, 0.0), areal=lambda t: a + zero(t), angular=zero)


def _ellipse_curve(a, b, lo, hi) -> ParamCurve:
    return ParamCurve(
        eval=lambda t: np.array([a * np.cos(t), b * np.sin(t)]),
        deriv1=lambda t: np.array([-a * np.sin(t), b * np.cos(t)]),
        deriv2=lambda t: np.array([-a * np.cos(t), -b * np.sin(t)]),
        domain=(lo, hi),
    )


def _check_ellipse(a, b):
    if not (a >= b > 0):
        raise DomainError(f"ellipse needs a >= b > 0, got a={a}, b={b}")


def _ellipse_center(a=2.0, b=1.0, lo=0.0, hi=2 * math.pi) -> Preset:
    a, b = float(a), float(b)
    _check_ellipse(a, b)
    root = lambda t: np.sqrt(a**2 * np.sin(t) ** 2 + b**2 * np.cos(t) ** 2)
    return Preset("ellipse_center", {"a": a, "b": b}, _ellipse_curve(a, b, lo, hi), (0.0, 0.0),
                  areal=lambda t: a * b / root(t),
                  angular=lambda t: 1.0 / (a * b * root(t)))


def _ellipse_focus(a=2.0, b=1.0, lo=0.0, hi=2 * math.pi) -> Preset:
    a, b = float(a), float(b)
    _check_ellipse(a, b)
    c = math.sqrt(a**2 - b**2)
    root = lambda t: np.sqrt(a**2 * np.sin(t) ** 2 + b**2 * np.cos(t) ** 2)
    return Preset("ellipse_focus", {"a": a, "b": b}, _ellipse_curve(a, b, lo, hi), (-c, 0.0),
                  areal=lambda t: (a * b + b * c * np.cos(t)) / root(t),
                  angular=lambda t: a / (b * root(t) * (a + np.cos(t) * c) ** 2))


def _log_spiral(a=1.0, b=0.1, lo=0.0, hi=2 * math.pi) -> Preset:
    a, b = float(a), float(b)
    if a <= 0:
        raise DomainError(f"spiral needs a > 0, got a={a}")
    k = math.sqrt(1 + b * b)

    def ev(t):
        r = a * np.exp(b * np.asarray(t, float))
        return np.array([r * np.cos(t), r * np.sin(t)])

    def d1(t):
        r = a * np.exp(b * np.asarray(t, float))
        return np.array([r * (b * np.cos(t) - np.sin(t)), r * (b * np.sin(t) + np.cos(t))])

    def d2(t):
        r = a * np.exp(b * np.asarray(t, float))
        c, s = np.cos(t), np.sin(t)
        return np.array([r * ((b * b - 1) * c - 2 * b * s), r * ((b * b - 1) * s + 2 * b * c)])

    return Preset("log_spiral", {"a": a, "b": b}, ParamCurve(ev, d1, d2, (lo, hi)), (0.0, 0.0),
                  areal=lambda t: a * np.exp(b * np.asarray(t, float)) / k,
                  angular=lambda t: np.exp(-3 * b * np.asarray(t, float)) * k / a**3)


PRESETS = {
    "line": _line,
    "ellipse_center": _ellipse_center,
    "ellipse_focus": _ellipse_focus,
    "log_spiral": _log_spiral,
}


def preset(name: str, **params) -> Preset:
    """Build a named curve: ``line(a)``, ``ellipse_center(a, b)``, ``ellipse_focus(a, b)``, ``log_spiral(a, b)``.

    ``lo``/``hi`` override the parameter domain.
    """
    try:
        factory = PRESETS[name]
    except KeyError:
        raise DomainError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    return factory(**params)


def ellipse_length(a: float, b: float) -> float:
    """Perimeter ``4a int_0^{pi/2} sqrt(1 - (1 - b^2/a^2) cos^2 t) dt``."""
    e2 = 1.0 - (b / a) ** 2
    return 4 * a * _quad(lambda t: math.sqrt(1 - e2 * math.cos(t) ** 2), 0.0, math.pi / 2)


@dataclass(frozen=True)
class KeplerLambda:
    lam: float
    length: float
    inverse_density_integral: float
    period: float


def kepler_lambda(a: float, b: float, T_e: float = 1.0, a_e: float = 1.0) -> KeplerLambda:
    """Speed factor for an orbit around the focus ``(-sqrt(a^2-b^2), 0)``.

    The body moves with speed ``lam / A``; ``lam`` follows from the period
    law ``T^2 / a^3 = T_e^2 / a_e^3`` with ``T = lam * int_0^L |1/A| ds``.
    """
    _check_ellipse(a, b)
    if T_e <= 0 or a_e <= 0:
        raise DomainError("reference period and semi-major axis must be positive")
    p = _ellipse_focus(a, b)
    length = ellipse_length(a, b)
    curve = p.curve
    # ds = |gamma'(t)| dt, integrate over one turn of the native parameter
    inv = _quad(lambda t: float(curve.speed(t)) / abs(float(p.areal(t))), 0.0, 2 * math.pi)
    lam = T_e / inv * (a / a_e) ** 1.5
    return KeplerLambda(lam, length, inv, lam * inv)


def kepler_motion(c: ParamCurve, O, areal: Callable, tau_end: float, step: float = 1e-3):
    """Move along ``c`` with speed ``1/A`` for clock time ``tau_end``; fixed-step RK4.

    Returns clock times and curve parameters ``(tau, t)``. ``areal`` is the
    density as a function of the curve parameter.
    """
    O = np.asarray(O, dtype=float)

    def rate(t):
        # ds/dtau = 1/A and ds = |gamma'| dt
        return 1.0 / (float(areal(t)) * float(c.speed(t)))

    n = max(1, int(math.ceil(tau_end / step)))
    h = tau_end / n
    taus = np.linspace(0.0, tau_end, n + 1)
    ts = np.empty(n + 1)
    t = c.domain[0]
    ts[0] = t
    for i in range(n):
        k1 = rate(t)
        k2 = rate(t + 0.5 * h * k1)
        k3 = rate(t + 0.5 * h * k2)
        k4 = rate(t + h * k3)
        t = t + h * (k1 + 2 * k2 + 2 * k3 + k4) / 6
        ts[i + 1] = t
    return taus, ts


def kepler_sweep_error(p: Preset, tau_end: float, step: float = 1e-3, checkpoints: int = 16) -> float:
    """Max ``|swept area - elapsed time|`` along Kepler motion on a preset.

    Areas are parallelogram areas ``|OA x OB|`` (twice the triangle sector),
    the unit in which the sector rate of the motion is exactly one.
    """
    taus, ts = kepler_motion(p.curve, p.O, p.areal, tau_end, step)
    idx = np.linspace(0, len(taus) - 1, checkpoints + 1).round().astype(int)
    t0 = ts[0]
    return max(abs(2 * sector_area(p.curve, p.O, t0, ts[i]) - taus[i]) for i in idx)


# -- arclength reparametrization ---------------------------------------------

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(20)


def _gl_integral(speed, lo, hi):
    """Gauss-Legendre integral of ``speed`` on ``[lo, hi]`` (arrays broadcast)."""
    lo = np.asarray(lo, float)[..., None]
    hi = np.asarray(hi, float)[..., None]
    mid, half = (hi + lo) / 2, (hi - lo) / 2
    return np.sum(_GL_WEIGHTS * speed(mid + half * _GL_NODES), axis=-1) * half[..., 0]


def by_arclength(c: ParamCurve, panels: int = 256, tol: float = 1e-10) -> ParamCurve:
    """Reparametrize ``c`` by arclength measured from ``c.domain[0]``; the result lives on ``[0, L]``.

    Cumulative length is tabulated with panel-wise Gauss-Legendre quadrature
    (checked against a halved-panel estimate) and inverted by safeguarded
    Newton iteration.
    """
    lo, hi = c.domain
    probe = c.speed(np.linspace(lo, hi, 101))
    if np.min(probe) <= 0:
        raise DomainError("curve is not regular (vanishing speed)")
    if c.param_kind == "arclength" or np.max(np.abs(probe - 1.0)) <= 1e-12:
        if lo == 0:
            return replace(c, param_kind="arclength", base_param=lambda s: s)
        return ParamCurve(lambda s: c.eval(lo + np.asarray(s, float)),
                          lambda s: c.deriv1(lo + np.asarray(s, float)),
                          lambda s: c.deriv2(lo + np.asarray(s, float)),
                          (0.0, hi - lo), "arclength", base_param=lambda s: lo + np.asarray(s, float))

    speed = c.speed
    knots = np.linspace(lo, hi, panels + 1)
    pieces = _gl_integral(speed, knots[:-1], knots[1:])
    mids = (knots[:-1] + knots[1:]) / 2
    check = _gl_integral(speed, knots[:-1], mids) + _gl_integral(speed, mids, knots[1:])
    if np.max(np.abs(pieces - check)) > tol * max(1.0, float(np.sum(pieces))) / panels:
        raise NumericalError("arclength quadrature did not converge; increase panels")
    cum = np.concatenate([[0.0], np.cumsum(pieces)])
    total = float(cum[-1])

    def t_of_s(s):
        s = np.asarray(s, float)
        i = np.clip(np.searchsorted(cum, s, side="right") - 1, 0, panels - 1)
        a, b = knots[i], knots[i + 1]
        # linear guess inside the panel, then Newton bracketed by the panel ends
        t = a + (b - a) * (s - cum[i]) / (cum[i + 1] - cum[i])
        for _ in range(30):
            f = cum[i] + _gl_integral(speed, a, t) - s
            step = f / speed(t)
            t_new = np.clip(t - step, np.minimum(a, b) - (b - a), np.maximum(a, b) + (b - a))
            done = np.all(np.abs(t_new - t) <= 1e-15 * (1 + np.abs(t)))
            t = t_new
            if done:
                break
        return t

    def ev(s):
        return c.eval(t_of_s(s))

    def d1(s):
        t = t_of_s(s)
        d = c.deriv1(t)
        return d / np.hypot(d[0], d[1])

    def d2(s):
        t = t_of_s(s)
        d = c.deriv1(t)
        dd = c.deriv2(t)
        v2 = d[0] ** 2 + d[1] ** 2
        tangential = (d[0] * dd[0] + d[1] * dd[1]) / v2
        return (dd - tangential * d) / v2

    return ParamCurve(ev, d1, d2, (0.0, total), "arclength", base_param=t_of_s)


# -- discretization ----------------------------------------------------------


@dataclass(frozen=True)
class StepDensity:
    """Piecewise constant density on ``n`` equal cells of ``[t0, t0 + T)``.

    ``values[j]`` is attached to cell ``j + first_cell``: area elements start
    at cell 0, angle elements (which live on interior vertices) at cell 1.
    """

    n: int
    T: float
    values: np.ndarray
    first_cell: int = 0
    t0: float = 0.0

    def cell(self, t):
        return np.floor(self.n * (np.asarray(t, float) - self.t0) / self.T).astype(int)

    def __call__(self, t):
        j = self.cell(t) - self.first_cell
        ok = (j >= 0) & (j < len(self.values))
        out = np.where(ok, self.values[np.clip(j, 0, len(self.values) - 1)], np.nan)
        return out if out.ndim else float(out)

    def cells(self):
        """``(value, cell_start, cell_end)`` for every stored value."""
        h = self.T / self.n
        for j, v in enumerate(self.values):
            k = j + self.first_cell
            yield v, self.t0 + k * h, self.t0 + (k + 1) * h


def discretize(c: ParamCurve, O, n: int) -> tuple[StepDensity, StepDensity]:
    """Normalized step densities of the inscribed broken line with ``n`` equal arclength chords.

    Area elements of a chord of length ``h = T/n`` are ``~ h A`` and angle
    elements ``~ -h B``, so both are rescaled by ``n/T``; the angle sign is
    flipped because the broken-line angle element of a left turn is negative.
    """
    if c.param_kind != "arclength":
        raise DomainError("discretize needs an arclength curve; apply by_arclength first")
    if n < 3:
        raise DomainError("need n >= 3")
    lo, hi = c.domain
    T = hi - lo
    ts = lo + T * np.arange(n + 1) / n
    pts = c.eval(ts)
    poly = Polyline([(float(x), float(y)) for x, y in zip(pts[0], pts[1])], (float(O[0]), float(O[1])))
    try:
        elems = lls_of(poly, tol=0.0)
    except CollinearError as exc:
        raise CollinearError(f"chord {exc.index} is collinear with O", index=exc.index) from exc
    elems = np.asarray(elems, dtype=float)
    scale = n / T
    areas = StepDensity(n, T, scale * elems[0::2], 0, lo)
    angles = StepDensity(n, T, -scale * elems[1::2] + 0.0, 1, lo)
    return areas, angles


def max_interior_error(step: StepDensity, exact: Callable, skip: int = 1) -> float:
    """Largest deviation of a step density from ``exact`` at the cell edges.

    The first and last ``skip`` cells of the curve are ignored.
    """
    worst = 0.0
    for v, a, b in step.cells():
        k = round((a - step.t0) * step.n / step.T)
        if k < skip or k >= step.n - skip:
            continue
        worst = max(worst, abs(v - float(exact(a))), abs(v - float(exact(b))))
    return worst


def menger_curvature(p0, p1, p2) -> float:
    """Signed curvature of the circle through three points."""
    a = np.hypot(*(np.asarray(p1) - p0))
    b = np.hypot(*(np.asarray(p2) - p1))
    c = np.hypot(*(np.asarray(p2) - p0))
    return 2 * _cross(np.asarray(p1) - p0, np.asarray(p2) - p0) / (a * b * c)
