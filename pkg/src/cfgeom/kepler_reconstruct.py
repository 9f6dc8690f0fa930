"""Reconstruction of a unit-speed curve from its areal density.

In polar coordinates ``(r, phi)`` about ``O`` a unit-speed curve with areal
density ``A(s)`` solves

    r^2 phi' = A,        r'^2 + r^2 phi'^2 = 1,

that is ``phi' = A / r^2`` and ``r' = +-sqrt(1 - A^2 / r^2)``. The sign
(branch) changes where the radicand vanishes: at those turning points the
velocity is orthogonal to the radius vector.

The right-hand side is not Lipschitz at a turning point, and the data ``A``
alone admits two continuations there. A turning point is a critical point
of ``A`` where ``r = |A|``, and ``z = r r'`` solves ``z z' - z + A A' = 0``,
whose power series about the turning point is fixed by one root of
``c^2 - c + (A A')' = 0``. The integrator picks the root that matches the
approach, bridges the turning point with that series, flips the branch and
carries on with fixed-step RK4.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.polynomial import Polynomial

from .errors import DegenerateError, DomainError, NumericalError


class Feasibility(enum.Enum):
    NO_CURVE = "no_curve"
    UNIQUE_LOCAL = "unique_local"
    DEGENERATE = "degenerate"


def feasible(A0: float, r0: float, switch_tol: float = 1e-9) -> Feasibility:
    """Classify start data: a curve exists and is locally unique iff ``0 < |A0| < r0``."""
    if r0 <= 0:
        raise DomainError(f"start radius must be positive, got {r0}")
    a = abs(A0)
    if a <= switch_tol or abs(a - r0) <= switch_tol:
        return Feasibility.DEGENERATE
    if a > r0:
        return Feasibility.NO_CURVE
    return Feasibility.UNIQUE_LOCAL


@dataclass(frozen=True)
class PolarState:
    r: float
    phi: float
    branch: int = 1

    def __post_init__(self):
        if self.branch not in (1, -1):
            raise DomainError("branch must be +1 or -1")
        if not self.r > 0:
            raise DomainError("radius must be positive")

    @classmethod
    def from_xy(cls, x: float, y: float, branch: int = 1) -> "PolarState":
        return cls(math.hypot(x, y), math.atan2(y, x), branch)


@dataclass(frozen=True)
class ReconstructionSpec:
    A_fn: Callable[[float], float]
    start: PolarState
    span: float
    step: float = 1e-4
    switch_tol: float = 1e-6

    def __post_init__(self):
        if self.step <= 0 or self.step > self.span / 10:
            raise DomainError("step must be positive and at most span/10")
        if self.switch_tol <= 0:
            raise DomainError("switch_tol must be positive")


@dataclass
class Reconstruction:
    t: np.ndarray
    r: np.ndarray
    phi: np.ndarray
    branch: np.ndarray
    events: list = field(default_factory=list)
    evaluations: int = 0

    @property
    def x(self):
        return self.r * np.cos(self.phi)

    @property
    def y(self):
        return self.r * np.sin(self.phi)

    def rows(self):
        for t, r, p, b in zip(self.t, self.r, self.phi, self.branch):
            yield float(t), r * math.cos(p), r * math.sin(p), float(r), float(p), int(b)


# turning-point bridge: the series covers BRIDGE_HALF_WIDTH arclength on each
# side of the turning point (at least BRIDGE_MIN_STEPS steps); A is fitted on a
# slightly wider window with FIT_POINTS Chebyshev nodes
BRIDGE_HALF_WIDTH = 0.05
BRIDGE_MIN_STEPS = 4
SERIES_ORDER = 12
FIT_POINTS = 64
FIT_MARGIN = 1.5
# below this |A'| and |A''| the density counts as flat near a turning point
FLAT_TOL = 1e-7


class _Integrator:
    def __init__(self, spec: ReconstructionSpec):
        self.spec = spec
        self.A = spec.A_fn
        self.evals = 0

    def radicand(self, s, r):
        self.evals += 1
        a = self.A(s)
        return 1.0 - (a / r) ** 2, a

    def rhs(self, s, r, branch):
        rad, a = self.radicand(s, r)
        return branch * math.sqrt(max(rad, 0.0)), a / (r * r), rad

    def rk4(self, s, r, phi, branch, h):
        """One RK4 step; also returns the smallest raw radicand met by the stages."""
        k1r, k1p, m1 = self.rhs(s, r, branch)
        k2r, k2p, m2 = self.rhs(s + h / 2, r + h / 2 * k1r, branch)
        k3r, k3p, m3 = self.rhs(s + h / 2, r + h / 2 * k2r, branch)
        k4r, k4p, m4 = self.rhs(s + h, r + h * k3r, branch)
        r_new = r + h / 6 * (k1r + 2 * k2r + 2 * k3r + k4r)
        phi_new = phi + h / 6 * (k1p + 2 * k2p + 2 * k3p + k4p)
        return r_new, phi_new, min(m1, m2, m3, m4)


def _fit_taylor(A_fn, center, half, span, degree):
    """Taylor coefficients of ``A`` about ``center`` from a Chebyshev-node fit."""
    lo, hi = max(0.0, center - half), min(span, center + half)
    if hi - lo < half:
        raise NumericalError(f"no room to fit the density around t={center:.6g}")
    k = np.arange(FIT_POINTS)
    nodes = 0.5 * (lo + hi) + 0.5 * (hi - lo) * np.cos((2 * k + 1) * np.pi / (2 * FIT_POINTS))
    vals = np.array([A_fn(float(x)) for x in nodes])
    return Polynomial.fit(nodes - center, vals, degree).convert()


def _critical_point(A_fn, guess, half, span, lo_bound):
    """Critical point of ``A`` nearest to ``guess`` and not before ``lo_bound``.

    Returns ``(s0, taylor)``, ``(None, taylor)`` when ``A`` is flat around
    ``guess`` (every point is critical) and ``None`` when there is none.
    """
    P = _fit_taylor(A_fn, guess, 2 * half, span, SERIES_ORDER + 2)
    scale = max(1.0, abs(P(0.0)))
    if max(abs(P.deriv(1)(0.0)), abs(P.deriv(2)(0.0))) < FLAT_TOL * scale:
        return None, _fit_taylor(A_fn, guess, FIT_MARGIN * half, span, SERIES_ORDER + 2)
    roots = P.deriv().roots()
    real = [guess + z.real for z in roots
            if abs(z.imag) < 1e-9 and abs(z.real) <= 2 * half and guess + z.real >= lo_bound]
    if not real:
        return None
    s0 = min(real, key=lambda x: abs(x - guess))
    # refit around the estimate and polish
    for _ in range(2):
        P = _fit_taylor(A_fn, s0, FIT_MARGIN * half, span, SERIES_ORDER + 2)
        s0 -= P.deriv(1)(0.0) / P.deriv(2)(0.0)
    return s0, _fit_taylor(A_fn, s0, FIT_MARGIN * half, span, SERIES_ORDER + 2)


def _turning_series(P: Polynomial, z_probe: float, t_probe: float) -> Polynomial:
    """Series of ``z = r r'`` about a turning point of the density polynomial ``P``.

    Both roots of the leading quadratic are tried; the one whose series best
    matches ``z_probe`` at offset ``t_probe`` wins.
    """
    a = np.zeros(SERIES_ORDER + 2)
    a[: len(P.coef)] = P.coef[: SERIES_ORDER + 2]
    ap = np.polynomial.polynomial.polyder(a)
    f = np.convolve(a, ap)[: SERIES_ORDER + 1]
    disc = 1.0 - 4.0 * f[1]
    if disc < 0:
        raise NumericalError("turning point without a real continuation")
    best = None
    for c1 in ((1 + math.sqrt(disc)) / 2, (1 - math.sqrt(disc)) / 2):
        c = np.zeros(SERIES_ORDER + 1)
        c[1] = c1
        ok = True
        for m in range(2, SERIES_ORDER + 1):
            den = (m + 1) * c1 - 1
            if abs(den) < 1e-10:
                ok = False
                break
            acc = f[m] + sum(j * c[m + 1 - j] * c[j] for j in range(2, m))
            c[m] = -acc / den
        if not ok:
            continue
        z = Polynomial(c)
        miss = abs(z(t_probe) - z_probe)
        if best is None or miss < best[0]:
            best = (miss, z)
    if best is None:
        raise NumericalError("resonant turning point: series continuation undefined")
    return best[1]


def _degenerate_run(spec: ReconstructionSpec) -> Reconstruction:
    """Start on ``|A| = r``: only circular motion about O is accepted."""
    n = int(math.ceil(spec.span / spec.step - 1e-9))
    h = spec.span / n
    r = spec.start.r
    ts = np.linspace(0.0, spec.span, n + 1)
    phi = np.empty(n + 1)
    phi[0] = spec.start.phi
    evals = 0

    def rate(s):
        return spec.A_fn(s) / (r * r)

    for i in range(n):
        s = ts[i]
        rad = 1.0 - (spec.A_fn(s) / r) ** 2
        if abs(rad) > spec.switch_tol:
            raise DegenerateError(
                f"degenerate start: radicand {rad:.3e} left the circular regime at t={s:.6g}", index=i)
        k1 = rate(s)
        k2 = rate(s + h / 2)
        k4 = rate(s + h)
        phi[i + 1] = phi[i] + h / 6 * (k1 + 4 * k2 + k4)
        evals += 4
    return Reconstruction(ts, np.full(n + 1, r), phi, np.full(n + 1, spec.start.branch), [], evals)


def reconstruct(spec: ReconstructionSpec) -> Reconstruction:
    """Integrate the polar system on ``[0, span]`` with fixed step, flipping branches at turning points."""
    start = spec.start
    a0 = spec.A_fn(0.0)
    kind = feasible(a0, start.r, spec.switch_tol)
    if kind is Feasibility.NO_CURVE:
        raise DomainError(f"no curve: |A(0)|={abs(a0):.6g} exceeds the start radius {start.r:.6g}")
    rad0 = 1.0 - (a0 / start.r) ** 2
    if kind is Feasibility.DEGENERATE and rad0 <= spec.switch_tol:
        return _degenerate_run(spec)
    if kind is Feasibility.DEGENERATE:
        raise DegenerateError("A(0) = 0: radial start, curvature information is needed")

    integ = _Integrator(spec)
    n = int(math.ceil(spec.span / spec.step - 1e-9))
    h = spec.span / n
    grid = np.linspace(0.0, spec.span, n + 1)

    ts, rs, phis, brs = [0.0], [start.r], [start.phi], [start.branch]
    rads = [rad0]
    events = []
    s, r, phi, br = 0.0, start.r, start.phi, start.branch
    k = 0  # index of the last grid point reached
    half = max(BRIDGE_HALF_WIDTH, BRIDGE_MIN_STEPS * h)
    last_event = -math.inf
    bridge_end = 0  # grid index before which history is final
    quiet_until = -math.inf

    def signed_speed(i):
        return brs[i] * math.sqrt(max(rads[i], 0.0))

    while k < n:
        target = grid[k + 1]
        r_new, phi_new, min_rad = integ.rk4(s, r, phi, br, target - s)
        if r_new <= 0:
            raise NumericalError(f"radius collapsed to {r_new:.3e} at t={target:.6g}")
        end_rad = integ.radicand(target, r_new)[0]
        grazing = min(min_rad, end_rad) < spec.switch_tol
        guess = s
        near = grazing
        if not near and len(ts) >= 2 and s >= quiet_until:
            # predict the zero of the signed radial speed from its current trend
            g1, g0 = signed_speed(-1), signed_speed(-2)
            slope = (g1 - g0) / h
            if br * slope < 0 and abs(g1) < half * abs(slope):
                near = True
                guess = s + abs(g1 / slope)
        if not near:
            s, r, phi = target, r_new, phi_new
            k += 1
            ts.append(s), rs.append(r), phis.append(phi), brs.append(br), rads.append(end_rad)
            continue

        # turning point ahead: a critical point of A where r = |A|
        found = _critical_point(spec.A_fn, guess, half, spec.span, grid[bridge_end])
        if found is None:
            if grazing:
                raise NumericalError(f"radicand vanished away from a critical point of A near t={s:.6g}")
            quiet_until = s + half
            continue
        s0, P = found
        if s0 is None:
            # flat density (straight motion): the turning point is where z = r r' runs out
            i_p = len(ts) - 1
            for _ in range(2):
                s0 = ts[i_p] - rs[i_p] * signed_speed(i_p)
                i_p = max(bridge_end, min(len(ts) - 1, int(math.floor((s0 - half) / h + 1e-9))))
            P = _fit_taylor(spec.A_fn, s0, FIT_MARGIN * half, spec.span, SERIES_ORDER + 2)
        if s0 - last_event < 2 * half:
            raise NumericalError(f"two turning points within one bridge near t={s0:.6g}")
        i_a = max(bridge_end, min(k, int(math.floor((s0 - half) / h + 1e-9))))
        i_b = min(n, max(i_a + 1, int(math.ceil((s0 + half) / h - 1e-9))))
        del ts[i_a + 1:], rs[i_a + 1:], phis[i_a + 1:], brs[i_a + 1:], rads[i_a + 1:]
        z_probe = rs[i_a] * signed_speed(i_a)
        z = _turning_series(P, z_probe, grid[i_a] - s0)
        if s0 <= spec.span:
            events.append(s0)
        last_event = s0

        def radius(t):
            a_t = spec.A_fn(t)
            return math.sqrt(a_t * a_t + z(t - s0) ** 2), a_t

        r_prev, a_prev = radius(grid[i_a])
        for j in range(i_a, i_b):
            t0, t1 = grid[j], grid[j + 1]
            r_mid, a_mid = radius(0.5 * (t0 + t1))
            r_next, a_next = radius(t1)
            phi_next = phis[-1] + h / 6 * (a_prev / r_prev**2 + 4 * a_mid / r_mid**2 + a_next / r_next**2)
            zt = z(t1 - s0)
            ts.append(t1), rs.append(r_next), phis.append(phi_next)
            brs.append(1 if zt > 0 else -1)
            rads.append((zt / r_next) ** 2)
            r_prev, a_prev = r_next, a_next
        integ.evals += 2 * (i_b - i_a) + 1
        k = bridge_end = i_b
        s, r, phi, br = grid[k], rs[-1], phis[-1], brs[-1]

    return Reconstruction(np.asarray(ts), np.asarray(rs), np.asarray(phis), np.asarray(brs),
                          events, integ.evals)


@dataclass(frozen=True)
class RoundTrip:
    error: float
    steps: int
    evaluations: int
    events: tuple
    start_param: float


def _auto_start(p, switch_tol):
    """First parameter ``lo + k (hi - lo)/64`` whose start radicand is comfortably positive."""
    from .curve_density import areal_density

    c = p.curve
    lo, hi = c.domain
    O = np.asarray(p.O, float)
    for k in range(64):
        t = lo + k * (hi - lo) / 64
        pt = c.eval(t) - O
        rad = 1.0 - (float(areal_density(c, O, t)) / math.hypot(*pt)) ** 2
        if rad > 1e-3:
            return t
    raise DegenerateError("no usable start point on the preset")


class GridDensity:
    """Areal density along arclength, pretabulated on the RK4 half-step grid.

    ``values_at(s)`` maps arclength to density for a whole array at once; grid
    hits are looked up, anything else (bridge ends) is evaluated directly.
    """

    def __init__(self, values_at: Callable, span: float, step: float):
        n = int(math.ceil(span / step - 1e-9))
        self.half = span / n / 2
        grid = np.arange(2 * n + 1) * self.half
        self.table = np.concatenate([np.asarray(values_at(grid[i:i + 65536]), float)
                                     for i in range(0, len(grid), 65536)])
        self.values_at = values_at

    def __call__(self, s: float) -> float:
        j = round(s / self.half)
        if 0 <= j < len(self.table) and abs(s - j * self.half) <= 1e-12 * max(1.0, abs(s)):
            return float(self.table[j])
        return float(self.values_at(s))


class TableDensity:
    """Density given as samples ``(t_i, A_i)``, linearly interpolated.

    Linear interpolation keeps the data's own values at the nodes and adds no
    overshoot; queries outside ``[t_0, t_last]`` are rejected.
    """

    def __init__(self, ts, values):
        self.t = np.asarray(ts, float)
        self.values = np.asarray(values, float)
        if self.t.ndim != 1 or len(self.t) < 2 or self.t.shape != self.values.shape:
            raise DomainError("a density table needs at least two (t, A) rows")
        if not np.all(np.diff(self.t) > 0):
            raise DomainError("density table times must be strictly increasing")
        if not np.all(np.isfinite(self.values)):
            raise DomainError("density table has non-finite values")

    @property
    def span(self) -> float:
        return float(self.t[-1] - self.t[0])

    def __call__(self, s: float) -> float:
        t = self.t[0] + s
        if t < self.t[0] - 1e-12 or t > self.t[-1] + 1e-12:
            raise DomainError(f"t={t:.6g} outside the density table")
        return float(np.interp(t, self.t, self.values))


@dataclass(frozen=True)
class PresetProblem:
    spec: ReconstructionSpec
    truth: Callable  # arclength -> (2, n) positions relative to O
    O: np.ndarray
    t_start: float


def preset_problem(preset_name: str, params: dict, span: float | None = None, step: float = 1e-4,
                   t_start: float | None = None, switch_tol: float = 1e-6,
                   reverse: bool = False) -> PresetProblem:
    """Reconstruction input built from a preset's closed-form areal density.

    The density is fed as a function of arclength measured from ``t_start``;
    ``span=None`` means one full turn of the preset's parameter domain.
    ``reverse=True`` traverses the same arc from its far end back to
    ``t_start``, which is the stable direction when ``r`` grows along the arc.
    """
    from .curve_density import by_arclength, preset

    p = preset(preset_name, **params)
    lo, hi = p.curve.domain
    if t_start is None:
        t_start = _auto_start(p, switch_tol)
    curve = by_arclength(p.curve.restrict(t_start, t_start + (hi - lo)))
    if span is None:
        span = curve.span
    if span > curve.span + 1e-12:
        raise DomainError(f"span {span:.6g} exceeds the arc length {curve.span:.6g} of one turn")
    O = np.asarray(p.O, float)
    if reverse:
        where = lambda s: span - np.asarray(s, float)
        sign = -1.0
    else:
        where = lambda s: np.asarray(s, float)
        sign = 1.0
    A_fn = GridDensity(lambda s: sign * p.areal(curve.base_param(where(s))), span, step)
    x0, y0 = curve.eval(float(where(0.0))) - O
    d0 = sign * curve.deriv1(float(where(0.0)))
    branch = 1 if x0 * d0[0] + y0 * d0[1] >= 0 else -1
    spec = ReconstructionSpec(A_fn, PolarState.from_xy(x0, y0, branch), span, step, switch_tol)
    return PresetProblem(spec, lambda s: curve.eval(where(s)) - O[:, None], O, t_start)


def roundtrip_error(preset_name: str, params: dict, span: float | None = None, step: float = 1e-4,
                    t_start: float | None = None, switch_tol: float = 1e-6,
                    reverse: bool = False) -> RoundTrip:
    """Rebuild a preset curve from its areal density and measure the largest deviation.

    Arguments as for :func:`preset_problem`.
    """
    prob = preset_problem(preset_name, params, span, step, t_start, switch_tol, reverse)
    rec = reconstruct(prob.spec)
    truth = prob.truth(rec.t)
    err = float(np.max(np.hypot(rec.x - truth[0], rec.y - truth[1])))
    return RoundTrip(err, len(rec.t) - 1, rec.evaluations, tuple(rec.events), prob.t_start)
