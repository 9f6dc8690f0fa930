"""Integer trigonometry and sails of the cones ``C_alpha``.

``C_alpha`` is the cone spanned by the rays ``{(t, 0)}`` and ``{(t, alpha t)}``,
``t >= 0``. Its sail is the boundary chain of the convex hull of the nonzero
integer points of the cone, without the two boundary rays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .cf_core import as_ratio, eval_cf, expand_real
from .errors import CollinearError, DegenerateError, DomainError

LatticePoint = tuple[int, int]


def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def integer_length(a: LatticePoint, b: LatticePoint) -> int:
    """Number of integer points strictly inside ``ab`` plus one."""
    if tuple(a) == tuple(b):
        raise DegenerateError(f"integer length of a point segment {a}")
    return math.gcd(b[0] - a[0], b[1] - a[1])


def integer_sine(a: LatticePoint, b: LatticePoint, c: LatticePoint) -> int:
    """Index of the lattice spanned by the primitive vectors of ``ba`` and ``bc``."""
    det = abs(_cross(b, a, c))
    if det == 0:
        raise CollinearError(f"points {a}, {b}, {c} are collinear")
    index, rem = divmod(det, integer_length(b, a) * integer_length(b, c))
    assert rem == 0
    return index


@dataclass(frozen=True)
class SailResult:
    alpha: Fraction
    vertices: list[LatticePoint]
    lls: list[Fraction]

    def to_json(self) -> dict:
        return {
            "alpha": f"{self.alpha.numerator}/{self.alpha.denominator}",
            "vertices": [list(v) for v in self.vertices],
            "lls": [str(a) for a in self.lls],
        }


def convex_hull(points) -> list[LatticePoint]:
    """Vertices of the convex hull, counter-clockwise from the lowest-leftmost point.

    Andrew's monotone chain; collinear boundary points are dropped.
    """
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def cone_points(alpha: Fraction) -> list[LatticePoint]:
    """Column extremes of the nonzero integer points of ``C_alpha`` in ``[0,q] x [0,p]``.

    Interior points of a column are convex combinations of its two ends, so
    they never contribute to the hull.
    """
    p, q = alpha.numerator, alpha.denominator
    pts = []
    for x in range(1, q + 1):
        pts.append((x, 0))
        pts.append((x, (p * x) // q))
    return pts


def sail(alpha) -> SailResult:
    """Sail of ``C_alpha`` for rational ``alpha >= 1``, ordered from ``(1, 0)`` to ``(q, p)``."""
    if isinstance(alpha, float):
        raise DomainError("sail needs an exact rational alpha; use sail_of_real for floats")
    alpha = as_ratio(alpha)
    if alpha < 1:
        raise DomainError(f"alpha must be >= 1, got {alpha}")
    p, q = alpha.numerator, alpha.denominator
    far = q * p + 2
    pts = cone_points(alpha) + [(far, 0), (far * q, far * p)]
    hull = convex_hull(pts)
    # counter-clockwise hull: ... (far q, far p) -> (q, p) -> ... -> (1, 0) -> (far, 0)
    start = hull.index((q, p))
    chain = []
    i = start
    while True:
        chain.append(hull[i])
        if hull[i] == (1, 0):
            break
        i = (i + 1) % len(hull)
    vertices = chain[::-1]
    return SailResult(alpha, vertices, lls_of_vertices(vertices))


def sail_of_real(x: float, max_den: int = 1000) -> SailResult:
    """Sail of ``C_r`` for the last convergent ``r`` of ``x`` with denominator <= ``max_den``.

    The sail of an irrational cone is infinite; this materializes a prefix of it.
    """
    elems = expand_real(x, max_terms=64, tol=1e-12)
    best = None
    for k in range(1, len(elems) + 1):
        r = eval_cf(elems[:k])
        if r.q > max_den:
            break
        best = r.value
    return sail(best)


def lls_of_vertices(vertices) -> list[Fraction]:
    if len(vertices) < 2:
        raise DegenerateError("a sail needs at least two vertices")
    out = [Fraction(integer_length(vertices[0], vertices[1]))]
    for k in range(1, len(vertices) - 1):
        out.append(Fraction(integer_sine(vertices[k - 1], vertices[k], vertices[k + 1])))
        out.append(Fraction(integer_length(vertices[k], vertices[k + 1])))
    return out


def lls_of_sail(s: SailResult) -> list[Fraction]:
    """Lattice length-sine sequence: edge lengths at even, vertex sines at odd positions."""
    return lls_of_vertices(s.vertices)
