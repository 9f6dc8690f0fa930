"""Broken lines generated by continued fractions with arbitrary elements.

An LLS-sequence ``(e_0, ..., e_{2n-2})`` of a broken line ``A_0 ... A_n``
with respect to an observation point ``O`` alternates

* area elements ``e_{2k} = |OA_k x OA_{k+1}|`` (oriented parallelogram area),
* angle elements ``e_{2k+1} = |A_{k+1}A_k x A_{k+1}A_{k+2}| / (e_{2k} e_{2k+2})``.

With ``O`` at the origin, ``A_0 = (1, 0)`` and the first edge along
``(0, 1)``, the last vertex is ``(Q, P)`` where ``P/Q`` is the value of the
continued fraction, so closed broken lines are exactly the sequences with
``(P, Q) = (0, 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cf_core import ProjectiveRatio, Scalar, continuant_pair, eval_cf, format_scalar, is_exact
from .errors import CollinearError, DegenerateError, DomainError

COLLINEAR_TOL = 1e-12
CLOSURE_TOL = 1e-9

Point = tuple


def det(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _scale(s, a):
    return (s * a[0], s * a[1])


def _exact_point(p) -> bool:
    return is_exact(p[0]) and is_exact(p[1])


def _as_point(p) -> Point:
    x, y = p
    if is_exact(x) and is_exact(y):
        return (Fraction(x), Fraction(y))
    return (float(x), float(y))


def _is_zero(value, exact: bool, tol: float = COLLINEAR_TOL) -> bool:
    return value == 0 if exact else abs(value) <= tol


@dataclass(frozen=True)
class Frame:
    """Start data for :func:`build`: observation point, first vertex, first edge direction."""

    A0: Point
    v: Point
    O: Point = (0, 0)

    def __post_init__(self):
        object.__setattr__(self, "A0", _as_point(self.A0))
        object.__setattr__(self, "v", _as_point(self.v))
        object.__setattr__(self, "O", _as_point(self.O))
        if self.v[0] == 0 and self.v[1] == 0:
            raise DomainError("first edge direction must be nonzero")
        d = det(_sub(self.A0, self.O), self.v)
        exact = _exact_point(self.A0) and _exact_point(self.v) and _exact_point(self.O)
        if _is_zero(d, exact):
            raise DegenerateError("O, A0 and the first edge are collinear")

    @classmethod
    def normalized(cls) -> "Frame":
        return cls(A0=(1, 0), v=(0, 1), O=(0, 0))


@dataclass(frozen=True)
class Polyline:
    vertices: list
    O: Point = (0, 0)

    def __post_init__(self):
        object.__setattr__(self, "vertices", [_as_point(p) for p in self.vertices])
        object.__setattr__(self, "O", _as_point(self.O))

    @property
    def exact(self) -> bool:
        return _exact_point(self.O) and all(_exact_point(p) for p in self.vertices)

    def __len__(self):
        return len(self.vertices)

    def to_json(self) -> dict:
        fmt = lambda p: [format_scalar(p[0]), format_scalar(p[1])]
        return {"O": fmt(self.O), "vertices": [fmt(p) for p in self.vertices]}

    def to_csv_rows(self) -> list[str]:
        return ["x,y"] + [f"{format_scalar(x)},{format_scalar(y)}" for x, y in self.vertices]


def validate_lls(lls: Sequence[Scalar], tol: float = COLLINEAR_TOL) -> list:
    """Check odd length and nonzero area elements; returns the sequence as a list."""
    seq = list(lls)
    if len(seq) % 2 != 1:
        raise DomainError(f"LLS-sequence must have odd length, got {len(seq)}")
    for k in range(0, len(seq), 2):
        if _is_zero(seq[k], is_exact(seq[k]), tol):
            raise DegenerateError(f"area element {k} is zero", index=k)
    return seq


def build(frame: Frame, lls: Sequence[Scalar]) -> Polyline:
    """Broken line with the given LLS-sequence starting from ``frame``.

    Each new vertex is obtained from the two previous ones: ``P`` is the point
    of line ``A_{k-1}A_k`` beyond ``A_k`` with ``|OA_k x OP| = 1``,
    ``Q = P + beta OA_k``, and ``A_{k+1} = A_k + alpha A_kQ``.
    """
    seq = validate_lls(lls)
    exact = all(is_exact(a) for a in seq) and _exact_point(frame.A0) and _exact_point(frame.v)
    exact = exact and _exact_point(frame.O)
    if exact:
        seq = [Fraction(a) for a in seq]
    O = frame.O
    a0 = _sub(frame.A0, O)
    lam = seq[0] / det(a0, frame.v)
    verts = [a0, _add(a0, _scale(lam, frame.v))]
    for k in range(1, (len(seq) + 1) // 2):
        prev_area, beta, area = seq[2 * k - 2], seq[2 * k - 1], seq[2 * k]
        ak, aprev = verts[-1], verts[-2]
        p = _add(ak, _scale(1 / prev_area, _sub(ak, aprev)))
        q = _add(p, _scale(beta, ak))
        verts.append(_add(ak, _scale(area, _sub(q, ak))))
    return Polyline([_add(v, O) for v in verts], O)


def lls_of(poly: Polyline, tol: float = COLLINEAR_TOL) -> list:
    """LLS-sequence of a broken line with respect to its observation point."""
    verts = poly.vertices
    if len(verts) < 2:
        raise DegenerateError("a broken line needs at least two vertices")
    exact = poly.exact
    rel = [_sub(v, poly.O) for v in verts]
    areas = []
    for k in range(len(rel) - 1):
        a = det(rel[k], rel[k + 1])
        if _is_zero(a, exact, tol):
            raise CollinearError(f"O, A_{k} and A_{k + 1} are collinear", index=k)
        areas.append(a)
    out = [areas[0]]
    for k in range(len(verts) - 2):
        turn = det(_sub(verts[k], verts[k + 1]), _sub(verts[k + 2], verts[k + 1]))
        out.append(turn / (areas[k] * areas[k + 1]))
        out.append(areas[k + 1])
    return out


def transform(poly: Polyline, M) -> Polyline:
    """Image of the broken line (and of ``O``) under the linear map ``M``.

    Area elements get multiplied by ``det M`` and angle elements divided by it.
    """
    (m00, m01), (m10, m11) = M
    if m00 * m11 - m01 * m10 == 0:
        raise DomainError("singular linear map")
    apply = lambda p: (m00 * p[0] + m01 * p[1], m10 * p[0] + m11 * p[1])
    return Polyline([apply(p) for p in poly.vertices], apply(poly.O))


def endpoint_pair(lls: Sequence[Scalar]) -> ProjectiveRatio:
    """Continuant pair ``(P, Q)``; the normalized frame ends at vertex ``(Q, P)``."""
    return continuant_pair(validate_lls(lls))


def is_closed(lls: Sequence[Scalar], tol: float = CLOSURE_TOL) -> bool:
    """Whether the broken line from the normalized frame returns to its start."""
    pq = endpoint_pair(lls)
    if is_exact(pq.p) and is_exact(pq.q):
        return pq.p == 0 and pq.q == 1
    return abs(pq.p) <= tol and abs(pq.q - 1) <= tol


def collinear_endpoints(lls1: Sequence[Scalar], lls2: Sequence[Scalar]) -> bool:
    """Whether both continued fractions take the same (projective) value.

    Only the values matter, so sequences of either parity are accepted.
    """
    if not len(lls1) or not len(lls2):
        raise DomainError("empty sequence")
    return eval_cf(list(lls1)) == eval_cf(list(lls2))


def triangle_conditions(a: Sequence[Scalar]) -> tuple:
    """The two polynomial closure conditions for a three-edge broken line.

    A 5-element sequence closes into a triangle iff this returns ``(0, 1)``.
    """
    if len(a) != 5:
        raise DomainError("triangle conditions need exactly 5 elements")
    a0, a1, a2, a3, a4 = a
    num = (a0 * a1 * a2 * a3 * a4 + a0 * a1 * a2 + a0 * a1 * a4 + a0 * a3 * a4
           + a2 * a3 * a4 + a0 + a2 + a4)
    den = a1 * a2 * a3 * a4 + a1 * a2 + a1 * a4 + a3 * a4 + 1
    return num, den
