"""Continued fractions with arbitrary elements.

Values are handled projectively: a finite continued fraction evaluates to a
pair ``(p, q)`` which may have ``q == 0`` (the value infinity). Exact work uses
:class:`fractions.Fraction`; floats are accepted wherever arithmetic allows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence, Union

Scalar = Union[int, Fraction, float]


def as_ratio(x) -> Fraction:
    """Parse ``x`` ("p/q", "p", int or Fraction) into a Fraction.

    Floats are refused on purpose; use :func:`parse_scalar` for mixed input.
    """
    if isinstance(x, float):
        raise TypeError(f"refusing to convert float {x!r} to an exact ratio")
    if isinstance(x, str) and ("." in x or "e" in x.lower()):
        raise ValueError(f"{x!r} is not an exact ratio")
    return Fraction(x)


def parse_scalar(text: str) -> Scalar:
    """Read "p/q" or an integer as a Fraction, a decimal as a float."""
    text = text.strip()
    try:
        return Fraction(text) if not _looks_decimal(text) else float(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse scalar {text!r}") from exc


def _looks_decimal(text: str) -> bool:
    return "." in text or "e" in text.lower() or text.lower() in ("inf", "nan")


def format_scalar(x: Scalar) -> str:
    if isinstance(x, float):
        return repr(x)
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def is_exact(x) -> bool:
    return isinstance(x, Rational)


@dataclass(frozen=True, eq=False)
class ProjectiveRatio:
    """A point ``p : q`` of the projective line.

    The stored pair is kept as given (continuants need the raw pair);
    equality and hashing are projective. Use :meth:`canonical` for the
    normalized representative.
    """

    p: Scalar
    q: Scalar

    def __post_init__(self):
        if self.p == 0 and self.q == 0:
            raise ValueError("(0, 0) is not a projective point")

    def canonical(self) -> "ProjectiveRatio":
        """Coprime integer representative with ``q >= 0``; infinity is ``1 : 0``."""
        p, q = self.p, self.q
        if q == 0:
            return ProjectiveRatio(1, 0)
        if is_exact(p) and is_exact(q):
            v = Fraction(p) / Fraction(q)
            return ProjectiveRatio(v.numerator, v.denominator)
        if q < 0:
            p, q = -p, -q
        return ProjectiveRatio(p / q, 1.0)

    @property
    def is_infinite(self) -> bool:
        return self.q == 0

    @property
    def value(self) -> Scalar:
        """The ratio ``p / q``; ``math.inf`` for the point at infinity."""
        if self.q == 0:
            return math.inf
        if is_exact(self.p) and is_exact(self.q):
            return Fraction(self.p) / Fraction(self.q)
        return self.p / self.q

    def __eq__(self, other):
        if not isinstance(other, ProjectiveRatio):
            return NotImplemented
        return self.p * other.q == other.p * self.q

    def __hash__(self):
        c = self.canonical()
        return hash((c.p, c.q))

    def __str__(self):
        c = self.canonical()
        return f"{format_scalar(c.p)}/{format_scalar(c.q)}"

    def to_json(self) -> dict:
        return {"p": format_scalar(self.p), "q": format_scalar(self.q)}


def continuants(seq: Sequence[Scalar]) -> list[ProjectiveRatio]:
    """Pairs ``(P_k, Q_k)`` for every prefix ``[a_0, ..., a_k]``.

    Uses ``P_k = a_k P_{k-1} + P_{k-2}`` and the same for ``Q`` with seeds
    ``P_{-1}=1, P_{-2}=0, Q_{-1}=0, Q_{-2}=1``. Zero elements are allowed.
    """
    if len(seq) == 0:
        raise ValueError("continued fraction needs at least one element")
    p_prev2, p_prev = 0, 1
    q_prev2, q_prev = 1, 0
    out = []
    for a in seq:
        p_prev2, p_prev = p_prev, a * p_prev + p_prev2
        q_prev2, q_prev = q_prev, a * q_prev + q_prev2
        out.append(ProjectiveRatio(p_prev, q_prev))
    return out


def continuant_pair(seq: Sequence[Scalar]) -> ProjectiveRatio:
    """Raw ``(P, Q)`` of the whole sequence."""
    return continuants(seq)[-1]


def eval_cf(seq: Sequence[Scalar]) -> ProjectiveRatio:
    """Value of ``[a_0, ..., a_n]`` as a canonical projective ratio."""
    return continuant_pair(seq).canonical()


def expand_rational(x, parity: str = "odd") -> list[Fraction]:
    """Ordinary continued fraction of a rational with the requested length parity.

    >>> expand_rational(Fraction(7, 5), "even")
    [Fraction(1, 1), Fraction(2, 1), Fraction(1, 1), Fraction(1, 1)]
    """
    if parity not in ("odd", "even"):
        raise ValueError(f"parity must be 'odd' or 'even', got {parity!r}")
    x = as_ratio(x)
    num, den = x.numerator, x.denominator
    elems = []
    while den:
        a, r = divmod(num, den)
        elems.append(a)
        num, den = den, r
    want_odd = parity == "odd"
    if (len(elems) % 2 == 1) != want_odd:
        if len(elems) > 1 and elems[-1] == 1:
            elems.pop()
            elems[-1] += 1
        else:
            # [..., a] -> [..., a - 1, 1]; for an integer x this gives [x - 1, 1]
            elems[-1] -= 1
            elems.append(1)
    return [Fraction(a) for a in elems]


def expand_real(x: float, max_terms: int = 20, tol: float = 1e-9) -> list[Fraction]:
    """Leading elements of the ordinary expansion of a real number.

    Repeats floor/reciprocal until ``max_terms`` elements are produced or the
    fractional part drops below ``tol``. Every convergent ``p/q`` of the
    result satisfies ``|x - p/q| <= 1/q**2`` up to floating error in ``x``.
    A partial quotient within ``tol`` below an integer is rounded up.
    """
    if not math.isfinite(x):
        raise ValueError(f"cannot expand non-finite value {x!r}")
    if max_terms < 1:
        raise ValueError("max_terms must be >= 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    elems = []
    y = float(x)
    while True:
        a = math.floor(y)
        frac = y - a
        if 1.0 - frac < tol:
            # y sits just below an integer through rounding
            a, frac = a + 1, 0.0
        elems.append(Fraction(a))
        if len(elems) >= max_terms or frac < tol:
            break
        y = 1.0 / frac
    return elems


def serialize_seq(seq: Sequence[Scalar]) -> list[str]:
    return [format_scalar(a) for a in seq]


def parse_seq(text: str) -> list[Scalar]:
    """Parse a comma separated list such as ``"2,-1,3,-1/2"``."""
    parts = [t for t in text.replace(" ", "").split(",") if t]
    if not parts:
        raise ValueError("empty sequence")
    return [parse_scalar(t) for t in parts]
