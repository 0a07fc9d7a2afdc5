"""Level-index arithmetic.

A nonnegative real is stored as a pair (level, mantissa) with mantissa in
[0, 1), standing for the level-fold exponential of the mantissa:

    value(0, m) = m,   value(k + 1, m) = exp(value(k, m)).

Level bands: level 0 holds [0, 1), level 1 holds [1, e), level k holds
[e_{k-1}(0), e_k(0)).  In this form exp and log are exact level shifts and
the super-logarithm of (k, m) is exactly k + m.

Negative levels encode iterated logs: level -1 holds ln of a level-0 value
(a negative real), level -2 is kept as a formal pre-image so that
ln_li(exp_li(v)) round-trips; it has no real value of its own.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

__all__ = [
    "LIReal",
    "DomainError",
    "from_real",
    "from_real_any",
    "to_real",
    "exp_li",
    "ln_li",
    "arith",
    "add",
    "sub",
    "mul",
    "div",
    "xi_exact",
    "xi_inv_exact",
    "format_li",
    "parse_li",
]


class DomainError(ValueError):
    """Input outside the representable / mathematically defined range."""


MIN_LEVEL = -2

# Same-level relative gap below which addition cannot move the mantissa.
ABSORB_REL = 2.0 ** -50

# Levels at or above this: add/sub always absorb, mul/div go through one
# log-level drop.  All values of level <= 3 are < e^e, so plain float
# arithmetic below the cutoff is exact to rounding.
EXACT_ARITH_MAX_LEVEL = 3


@dataclass(frozen=True, order=False)
class LIReal:
    """Immutable level-index number; totally ordered like the reals it encodes."""

    level: int
    mantissa: float
    absorbed: bool = field(default=False, compare=False)

    def __post_init__(self):
        if not (0.0 <= self.mantissa < 1.0):
            raise DomainError(f"mantissa {self.mantissa!r} not in [0, 1)")
        if self.level < MIN_LEVEL:
            raise DomainError(f"level {self.level} below supported minimum {MIN_LEVEL}")

    # lexicographic (level, mantissa) agrees with the value order
    def __lt__(self, other) -> bool:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return (self.level, self.mantissa) < (other.level, other.mantissa)

    def __le__(self, other) -> bool:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return (self.level, self.mantissa) <= (other.level, other.mantissa)

    def __gt__(self, other) -> bool:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return (other.level, other.mantissa) < (self.level, self.mantissa)

    def __ge__(self, other) -> bool:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return (other.level, other.mantissa) <= (self.level, self.mantissa)

    def __float__(self) -> float:
        return to_real(self)

    def __repr__(self) -> str:
        flag = ", absorbed" if self.absorbed else ""
        return f"LIReal({self.level}, {self.mantissa!r}{flag})"

    def __str__(self) -> str:
        return format_li(self)


def _coerce(other):
    if isinstance(other, LIReal):
        return other
    if isinstance(other, (int, float, Fraction)):
        return from_real_any(float(other))
    return None


def from_real(d: float) -> LIReal:
    """Normalize a finite nonnegative float into level-index form."""
    if not math.isfinite(d) or d < 0:
        raise DomainError(f"from_real requires a finite nonnegative value, got {d!r}")
    level = 0
    x = float(d)
    while x >= 1.0:
        x = math.log(x)
        level += 1
    if x < 0.0:
        # log chain undershot 0 by rounding; clamp to the band edge
        x = 0.0
    return LIReal(level, x)


def from_real_any(d: float) -> LIReal:
    """Like from_real but maps a negative value to level -1 (d = ln(mantissa))."""
    if d >= 0:
        return from_real(d)
    if not math.isfinite(d):
        raise DomainError(f"from_real_any requires a finite value, got {d!r}")
    return LIReal(-1, math.exp(d))


def to_real(v: LIReal) -> float:
    """The represented value; raises on float overflow or formal level -2."""
    if v.level == -2:
        raise DomainError("level -2 values are formal (no real value)")
    if v.level == -1:
        if v.mantissa == 0.0:
            raise DomainError("ln 0 is not a real value")
        return math.log(v.mantissa)
    x = v.mantissa
    try:
        for _ in range(v.level):
            x = math.exp(x)
    except OverflowError:
        raise DomainError(f"{v} exceeds float range") from None
    if math.isinf(x):
        raise DomainError(f"{v} exceeds float range")
    return x


def exp_li(v: LIReal) -> LIReal:
    """Exact level increment: exp of the represented value."""
    return LIReal(v.level + 1, v.mantissa, v.absorbed)


def ln_li(v: LIReal) -> LIReal:
    """Exact level decrement; defined down to the formal level -2."""
    if v.level - 1 < MIN_LEVEL:
        raise DomainError(f"ln below level {MIN_LEVEL} is unsupported")
    return LIReal(v.level - 1, v.mantissa, v.absorbed)


def xi_exact(v: LIReal) -> Fraction:
    """Super-logarithm of v, exactly level + mantissa.

    Returned as an exact rational so that the shift identity
    xi_exact(exp_li(v)) - xi_exact(v) == 1 holds with no rounding.
    """
    return Fraction(v.level) + Fraction(v.mantissa)


def xi_inv_exact(t) -> LIReal:
    """Inverse of xi_exact: t >= 0 maps to (floor(t), frac(t))."""
    if t < 0:
        raise DomainError(f"xi_inv_exact requires t >= 0, got {t!r}")
    k = math.floor(t)
    return LIReal(int(k), float(t - k))


def _absorb(larger: LIReal) -> LIReal:
    return LIReal(larger.level, larger.mantissa, absorbed=True)


def add(a: LIReal, b: LIReal) -> LIReal:
    lo, hi = (a, b) if a <= b else (b, a)
    if hi.level >= EXACT_ARITH_MAX_LEVEL + 1:
        return _absorb(hi)
    va, vb = to_real(hi), to_real(lo)
    if va > 0 and vb / va < ABSORB_REL:
        return _absorb(hi)
    return from_real_any(va + vb)


def sub(a: LIReal, b: LIReal) -> LIReal:
    if b > a:
        raise DomainError("sub would leave the nonnegative range")
    if a.level >= EXACT_ARITH_MAX_LEVEL + 1:
        return _absorb(a)
    va, vb = to_real(a), to_real(b)
    if va > 0 and vb / va < ABSORB_REL:
        return _absorb(a)
    return from_real_any(va - vb)


def mul(a: LIReal, b: LIReal) -> LIReal:
    if max(a.level, b.level) >= EXACT_ARITH_MAX_LEVEL + 1:
        # exp(ln a + ln b); the inner add applies its own absorption rules
        return exp_li(add(ln_li(a), ln_li(b)))
    return from_real_any(to_real(a) * to_real(b))


def div(a: LIReal, b: LIReal) -> LIReal:
    if max(a.level, b.level) >= EXACT_ARITH_MAX_LEVEL + 1:
        return exp_li(sub(ln_li(a), ln_li(b)))
    vb = to_real(b)
    if vb == 0.0:
        raise DomainError("division by zero")
    return from_real_any(to_real(a) / vb)


_OPS = {"add": add, "sub": sub, "mul": mul, "div": div}


def arith(op: str, a: LIReal, b: LIReal) -> LIReal:
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown op {op!r}; expected one of {sorted(_OPS)}") from None
    return fn(a, b)


def format_li(v: LIReal) -> str:
    """Textual form "L<level>:<mantissa>" with 17 significant digits."""
    return f"L{v.level}:{v.mantissa:.17g}"


def parse_li(text: str) -> LIReal:
    s = text.strip()
    if not s.startswith("L") or ":" not in s:
        raise DomainError(f"not a level-index literal: {text!r}")
    level_s, _, mant_s = s[1:].partition(":")
    try:
        return LIReal(int(level_s), float(mant_s))
    except ValueError as exc:
        raise DomainError(f"bad level-index literal {text!r}: {exc}") from None
