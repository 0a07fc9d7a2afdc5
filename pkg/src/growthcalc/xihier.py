"""The concrete super-logarithm hierarchy and companions.

Level map:

    xi_0(x) = x - e
    xi_1(x) = x / e
    xi_2(x) = ln x
    xi_3(x) = the super-logarithm (exact on level-index numbers: level + mantissa)
    xi_k, k >= 4: an Abel function of the inverse of xi_{k-1}, computed by
        applying xi_{k-1} until the value drops into the fundamental domain
        [2, xi_{k-1}^{-1}(2)] and counting the steps; linear seed there.

The base point for levels >= 4 is 2, not 1: the super-logarithm fixes 1
(xi_3(1) = 1), so a fundamental domain anchored at 1 would be degenerate.
Levels >= 4 are normalized by xi_k(2) = 1 and xi_k(e) = 2.  That choice
makes [2, e] the fundamental domain of every level at once (xi_{k-1}(e) = 2
closes the recursion, just as xi_3(e) = 2 does at the bottom) and keeps
each xi_k at least 0.7 below the diagonal, so the step-counting pullback
terminates quickly and no level acquires a fixed point above the base.

Companions: chi (the reciprocal of xi_3', defined by chi = 1 on [0, 1] and
chi(x) = x * chi(ln x), accumulated in log-space so towers never overflow)
and H_k (a smoothed surrogate for 1 / xi_k').
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from typing import Union

from . import lixnum
from .lixnum import DomainError, LIReal

__all__ = ["XiHierarchy", "default_hierarchy", "BASE", "BASE_XI"]

Value = Union[float, Fraction, LIReal]

_E = math.e

BASE = 2.0            # base point of the level >= 4 fundamental domains
TOP = math.e          # right end: xi_{k-1}(e) = 2 exactly, for every k >= 4
BASE_XI = 1.0         # xi_k(2) for every k >= 4

_MAX_STEPS = 10 ** 6


def _as_li(x) -> LIReal:
    if isinstance(x, LIReal):
        return x
    if isinstance(x, (int, Fraction)):
        try:
            return lixnum.from_real_any(float(x))
        except OverflowError:
            pass
        # past the float range: peel one exact log off the integer parts
        p = x.numerator if isinstance(x, Fraction) else x
        q = x.denominator if isinstance(x, Fraction) else 1
        if p <= 0:
            raise DomainError(f"cannot represent non-positive value {x!r}")
        return lixnum.exp_li(lixnum.from_real(math.log(p) - math.log(q)))
    return lixnum.from_real_any(float(x))


def _as_float(x) -> float:
    if isinstance(x, LIReal):
        return lixnum.to_real(x)
    return float(x)


class XiHierarchy:
    """Levels 0..max_level; immutable after construction, caches are locked."""

    def __init__(self, max_level: int = 8):
        if max_level < 3:
            raise ValueError("max_level must be at least 3")
        self.max_level = max_level
        self._hk_cache: dict = {}
        self._lock = threading.Lock()

    # -- the shared [2, e] fundamental domain for levels >= 4 ----------------

    @staticmethod
    def _seed(x: float) -> float:
        return BASE_XI + (x - BASE) / (TOP - BASE)

    @staticmethod
    def _seed_inv(t: float) -> float:
        return BASE + (t - BASE_XI) * (TOP - BASE)

    # -- the hierarchy ------------------------------------------------------

    def xi_k(self, k: int, x):
        """xi_k(x); returns an exact Fraction for k = 3 on LIReal input."""
        if not 0 <= k <= self.max_level:
            raise DomainError(f"level {k} outside 0..{self.max_level}")
        if k == 0:
            if isinstance(x, LIReal):
                return lixnum.sub(x, lixnum.from_real(_E))
            return float(x) - _E
        if k == 1:
            if isinstance(x, LIReal):
                return lixnum.div(x, lixnum.from_real(_E))
            return float(x) / _E
        if k == 2:
            if isinstance(x, LIReal):
                w = lixnum.ln_li(x)
                try:
                    return lixnum.to_real(w)
                except DomainError:
                    return w
            xf = float(x)
            if xf <= 0:
                raise DomainError(f"log of non-positive value {xf!r}")
            return math.log(xf)
        if k == 3:
            return lixnum.xi_exact(_as_li(x))
        # k >= 4: collapse with xi_{k-1} until inside [2, e)
        y = x
        n = 0
        while self._at_least(y, TOP):
            y = self.xi_k(k - 1, y)
            n += 1
            if n > _MAX_STEPS:
                raise DomainError(f"xi_{k} pullback failed to terminate")
        yf = _as_float(y)
        if yf < BASE - 1e-9:
            raise DomainError(f"xi_{k} argument below its base {BASE}")
        return n + self._seed(min(max(yf, BASE), TOP))

    @staticmethod
    def _at_least(y, top: float) -> bool:
        if isinstance(y, LIReal):
            if y.level >= 4:
                return True  # any tower dwarfs the float-sized domain top
            return lixnum.to_real(y) >= top
        if isinstance(y, (int, Fraction)):
            return y >= top  # exact; avoids float conversion of big rationals
        return float(y) >= top

    def xi_k_inv(self, k: int, t) -> LIReal:
        t = float(t)
        if k == 0:
            return lixnum.from_real_any(t + _E)
        if k == 1:
            return lixnum.from_real_any(t * _E)
        if k == 2:
            return lixnum.exp_li(lixnum.from_real_any(t))
        if k == 3:
            return lixnum.xi_inv_exact(t)
        if not 4 <= k <= self.max_level:
            raise DomainError(f"level {k} outside 0..{self.max_level}")
        if t < BASE_XI - 1e-12:
            raise DomainError(f"xi_{k}_inv needs t >= {BASE_XI}, got {t!r}")
        n = int(math.floor(t - BASE_XI))
        frac = t - n
        z: Value = self._seed_inv(frac)
        for _ in range(n):
            # xi_{k-1}^{-1} applied to the value z (overflows honestly
            # once the tower outgrows the level-index float range)
            z = self.xi_k_inv(k - 1, _as_float(z))
        return _as_li(z)

    # -- companions ---------------------------------------------------------

    def chi(self, x):
        """chi(x) = x * chi(ln x), chi = 1 on [0, 1]; LIReal for tower output."""
        if not isinstance(x, LIReal):
            xf = float(x)
            if xf < 0:
                raise DomainError(f"chi needs a nonnegative argument, got {xf!r}")
            if xf <= 1.0:
                return 1.0
            x = lixnum.from_real(xf)
        # log chi(x) = ln x + ln ln x + ... down to the [0, 1] band
        acc = lixnum.from_real(0.0)
        v = x
        one = LIReal(1, 0.0)
        while v > one:
            term = lixnum.ln_li(v)
            acc = lixnum.add(acc, term)
            v = term
        result = lixnum.exp_li(acc)
        try:
            return lixnum.to_real(result)
        except DomainError:
            return result

    def H_k(self, k: int, x):
        """A function asymptotic to 1/xi_k': H_2 = x, H_3 = chi, numeric above."""
        if k < 2:
            raise DomainError("H_k is undefined below level 2")
        if k == 2:
            return x if isinstance(x, LIReal) else float(x)
        if k == 3:
            return self.chi(x)
        if k > self.max_level:
            raise DomainError(f"level {k} outside 2..{self.max_level}")
        xf = _as_float(x)
        key = (k, xf)
        with self._lock:
            cached = self._hk_cache.get(key)
        if cached is not None:
            return cached
        d = self._xi_k_deriv(k, xf)
        if d <= 0:
            raise DomainError(f"xi_{k} derivative estimate non-positive at {xf!r}")
        val = 1.0 / d
        with self._lock:
            self._hk_cache[key] = val
        return val

    def _xi_k_deriv(self, k: int, x: float) -> float:
        # Richardson-extrapolated central difference on a geometric stencil;
        # xi_k is piecewise-defined, so raw differences are noisy at seams
        def cd(h: float) -> float:
            return (float(self.xi_k(k, x + h)) - float(self.xi_k(k, x - h))) / (2 * h)

        h = 1e-3 * max(abs(x), 1.0)
        d1, d2 = cd(h), cd(h / 2)
        return (4 * d2 - d1) / 3


_default = None
_default_lock = threading.Lock()


def default_hierarchy(max_level: int = 8) -> XiHierarchy:
    global _default
    with _default_lock:
        if _default is None or _default.max_level < max_level:
            _default = XiHierarchy(max_level)
        return _default
