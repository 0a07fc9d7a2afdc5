"""Growth-class machinery.

The module houses the catalog of reference growth rates with their
slow-function chains, a numeric class-0/1/2 decision procedure with
re-checkable witnesses, constructors for functions sitting strictly between
classes, sandwich bounds, inverse-derivative separation checks, and a small
gallery of boundary examples (wobbly functions and staircases).

Classes: a function f of class n admits an Abel-type scale F with
O_F(f) = 1 whose inverse grows one class higher; x+2 is class 0, 2x and
x^2 are class 1, exp is class 2, the inverse super-logarithm is class 3.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple, Union

from . import funcexpr, lixnum, orders
from .funcexpr import Call, Binary, Const, EvalEnv, EvalError, Var
from .lixnum import DomainError, LIReal
from .orders import Ladder, OrderEstimate, order_of
from .xihier import default_hierarchy

__all__ = [
    "CatalogEntry",
    "ClassReport",
    "ClassifyBudget",
    "catalog",
    "verify_chain",
    "classify_expr",
    "BetweenClassFn",
    "between_class_fn",
    "SandwichHandle",
    "sandwich_bounds",
    "sandwich_bracket_report",
    "scaled_xi_increment",
    "separation_check",
    "inverse_derivative_ratio",
    "Staircase",
    "staircase_class1",
    "staircase_class0",
    "gallery",
    "wobbly_log_derivative",
]

_CATALOG_PATH = Path(__file__).with_name("catalog.txt")


# ---------------------------------------------------------------------------
# Catalog


@dataclass(frozen=True)
class CatalogEntry:
    """One table row: f0 and its chain F0..F4 of progressively slower scales."""

    name: str
    declared_class: int
    f0: object  # FuncExpr text or callable
    chain: Tuple[object, ...]  # (F0, F1, F2, F3, F4)


def _xi_inverse(t):
    if isinstance(t, LIReal):
        t = lixnum.to_real(t)
    return lixnum.xi_inv_exact(t)


_xi_inverse.expr_text = "xi_inv(x)"


def catalog() -> List[CatalogEntry]:
    entries = []
    for line in _CATALOG_PATH.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        name, cls, f0, *chain = line.split("|")
        f0_obj = _xi_inverse if f0 == "xi_inv(x)" else f0
        entries.append(CatalogEntry(name=name, declared_class=int(cls),
                                    f0=f0_obj, chain=tuple(chain)))
    return entries


# Sample ladders.  Which regime a pair's limit settles in varies wildly:
# log-power residuals need huge float arguments, super-logarithm-scale
# residuals become exact on modest towers, and pairs comparing xi_4 against
# a rescaled xi only converge once the xi-value itself is astronomically
# large -- hence towers whose integer level is itself huge.
_GEOM_SMALL = Ladder.geometric(10.0, 10.0, 12)
_GEOM_TINY = Ladder.geometric(2.5, 1.35, 12)
_GEOM_DEEP = Ladder.geometric(1e180, 1e6, 20)


def _tower_points(lo: int = 2, hi: int = 41, mantissa: float = 0.5) -> list:
    return [LIReal(j, mantissa) for j in range(lo, hi + 1)]


def _deep_tower_points(count: int = 12, mantissa: float = 0.5) -> list:
    return [LIReal(10 ** (60 + 60 * i), mantissa) for i in range(count)]


def _band_points(level: int = 4, count: int = 12) -> list:
    # large mantissas: the residual error of sub-tower structure at this
    # level decays like 1/log x, so stay near the top of the band
    return [LIReal(level, 0.90 + 0.085 * i / (count - 1)) for i in range(count)]


def _default_pair_ladders(name: str) -> list:
    tower = _tower_points()
    deep = _deep_tower_points()
    table = {
        "x+2": [_GEOM_SMALL, _GEOM_SMALL, tower, tower],
        "x+sqrt(x)": [_GEOM_SMALL, _band_points(), tower, deep],
        "x+x/log(x)": [_GEOM_DEEP, tower, tower, tower],
        "2*x": [_GEOM_SMALL, tower, tower, tower],
        "x^2": [_GEOM_SMALL, tower, deep, tower],
        "exp(x)": [tower, tower, tower, tower],
        "exp(exp(x))": [tower, deep, tower, tower],
        "xi_inv(x)": [_GEOM_TINY, tower, tower, tower],
    }
    try:
        return table[name]
    except KeyError:
        raise ValueError(f"no default ladders for catalog row {name!r}") from None


def _ladder_desc(ladder) -> dict:
    if isinstance(ladder, Ladder):
        return ladder.to_json()
    pts = list(ladder)
    return {"kind": "points", "count": len(pts),
            "first": str(pts[0]), "last": str(pts[-1])}


def _spec_text(spec) -> str:
    if isinstance(spec, str):
        return spec
    return getattr(spec, "expr_text", None) or repr(spec)


def _inverse_check(entry: CatalogEntry, hier) -> dict:
    """F0 inverts f0: f0(F0(x))/x -> 1 (exact super-log coordinates for the
    top row, floats for the rest)."""
    f0fn, _ = orders._normalize(entry.f0, hier)
    F0fn, _ = orders._normalize(entry.chain[0], hier)
    errs = []
    if callable(entry.f0) and not isinstance(entry.f0, str):
        for x in _tower_points(4, 9):
            y = f0fn(F0fn(x))
            errs.append(abs(float(lixnum.xi_exact(y)) - float(lixnum.xi_exact(x))))
    else:
        for x in (1e50, 1e120, 1e200):
            y = orders._to_float(f0fn(F0fn(x)))
            errs.append(abs(y / x - 1.0))
    max_err = max(errs)
    return {"errors": errs, "max_err": max_err, "ok": max_err <= 1e-3}


def verify_chain(entry: CatalogEntry, ladders: Optional[Sequence] = None,
                 tol: float = 1e-3, hier=None) -> dict:
    """Check O_{F1}(f0) -> 1 and O_{F_{k+1}}(F_k) -> -1 for the row."""
    hier = hier or default_hierarchy()
    if ladders is None:
        ladders = _default_pair_ladders(entry.name)
    pairs = [(entry.chain[1], entry.f0, 1.0)]
    for k in range(1, 4):
        pairs.append((entry.chain[k + 1], entry.chain[k], -1.0))
    rows = []
    for (F, f, target), ladder in zip(pairs, ladders):
        est = order_of(F, f, ladder, tol=tol, hier=hier)
        rows.append({
            "F": _spec_text(F), "f": _spec_text(f), "target": target,
            "lambda_hat": est.lambda_hat, "tail_spread": est.tail_spread,
            "converged": est.converged,
            "ok": est.converged and abs(est.lambda_hat - target) <= tol,
            "ladder": _ladder_desc(ladder),
        })
    inv = _inverse_check(entry, hier)
    return {
        "name": entry.name,
        "declared_class": entry.declared_class,
        "pairs": rows,
        "inverse_check": inv,
        "ok": inv["ok"] and all(r["ok"] for r in rows),
    }


# ---------------------------------------------------------------------------
# Classifier


@dataclass
class ClassifyBudget:
    n_min: int = -2
    n_max: int = 6
    r_max: int = 6
    mu_band: float = 0.05
    mu_tol: float = 1e-2
    order_tol: float = 1e-3


@dataclass
class ClassReport:
    verdict: str  # "0" | "1" | "2" | "inconclusive"
    witness: Optional[str]
    diagnostics: dict
    order_checks: List[dict] = field(default_factory=list)
    reason: str = ""

    def to_json(self) -> dict:
        return {"class": self.verdict, "witness": self.witness,
                "diagnostics": self.diagnostics,
                "order_checks": self.order_checks, "reason": self.reason}


_K_LADDER_LO, _K_LADDER_HI = 2, 33
_MU_LADDERS = {
    -2: Ladder.geometric(8.0, 2.0, 14),
    -1: Ladder.geometric(1e8, 1e18, 14),
}
_MU_LADDER_WIDE = Ladder.geometric(1e6, 1e4, 14)
_CHECK_LADDER = Ladder.geometric(1e4, 10.0, 16)
# exact rational points: f(x)/x survives where the float quotient rounds to 1
_FRAC_DEEP = [Fraction(10) ** k for k in range(30, 90, 5)]
_FRAC_MID = [Fraction(10) ** k for k in range(5, 17)]


def _as_expr(f):
    if isinstance(f, str):
        return funcexpr.parse(f)
    if funcexpr.is_expr(f):
        return f
    raise TypeError(f"classify_expr needs a DSL expression, got {f!r}")


def _eval(expr, x, hier):
    return funcexpr.evaluate(expr, EvalEnv(x, hier))


def _tail(seq: List[float]) -> List[float]:
    return seq[-max(2, math.ceil(len(seq) / 3)):]


def _mu_estimate(fexpr, n: int, hier, tol: float):
    """mu in log_n f = (log_n x)^mu, via log_{n+1} f / log_{n+1} x
    (iterated exp when n+1 < 0, so n = -2 probes f - x directly)."""
    ladder = _MU_LADDERS.get(n, _MU_LADDER_WIDE)
    vals = []
    for x in ladder.points():
        fx = orders._to_float(_eval(fexpr, x, hier))
        if n == -2:
            diff = fx - x
            vals.append(math.exp(diff) if diff < 700 else math.inf)
        elif n == -1:
            vals.append(fx / x)
        else:
            a, b = fx, x
            for _ in range(n + 1):
                if a <= 0 or b <= 0:
                    raise EvalError("iterated log left the domain")
                a, b = math.log(a), math.log(b)
            if b == 0:
                raise EvalError("iterated log hit zero")
            vals.append(a / b)
    tail = _tail(vals)
    finite = all(math.isfinite(v) for v in tail)
    spread = (max(tail) - min(tail)) if finite else math.inf
    mean = sum(tail) / len(tail) if finite else math.inf
    converged = finite and spread <= tol * max(1.0, abs(mean))
    return mean, converged, vals


def _logk_expr(e, k: int):
    if k <= 0:
        return e
    if k == 1:
        return Call("log", e)
    return Call("log_k", e, param=k)


def _fmt(v: float) -> str:
    return f"{v:.12g}"


def _growth_precondition(fexpr, hier) -> Tuple[bool, float]:
    worst = math.inf
    for x in Ladder.geometric(4.0, 2.5, 12).points():
        fx = _eval(fexpr, x, hier)
        if isinstance(fx, LIReal) and fx.level >= 2:
            continue  # far beyond x + 1 already
        worst = min(worst, orders._to_float(fx) - x)
    return worst > 1.0, worst


def _self_check(witness_text: str, fexpr, ladder, hier, tol: float) -> dict:
    est = order_of(witness_text, fexpr, ladder, tol=tol, hier=hier)
    return {"witness": witness_text, "lambda_hat": est.lambda_hat,
            "tail_spread": est.tail_spread, "converged": est.converged,
            "ok": est.converged and abs(est.lambda_hat - 1.0) <= tol}


def classify_expr(f, budget: Optional[ClassifyBudget] = None,
                  hier=None) -> ClassReport:
    """Class-0/1/2 decision tree with a re-checkable witness scale.

    Route: the super-logarithm order k = O_xi(f) >= 1 sends f to class 2;
    otherwise scan n for a stabilizing exponent mu with
    log_n f = (log_n x)^{mu + o(1)}; mu > 1 gives class 1 (class 0 on the
    n = -2 branch); mu near 1 falls through to the slow-correction
    analysis.  Every verdict carries a converged order check of the
    witness; anything that fails to converge is reported inconclusive.
    """
    budget = budget or ClassifyBudget()
    hier = hier or default_hierarchy()
    fexpr = _as_expr(f)
    ftext = funcexpr.to_text(fexpr)
    diags: dict = {"f": ftext}

    ok, margin = _growth_precondition(fexpr, hier)
    diags["min_f_minus_x"] = margin
    if not ok:
        return ClassReport("inconclusive", None, diags,
                           reason="f(x) >= x + 1 + delta fails on the sample")

    # super-logarithm order first: positive k means class 2
    k_est = order_of("xi(x)", fexpr, _tower_points(_K_LADDER_LO, _K_LADDER_HI),
                     tol=budget.order_tol, hier=hier)
    diags["k_hat"] = k_est.lambda_hat
    checks = []
    if k_est.converged and k_est.lambda_hat >= 0.9:
        k = round(k_est.lambda_hat)
        witness = "xi(x)" if k == 1 else f"xi(x)/{k}"
        chk = _self_check(witness, fexpr,
                          _tower_points(_K_LADDER_LO, _K_LADDER_HI),
                          hier, budget.order_tol)
        checks.append(chk)
        if chk["ok"]:
            return ClassReport("2", witness, diags, checks)
        return ClassReport("inconclusive", witness, diags, checks,
                           reason="class-2 witness order check did not converge to 1")

    mu_scan = {}
    for n in range(budget.n_min, budget.n_max + 1):
        try:
            mu, converged, _ = _mu_estimate(fexpr, n, hier, budget.mu_tol)
        except (EvalError, DomainError, ValueError, OverflowError) as exc:
            mu_scan[n] = f"failed: {exc}"
            continue
        mu_scan[n] = {"mu_hat": mu if math.isfinite(mu) else "inf",
                      "converged": converged}
        if not converged:
            continue
        diags["n"] = n
        diags["mu_hat"] = mu
        diags["mu_scan"] = mu_scan
        if mu > 1.0 + budget.mu_band:
            log_mu = math.log(mu)
            if n == -2:
                # additive shift: check on small points, large x cancels
                witness, cls, lad = f"x/{_fmt(log_mu)}", "0", _MU_LADDERS[-2]
            elif n == -1:
                witness, cls, lad = f"log(x)/{_fmt(log_mu)}", "1", _CHECK_LADDER
            else:
                witness, cls, lad = (f"log_{n + 2}(x)/{_fmt(log_mu)}", "1",
                                     _CHECK_LADDER)
            chk = _self_check(witness, fexpr, lad, hier, budget.order_tol)
            checks.append(chk)
            if chk["ok"]:
                return ClassReport(cls, witness, diags, checks)
            return ClassReport("inconclusive", witness, diags, checks,
                               reason="witness order check did not converge to 1")
        if abs(mu - 1.0) <= budget.mu_band:
            return _classify_mu_one(fexpr, n, diags, checks, budget, hier)
        mu_scan[n]["note"] = "mu < 1: not a growth scale at this depth"
    diags["mu_scan"] = mu_scan
    return ClassReport("inconclusive", None, diags, checks,
                       reason="no stabilizing exponent found in the n-scan")


def _classify_mu_one(fexpr, n: int, diags, checks, budget, hier) -> ClassReport:
    """The mu = 1 subcases: write log_{n+2} f = log_{n+2} x + 1/h and build
    the witness from h's own growth depth."""
    if n == -1:
        # same function, written as 1/log(f/x): with exact rational sample
        # points the quotient keeps digits that the float difference of the
        # two logs has already thrown away
        h_expr = Binary("/", Const(1.0),
                        Call("log", Binary("/", fexpr, Var())))
        scan_pts: Sequence = _FRAC_DEEP
    else:
        h_expr = Binary("/", Const(1.0),
                        Binary("-", _logk_expr(fexpr, n + 2),
                               _logk_expr(Var(), n + 2)))
        scan_pts = _GEOM_DEEP.points()
    diags["h"] = funcexpr.to_text(h_expr)

    # subcase: log h ~ c log_{n+3} x with finite c  =>  F = h log_{n+2} x / (c+1)
    c_vals = []
    try:
        for x in scan_pts:
            hv = orders._to_float(_eval(h_expr, x, hier))
            top = x
            for _ in range(n + 3):
                top = math.log(top)
            c_vals.append(math.log(hv) / top)
    except (EvalError, DomainError, ValueError, OverflowError) as exc:
        diags["c_scan"] = f"failed: {exc}"
        c_vals = []
    if c_vals:
        tail = _tail(c_vals)
        spread = max(tail) - min(tail)
        c_hat = sum(tail) / len(tail)
        diags["c_hat"] = c_hat
        diags["c_spread"] = spread
        if spread <= budget.mu_tol * max(1.0, abs(c_hat)):
            F = Binary("/", Binary("*", h_expr, _logk_expr(Var(), n + 2)),
                       Const(c_hat + 1.0))
            witness = funcexpr.to_text(F)
            chk = _self_check(witness, fexpr, _GEOM_DEEP, hier,
                              budget.order_tol)
            checks.append(chk)
            if chk["ok"]:
                return ClassReport("1", witness, diags, checks)

    # subcase: log h outgrows log_{n+3} x; find r with log_r h ~ log_{r+k} x
    r_table = {}
    check_pts = _FRAC_MID if n == -1 else _GEOM_DEEP
    for k in (n + 1, n + 2):
        for r in range(1, budget.r_max + 1):
            if r + k < 1:
                continue
            try:
                ratios = []
                for x in scan_pts:
                    hv = orders._to_float(_eval(h_expr, x, hier))
                    a, b = hv, float(x)
                    for _ in range(r):
                        a = math.log(a)
                    for _ in range(r + k):
                        b = math.log(b)
                    ratios.append(a / b)
            except (EvalError, DomainError, ValueError, OverflowError):
                continue
            tail = _tail(ratios)
            r_table[(k, r)] = tail[-1]
            if abs(tail[-1] - 1.0) <= 0.2 and (max(tail) - min(tail)) <= 0.1:
                num = h_expr
                for i in range(n + 2, r + k):
                    num = Binary("*", num, _logk_expr(Var(), i))
                den = None
                for j in range(1, r):
                    t = _logk_expr(h_expr, j)
                    den = t if den is None else Binary("*", den, t)
                F = num if den is None else Binary("/", num, den)
                witness = funcexpr.to_text(F)
                chk = _self_check(witness, fexpr, check_pts, hier,
                                  budget.order_tol)
                checks.append(chk)
                diags["r"] = r
                diags["k_of_h"] = k
                if chk["ok"]:
                    # k = 0 at the f/x level: h (hence the scale) is a power
                    # of x, the class-0 signature; extra logs mean class 1
                    cls = "0" if (n == -1 and k == 0) else "1"
                    return ClassReport(cls, witness, diags, checks)
    diags["r_scan"] = {f"k={k},r={r}": v for (k, r), v in r_table.items()}
    return ClassReport("inconclusive", None, diags, checks,
                       reason="mu = 1 subcase estimates did not stabilize")


# ---------------------------------------------------------------------------
# Between-class constructions


def _fn_of(F, hier) -> Callable:
    fn, _ = orders._normalize(F, hier)
    return fn


class BetweenClassFn:
    """f = Xi_m^{-1}(Xi_m + c / H_m(F)): sits strictly between the class of
    F^{-1} minus one and that class, for suitable F.

    inverse_form=True instead defines f through its inverse
    f^{-1} = Xi_m^{-1}(Xi_m - c / H_m(F)), which is guaranteed strictly
    increasing; __call__ then inverts numerically.
    """

    def __init__(self, F, m: int, c: float = 1.0, inverse_form: bool = False,
                 hier=None):
        if m < 2:
            raise DomainError("H_m is undefined below level 2")
        if c <= 0:
            raise DomainError("the between-class offset c must be positive")
        self.hier = hier or default_hierarchy()
        self.F = _fn_of(F, self.hier)
        self.F_text = _spec_text(F)
        self.m = m
        self.c = float(c)
        self.inverse_form = inverse_form

    def describe(self) -> str:
        side = "inverse of " if self.inverse_form else ""
        return (f"{side}xi_{self.m}-shift by {self.c}/H_{self.m}"
                f"({self.F_text})")

    def _shift(self, x: float) -> float:
        Fx = self.F(x)
        H = self.hier.H_k(self.m, Fx)
        if isinstance(H, LIReal):
            try:
                H = lixnum.to_real(H)
            except DomainError:
                return 0.0  # H beyond float range: the shift underflows
        return self.c / float(H)

    def _forward(self, x: float) -> float:
        base = float(self.hier.xi_k(self.m, x))
        return lixnum.to_real(self.hier.xi_k_inv(self.m, base + self._shift(x)))

    def inverse(self, y: float) -> float:
        if self.inverse_form:
            base = float(self.hier.xi_k(self.m, y))
            return lixnum.to_real(
                self.hier.xi_k_inv(self.m, base - self._shift(y)))
        return _bisect_inverse(self._forward, y)

    def __call__(self, x: float) -> float:
        if not self.inverse_form:
            return self._forward(x)
        return _bisect_inverse(self.inverse, x)


def _bisect_inverse(fn: Callable[[float], float], y: float) -> float:
    lo, hi = y / 4.0, y * 4.0 + 4.0
    for _ in range(200):
        if fn(lo) <= y:
            break
        lo /= 4.0
    for _ in range(200):
        if fn(hi) >= y:
            break
        hi *= 4.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if fn(mid) < y:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def between_class_fn(F, m: int, c: float = 1.0, inverse_form: bool = False,
                     hier=None) -> BetweenClassFn:
    return BetweenClassFn(F, m, c, inverse_form, hier)


# ---------------------------------------------------------------------------
# Sandwich bounds


class SandwichHandle:
    """h (factor 2) or g (factor 1/2) with Xi_level(h) = Xi_level + factor/H_level(base).

    The super-log shift factor/H_level(base(x)) is the handle's defining
    data; __call__ evaluates at float scale, scaled_shift exposes the
    H-normalized shift (a constant) used for order comparisons at towers.
    """

    def __init__(self, n: int, m: int, factor: float, level: int,
                 base: Callable, base_text: str, hier):
        self.n = n
        self.m = m
        self.factor = float(factor)
        self.level = level
        self.base = base
        self.base_text = base_text
        self.hier = hier

    def describe(self) -> str:
        return (f"xi_{self.level}-shift by {self.factor}/H_{self.level}"
                f"({self.base_text})")

    def scaled_shift(self) -> float:
        return self.factor

    def xi_shift(self, x) -> float:
        Bx = self.base(x)
        H = self.hier.H_k(self.level, Bx)
        if isinstance(H, LIReal):
            H = lixnum.to_real(H)
        return self.factor / float(H)

    def __call__(self, x: float) -> float:
        base = float(self.hier.xi_k(self.level, x))
        return lixnum.to_real(
            self.hier.xi_k_inv(self.level, base + self.xi_shift(x)))

    def inverse(self, y: float) -> float:
        return _bisect_inverse(self.__call__, y)


def _xi_fn(k: int, hier) -> Callable:
    return lambda x: hier.xi_k(k, x)


def sandwich_bounds(n: int, m: int = 1, hier=None
                    ) -> Tuple[Optional[SandwichHandle], SandwichHandle]:
    """(g, h) with g below and h above every member of the m-th layer of
    class n; g needs n >= 1, and n = 0 supports only the upper bound with
    m >= 4 (g is returned as None there)."""
    hier = hier or default_hierarchy()
    if m < 1 or m > 4:
        raise DomainError("sandwich bounds are constructed for 1 <= m <= 4")
    if n < 0:
        raise DomainError("class index must be nonnegative")
    if n == 0:
        if m < 4:
            raise DomainError(
                "no sandwich below class 0 layers; the upper bound needs m >= 4")
        _, upper = _sandwich_recurse(1, m, 2.0, hier)
        h = SandwichHandle(0, m, 2.0, 3, upper.inverse,
                           f"inverse[{upper.describe()}]", hier)
        return None, h
    g = _sandwich_recurse(n, m, 0.5, hier)[1]
    h = _sandwich_recurse(n, m, 2.0, hier)[1]
    return g, h


def _sandwich_recurse(n: int, m: int, factor: float, hier
                      ) -> Tuple[int, SandwichHandle]:
    if m == 1:
        base = _xi_fn(n + 1, hier)
        return n, SandwichHandle(n, 1, factor, n + 2, base,
                                 f"xi_{n + 1}", hier)
    _, prev = _sandwich_recurse(n + 1, m - 1, factor, hier)
    base = prev.inverse  # inverse of the one-class-up bound: a slow scale
    return n, SandwichHandle(n, m, factor, n + 3, base,
                             f"inverse[{prev.describe()}]", hier)


def scaled_xi_increment(a: float, x, hier=None) -> float:
    """H_{3}-normalized super-log increment of x -> a*x at the point x:
    chi(log x) * (xi(a x) - xi(x)), equal to xi(u + log a) - xi(u) scaled
    by chi(u) with u = log x.  Beyond the float range the correction
    factors fall below double precision and the limit value 1 is returned
    (the true value differs from it by less than 1/log x)."""
    if a <= 1.0:
        raise DomainError("needs a scaling factor a > 1")
    hier = hier or default_hierarchy()
    if not isinstance(x, LIReal):
        x = lixnum.from_real(float(x))
    u = lixnum.ln_li(x)
    try:
        uf = lixnum.to_real(u)
    except DomainError:
        return 1.0
    if uf > 1e6:
        # the increment xi(u + delta) - xi(u) falls below float resolution;
        # the limit value is exact to double precision here
        return 1.0
    delta = math.log(a)
    lo = float(hier.xi_k(3, uf))
    hi = float(hier.xi_k(3, uf + delta))
    chi = hier.chi(uf)
    if isinstance(chi, LIReal):
        return 1.0
    return float(chi) * (hi - lo)


def sandwich_bracket_report(ladder=None, hier=None) -> dict:
    """The n = 1, m = 1 sandwich against the canonical class-1 member
    f1 = e*x (unit translation in log coordinates), compared point by point
    in H_3-normalized super-log increments: g carries 1/2, f1 carries
    chi(log x)(xi(e x) - xi(x)) -> 1, h carries 2."""
    hier = hier or default_hierarchy()
    pts = ladder.points() if hasattr(ladder, "points") else \
        (list(ladder) if ladder is not None else _tower_points(2, 21))
    g, h = sandwich_bounds(1, 1, hier)
    rows = []
    for x in pts:
        nu = scaled_xi_increment(math.e, x, hier)
        rows.append({"x": str(x), "nu_f1": nu,
                     "ok": g.scaled_shift() < nu < h.scaled_shift()})
    return {"g_shift": g.scaled_shift(), "h_shift": h.scaled_shift(),
            "points": rows, "ok": all(r["ok"] for r in rows)}


# ---------------------------------------------------------------------------
# Separation


def inverse_derivative_ratio(f, g, x: float, hier=None) -> float:
    """(g^{-1})'(x) / (f^{-1})'(x) via numeric inversion plus the symbolic
    derivative: (q^{-1})'(x) = 1 / q'(q^{-1}(x))."""
    hier = hier or default_hierarchy()

    def inv_prime(spec) -> float:
        expr = funcexpr.parse(spec) if isinstance(spec, str) else spec
        y = funcexpr.invert_at(expr, float(x), bracket_hint=(1.0, float(x) + 2.0),
                               hier=hier)
        d = orders._to_float(
            funcexpr.evaluate(funcexpr.differentiate(expr), EvalEnv(y, hier)))
        if d == 0:
            raise EvalError("zero derivative at the inverse point")
        return 1.0 / d

    return inv_prime(g) / inv_prime(f)


def separation_check(f, g, class_f: int, class_g: int, ladder=None,
                     hier=None) -> dict:
    """Class separation: for f of class n >= 1 and g one class up, the
    inverse-derivative ratio (g^{-1})'/(f^{-1})' must fall to 0."""
    hier = hier or default_hierarchy()
    ladder = ladder or Ladder.geometric(64.0, 2.0, 16)
    report = {"f": _spec_text(f), "g": _spec_text(g),
              "class_f": class_f, "class_g": class_g}
    if class_f < 1:
        report["in_scope"] = False
        report["reason"] = "separation of inverse derivatives needs class >= 1"
        return report
    report["in_scope"] = True
    pts = ladder.points() if hasattr(ladder, "points") else list(ladder)
    ratios = [inverse_derivative_ratio(f, g, float(x), hier) for x in pts]
    tail = _tail(ratios)
    decreasing = all(b <= a * (1 + 1e-9) for a, b in zip(tail, tail[1:]))
    report["ratios"] = ratios
    report["final_ratio"] = ratios[-1]
    report["decreasing_tail"] = decreasing
    report["ok"] = decreasing and ratios[-1] < 0.5 * max(ratios)
    return report


# ---------------------------------------------------------------------------
# Staircase gallery


class Staircase:
    """A piecewise-linear scale F through exact rational knots, with its
    unit-step function f = F^{-1}(F + 1); all arithmetic is exact."""

    def __init__(self, knots: Sequence[Tuple]):
        pts = [(Fraction(x), Fraction(y)) for x, y in knots]
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if x1 <= x0 or y1 <= y0:
                raise ValueError("staircase knots must increase in both coordinates")
        if len(pts) < 2:
            raise ValueError("need at least two knots")
        self.knots = pts
        self._xs = [p[0] for p in pts]
        self._ys = [p[1] for p in pts]

    def _interp(self, grid, out, v: Fraction) -> Fraction:
        i = bisect.bisect_right(grid, v) - 1
        i = max(0, min(i, len(grid) - 2))
        x0, x1 = grid[i], grid[i + 1]
        y0, y1 = out[i], out[i + 1]
        return y0 + (v - x0) * (y1 - y0) / (x1 - x0)

    def F(self, x) -> Fraction:
        return self._interp(self._xs, self._ys, Fraction(x))

    def F_inv(self, y) -> Fraction:
        return self._interp(self._ys, self._xs, Fraction(y))

    def f(self, x) -> Fraction:
        return self.F_inv(self.F(x) + 1)


def staircase_class1(a: Optional[Sequence[int]] = None,
                     count: int = 34) -> Tuple[Callable, Callable]:
    """A scale F with F(a_k) = 2k and F(a_k - 1) = 2k - 1 (default
    a_k = 2^k), so f = F^{-1}(F+1) satisfies f(a_k - 1) = a_k exactly:
    a class-1 function that keeps returning to x + 1."""
    if a is None:
        a = [2 ** k for k in range(1, count + 1)]
    a = list(a)
    for prev, nxt in zip(a, a[1:]):
        if nxt <= prev + 1:
            raise ValueError("staircase spacing needs a_{k+1} > a_k + 1")
    knots = []
    for k, ak in enumerate(a, start=1):
        knots.append((ak - 1, 2 * k - 1))
        knots.append((ak, 2 * k))
    stair = Staircase(knots)
    return stair.F, stair.f


def staircase_class0(levels: int = 6) -> Tuple[Callable, Callable]:
    """A scale with F(2 a_k) = F(a_k) + 1 and slope 1/2 between doubling
    points, a_k = 2^(2^k): f = F^{-1}(F+1) has f(a_k) = 2 a_k yet
    f(n) = n + 2 along the flat stretches, and F(x)/x stays inside (0, 1):
    a class-0 function that keeps doubling."""
    a = [2 ** (2 ** k) for k in range(1, levels + 1)]
    knots = [(a[0], Fraction(2))]
    for k in range(len(a) - 1):
        x0, y0 = knots[-1]
        knots.append((2 * a[k], y0 + 1))
        knots.append((a[k + 1], y0 + 1 + Fraction(a[k + 1] - 2 * a[k], 2)))
    stair = Staircase(knots)
    return stair.F, stair.f


def wobbly_log_derivative(x, hier=None) -> float:
    """x f'(x)/f(x) for the wobbly f(x) = x (3 + sin xi(x)).

    Exact chain rule with xi' = 1/chi gives
    1 + cos(xi(x)) x / ((3 + sin xi(x)) chi(x)); the correction term's
    denominator outgrows every float already at small towers, where the
    reciprocal honestly underflows to 0.
    """
    hier = hier or default_hierarchy()
    xi = float(hier.xi_k(3, x))
    chi = hier.chi(x)
    if isinstance(chi, LIReal):
        try:
            chi = lixnum.to_real(chi)
        except DomainError:
            return 1.0
    xf = lixnum.to_real(x) if isinstance(x, LIReal) else float(x)
    return 1.0 + math.cos(xi) * xf / ((3.0 + math.sin(xi)) * float(chi))


def gallery() -> dict:
    """Named boundary examples: functions with ragged local behavior whose
    class is nevertheless well defined."""
    return {
        "wobbly_linear": {
            "expr": "x*(3+sin(xi(x)))",
            "class": 1,
            "note": "f(x)/x oscillates across [2, 4] yet x f'/f -> 1",
        },
        "wobbly_power": {
            "expr": "x^(3+sin(xi(x)))",
            "class": 1,
            "note": "wobbles between x^2 and x^4",
        },
        "staircase_class1": {
            "builder": staircase_class1,
            "class": 1,
            "note": "f(2^k - 1) = 2^k exactly; f returns to x+1 infinitely often",
        },
        "staircase_class0": {
            "builder": staircase_class0,
            "class": 0,
            "note": "f(a_k) = 2 a_k yet f = x + 2 on long stretches",
        },
    }
