"""A small expression DSL for the functions the library manipulates.

Grammar (whitespace-insensitive)::

    expr    := comp
    comp    := sum ('@' sum)*          # f @ g is composition f(g(x)), lowest precedence
    sum     := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' unary)?       # right associative, binds tighter than unary '-'
    atom    := NUMBER | 'x' | 'e' | 'pi' | NAME '(' expr ')' | '(' expr ')'

Function names: exp, log, log_<k>, sqrt, sin, abs, xi, xi_<k>, chi, plus the
numeric-derivative forms dxi_<k> and dchi emitted by differentiate().
Evaluation works over plain floats or over level-index numbers (LIReal);
in the latter mode exp/log become exact level shifts.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from . import lixnum
from .lixnum import DomainError, LIReal

__all__ = [
    "FuncExpr",
    "Var",
    "Const",
    "NamedConst",
    "Neg",
    "Binary",
    "Call",
    "Compose",
    "EvalEnv",
    "is_expr",
    "ParseError",
    "EvalError",
    "PrecisionError",
    "parse",
    "to_text",
    "evaluate",
    "differentiate",
    "invert_at",
]

Number = Union[float, Fraction]
Value = Union[float, Fraction, LIReal]


class ParseError(ValueError):
    def __init__(self, message: str, pos: int, expected=()):
        super().__init__(f"{message} at position {pos}" + (f" (expected {', '.join(sorted(expected))})" if expected else ""))
        self.pos = pos
        self.expected = frozenset(expected)


class EvalError(ValueError):
    pass


class PrecisionError(EvalError):
    """The requested operation is meaningless at the argument's scale."""


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class NamedConst:
    name: str  # 'e' or 'pi'


@dataclass(frozen=True)
class Neg:
    arg: "FuncExpr"


@dataclass(frozen=True)
class Binary:
    op: str  # + - * / ^
    left: "FuncExpr"
    right: "FuncExpr"


@dataclass(frozen=True)
class Call:
    fn: str
    arg: "FuncExpr"
    param: Optional[int] = None  # the k of log_k / xi_k / dxi_k


@dataclass(frozen=True)
class Compose:
    outer: "FuncExpr"
    inner: "FuncExpr"


FuncExpr = Union[Var, Const, NamedConst, Neg, Binary, Call, Compose]

_NODE_TYPES = (Var, Const, NamedConst, Neg, Binary, Call, Compose)


def is_expr(obj) -> bool:
    return isinstance(obj, _NODE_TYPES)

_PLAIN_FNS = {"exp", "log", "sqrt", "sin", "abs", "xi", "chi", "dchi"}
_PARAM_FN_RE = re.compile(r"^(log|xi|dxi)_(\d+)$")


# ---------------------------------------------------------------------------
# Parsing

_TOKEN_RE = re.compile(r"\s*(?:(\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+(?:[eE][+-]?\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|([-+*/^()@,]))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        num, name, sym = m.groups()
        if num is not None:
            tokens.append(("num", num, m.start(1)))
        elif name is not None:
            tokens.append(("name", name, m.start(2)))
        else:
            tokens.append(("sym", sym, m.start(3)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_sym(self, sym: str):
        kind, val, pos = self.peek()
        if kind != "sym" or val != sym:
            raise ParseError(f"got {val!r}", pos, expected={sym})
        return self.next()

    def parse(self) -> FuncExpr:
        e = self.comp()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"trailing input {val!r}", pos, expected={"end of input"})
        return e

    def comp(self) -> FuncExpr:
        e = self.sum()
        while self.peek()[:2] == ("sym", "@"):
            self.next()
            e = Compose(e, self.sum())
        return e

    def sum(self) -> FuncExpr:
        e = self.term()
        while self.peek()[0] == "sym" and self.peek()[1] in "+-":
            op = self.next()[1]
            e = Binary(op, e, self.term())
        return e

    def term(self) -> FuncExpr:
        e = self.unary()
        while self.peek()[0] == "sym" and self.peek()[1] in "*/":
            op = self.next()[1]
            e = Binary(op, e, self.unary())
        return e

    def unary(self) -> FuncExpr:
        if self.peek()[:2] == ("sym", "-"):
            self.next()
            return Neg(self.unary())
        return self.power()

    def power(self) -> FuncExpr:
        base = self.atom()
        if self.peek()[:2] == ("sym", "^"):
            self.next()
            return Binary("^", base, self.unary())
        return base

    def atom(self) -> FuncExpr:
        kind, val, pos = self.next()
        if kind == "num":
            return Const(float(val))
        if kind == "name":
            if self.peek()[:2] == ("sym", "("):
                self.next()
                arg = self.comp()
                self.expect_sym(")")
                return self._call(val, arg, pos)
            if val == "x":
                return Var()
            if val in ("e", "pi"):
                return NamedConst(val)
            raise ParseError(f"unknown identifier {val!r}", pos, expected={"x", "e", "pi", "function call"})
        if kind == "sym" and val == "(":
            e = self.comp()
            self.expect_sym(")")
            return e
        raise ParseError(f"got {val!r}", pos, expected={"number", "identifier", "("})

    @staticmethod
    def _call(name: str, arg: FuncExpr, pos: int) -> FuncExpr:
        if name in _PLAIN_FNS:
            return Call(name, arg)
        m = _PARAM_FN_RE.match(name)
        if m:
            return Call(m.group(1) + "_k", arg, param=int(m.group(2)))
        raise ParseError(f"unknown function {name!r}", pos, expected=_PLAIN_FNS)


def parse(text: str) -> FuncExpr:
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Printing (structure-preserving: parse(to_text(e)) == e)

_PREC = {"@": 0, "+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4, "atom": 5}


def _prec(e: FuncExpr) -> int:
    if isinstance(e, Binary):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return _PREC["neg"]
    if isinstance(e, Compose):
        return _PREC["@"]
    return _PREC["atom"]


def _child(e: FuncExpr, parent_prec: int, strict: bool) -> str:
    s = to_text(e)
    p = _prec(e)
    if p < parent_prec or (strict and p == parent_prec):
        return f"({s})"
    return s


def to_text(e: FuncExpr) -> str:
    if isinstance(e, Var):
        return "x"
    if isinstance(e, Const):
        if e.value == int(e.value) and abs(e.value) < 1e15:
            return str(int(e.value))
        return repr(e.value)
    if isinstance(e, NamedConst):
        return e.name
    if isinstance(e, Neg):
        return "-" + _child(e.arg, _PREC["neg"], strict=False)
    if isinstance(e, Binary):
        p = _PREC[e.op]
        if e.op == "^":
            # right-assoc; left operand must bind tighter than ^
            return _child(e.left, p, strict=True) + "^" + _child(e.right, p, strict=False)
        return _child(e.left, p, strict=False) + e.op + _child(e.right, p, strict=True)
    if isinstance(e, Call):
        if e.param is None:
            return f"{e.fn}({to_text(e.arg)})"
        base = e.fn[:-2]  # strip the '_k'
        return f"{base}_{e.param}({to_text(e.arg)})"
    if isinstance(e, Compose):
        p = _PREC["@"]
        return _child(e.outer, p, strict=False) + " @ " + _child(e.inner, p, strict=True)
    raise TypeError(f"not a FuncExpr: {e!r}")


# ---------------------------------------------------------------------------
# Evaluation


@dataclass
class EvalEnv:
    x: Value
    hier: object = None  # xi-hierarchy handle; needs .xi_k(k, x) and .chi(x)

    def with_x(self, x: Value) -> "EvalEnv":
        return EvalEnv(x, self.hier)


def _is_li(v) -> bool:
    return isinstance(v, LIReal)


def _as_float(v: Value) -> float:
    if _is_li(v):
        return lixnum.to_real(v)
    return float(v)


def _as_li(v: Value) -> LIReal:
    if _is_li(v):
        return v
    return lixnum.from_real_any(float(v))


def _exp(v: Value) -> Value:
    if _is_li(v):
        return lixnum.exp_li(v)
    x = float(v)
    try:
        r = math.exp(x)
    except OverflowError:
        r = math.inf
    if math.isinf(r):
        # promote instead of overflowing; x > 0 here necessarily
        return lixnum.exp_li(lixnum.from_real(x))
    return r


def _log(v: Value) -> Value:
    if _is_li(v):
        return lixnum.ln_li(v)
    if isinstance(v, Fraction) and Fraction(1, 2) < v < 2:
        # keep precision when the rational is a hair away from 1
        return math.log1p(float(v - 1))
    x = float(v)
    if x <= 0:
        raise EvalError(f"log of non-positive value {x!r}")
    return math.log(x)


def _log_k(v: Value, k: int) -> Value:
    for _ in range(k):
        v = _log(v)
    return v


def _pow(b: Value, p: Value) -> Value:
    if _is_li(b) or _is_li(p):
        bl = _as_li(b)
        if bl.level == 0 and bl.mantissa == 0.0:
            return bl  # 0^p
        return lixnum.exp_li(lixnum.mul(lixnum.ln_li(bl), _as_li(p)))
    bf, pf = float(b), float(p)
    try:
        r = bf ** pf
    except OverflowError:
        r = math.inf
    if isinstance(r, complex):
        raise EvalError(f"complex power {bf!r} ** {pf!r}")
    if math.isinf(r) and bf > 1:
        return lixnum.exp_li(lixnum.from_real(pf * math.log(bf)))
    return r


def _binary(op: str, a: Value, b: Value) -> Value:
    if op == "^":
        return _pow(a, b)
    if _is_li(a) or _is_li(b):
        name = {"+": "add", "-": "sub", "*": "mul", "/": "div"}[op]
        return lixnum.arith(name, _as_li(a), _as_li(b))
    if isinstance(a, Fraction) or isinstance(b, Fraction):
        # keep rational arithmetic exact; super-logarithm values can hold
        # integers far past the float range
        try:
            fa, fb = Fraction(a), Fraction(b)
        except (ValueError, OverflowError):
            pass
        else:
            if op == "+":
                return fa + fb
            if op == "-":
                return fa - fb
            if op == "*":
                return fa * fb
            if op == "/":
                if fb == 0:
                    raise EvalError("division by zero")
                return fa / fb
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        if b == 0:
            raise EvalError("division by zero")
        return a / b
    raise EvalError(f"unknown operator {op!r}")


def _need_hier(env: EvalEnv, fn: str):
    if env.hier is None:
        raise EvalError(f"{fn} needs a xi-hierarchy handle in the evaluation env")
    return env.hier


_NUMDIFF_STEP = 1e-5


def _numdiff(f, x: float) -> float:
    h = _NUMDIFF_STEP * max(1.0, abs(x))
    return (float(f(x + h)) - float(f(x - h))) / (2 * h)


def evaluate(expr: FuncExpr, env: EvalEnv) -> Value:
    if isinstance(expr, Var):
        return env.x
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, NamedConst):
        return math.e if expr.name == "e" else math.pi
    if isinstance(expr, Neg):
        v = evaluate(expr.arg, env)
        if _is_li(v):
            return lixnum.sub(lixnum.from_real(0.0), v)  # raises unless v == 0
        return -v
    if isinstance(expr, Binary):
        return _binary(expr.op, evaluate(expr.left, env), evaluate(expr.right, env))
    if isinstance(expr, Compose):
        return evaluate(expr.outer, env.with_x(evaluate(expr.inner, env)))
    if isinstance(expr, Call):
        v = evaluate(expr.arg, env)
        fn = expr.fn
        if fn == "exp":
            return _exp(v)
        if fn == "log":
            return _log(v)
        if fn == "log_k":
            return _log_k(v, expr.param)
        if fn == "sqrt":
            if _is_li(v):
                return _pow(v, 0.5)
            x = float(v)
            if x < 0:
                raise EvalError(f"sqrt of negative value {x!r}")
            return math.sqrt(x)
        if fn == "sin":
            if _is_li(v):
                if v.level >= 2:
                    raise PrecisionError("sin of a level >= 2 value: argument reduction is meaningless")
                v = lixnum.to_real(v)
            return math.sin(float(v))
        if fn == "abs":
            if _is_li(v):
                if v.level == -1:
                    return lixnum.from_real(-lixnum.to_real(v))
                return v
            return abs(v)
        if fn == "xi":
            return _need_hier(env, fn).xi_k(3, v)
        if fn == "xi_k":
            return _need_hier(env, fn).xi_k(expr.param, v)
        if fn == "chi":
            return _need_hier(env, fn).chi(v)
        if fn == "dxi_k":
            hier = _need_hier(env, fn)
            k = expr.param
            return _numdiff(lambda t: hier.xi_k(k, t), _as_float(v))
        if fn == "dchi":
            hier = _need_hier(env, fn)
            return _numdiff(hier.chi, _as_float(v))
        raise EvalError(f"unknown function {fn!r}")
    raise TypeError(f"not a FuncExpr: {expr!r}")


# ---------------------------------------------------------------------------
# Differentiation

_ZERO = Const(0.0)
_ONE = Const(1.0)


def _c(e: FuncExpr):
    if isinstance(e, Const):
        return e.value
    return None


def _add(a, b):
    if _c(a) == 0:
        return b
    if _c(b) == 0:
        return a
    if _c(a) is not None and _c(b) is not None:
        return Const(_c(a) + _c(b))
    return Binary("+", a, b)


def _sub(a, b):
    if _c(b) == 0:
        return a
    if _c(a) is not None and _c(b) is not None:
        return Const(_c(a) - _c(b))
    return Binary("-", a, b)


def _mul(a, b):
    if _c(a) == 0 or _c(b) == 0:
        return _ZERO
    if _c(a) == 1:
        return b
    if _c(b) == 1:
        return a
    if _c(a) is not None and _c(b) is not None:
        return Const(_c(a) * _c(b))
    return Binary("*", a, b)


def _div(a, b):
    if _c(a) == 0:
        return _ZERO
    if _c(b) == 1:
        return a
    if _c(a) is not None and _c(b) is not None and _c(b) != 0:
        return Const(_c(a) / _c(b))
    return Binary("/", a, b)


def differentiate(expr: FuncExpr) -> FuncExpr:
    """Symbolic derivative with respect to x.

    xi differentiates to 1/chi; xi_k for k >= 4 (and chi) fall back to
    numeric-derivative nodes since no closed form is available.
    """
    if isinstance(expr, Var):
        return _ONE
    if isinstance(expr, (Const, NamedConst)):
        return _ZERO
    if isinstance(expr, Neg):
        return Neg(differentiate(expr.arg))
    if isinstance(expr, Compose):
        return _mul(Compose(differentiate(expr.outer), expr.inner), differentiate(expr.inner))
    if isinstance(expr, Binary):
        u, v = expr.left, expr.right
        du, dv = differentiate(u), differentiate(v)
        if expr.op == "+":
            return _add(du, dv)
        if expr.op == "-":
            return _sub(du, dv)
        if expr.op == "*":
            return _add(_mul(du, v), _mul(u, dv))
        if expr.op == "/":
            return _div(_sub(_mul(du, v), _mul(u, dv)), Binary("^", v, Const(2.0)))
        if expr.op == "^":
            c = _c(v)
            if c is not None:
                # d(u^c) = c * u^(c-1) * u'
                return _mul(_mul(Const(c), Binary("^", u, Const(c - 1.0))), du)
            # general: u^v = exp(v log u)
            inner = _add(_mul(dv, Call("log", u)), _mul(v, _div(du, u)))
            return _mul(expr, inner)
    if isinstance(expr, Call):
        u, du = expr.arg, differentiate(expr.arg)
        fn = expr.fn
        if fn == "exp":
            return _mul(expr, du)
        if fn == "log":
            return _div(du, u)
        if fn == "log_k":
            # 1 / (u * log u * ... * log_{k-1} u)
            denom = None
            for j in range(expr.param):
                factor = u if j == 0 else Call("log_k", u, param=j)
                denom = factor if denom is None else _mul(denom, factor)
            if denom is None:
                return du  # log_0 is the identity
            return _div(du, denom)
        if fn == "sqrt":
            return _div(du, _mul(Const(2.0), expr))
        if fn == "sin":
            # no cos node in the DSL; sin(pi/2 - u) is cos(u)
            return _mul(Call("sin", _sub(_div(NamedConst("pi"), Const(2.0)), u)), du)
        if fn == "abs":
            raise EvalError("abs is not differentiable")
        if fn == "xi":
            return _div(du, Call("chi", u))
        if fn == "xi_k":
            k = expr.param
            if k == 0:
                return du
            if k == 1:
                return _div(du, NamedConst("e"))
            if k == 2:
                return _div(du, u)
            if k == 3:
                return _div(du, Call("chi", u))
            return _mul(Call("dxi_k", u, param=k), du)
        if fn == "chi":
            return _mul(Call("dchi", u), du)
        if fn in ("dxi_k", "dchi"):
            raise EvalError(f"{fn} (a numeric-derivative node) cannot be differentiated again")
    raise TypeError(f"not a FuncExpr: {expr!r}")


# ---------------------------------------------------------------------------
# Numeric inversion

_INVERT_RTOL = 1e-12
_MAX_EXPANSIONS = 200


def invert_at(expr: FuncExpr, y: float, bracket_hint=None, hier=None) -> float:
    """Solve evaluate(expr, x) == y for a strictly monotone expr.

    Bisection to ~1e-3 relative, then Newton polish with the symbolic
    derivative when it exists; geometric bracket expansion if the hint
    does not straddle y.
    """

    def f(x: float) -> float:
        v = evaluate(expr, EvalEnv(x, hier))
        try:
            return _as_float(v)
        except DomainError:
            return math.inf  # towered past the float range: still comparable

    if bracket_hint is None:
        a, b = 1.0, 2.0
    else:
        a, b = float(bracket_hint[0]), float(bracket_hint[1])
        if a > b:
            a, b = b, a

    fa, fb = f(a), f(b)
    increasing = fb >= fa
    for _ in range(_MAX_EXPANSIONS):
        lo_val, hi_val = (fa, fb) if increasing else (fb, fa)
        if lo_val <= y <= hi_val:
            break
        width = max(b - a, 1e-6)
        if (y > hi_val) == increasing:
            b = b + 2 * width
            fb = f(b)
        else:
            # shrink toward 0 first so we stay inside log/sqrt domains
            a = a / 4 if a > 0 else a - 2 * width
            fa = f(a)
    else:
        raise EvalError(f"could not bracket y={y!r} after {_MAX_EXPANSIONS} expansions")

    # bisection to coarse relative accuracy
    lo, hi = a, b
    flo = fa
    for _ in range(200):
        if hi - lo <= 1e-3 * max(1.0, abs(lo)):
            break
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm <= y) == increasing:
            lo, flo = mid, fm
        else:
            hi = mid

    x = 0.5 * (lo + hi)
    tol = _INVERT_RTOL * max(1.0, abs(y))

    deriv = None
    try:
        deriv = differentiate(expr)
    except (EvalError, TypeError):
        deriv = None

    if deriv is not None:
        for _ in range(60):
            fx = f(x)
            if abs(fx - y) <= tol:
                return x
            try:
                d = _as_float(evaluate(deriv, EvalEnv(x, hier)))
            except (EvalError, DomainError, ZeroDivisionError, OverflowError):
                break
            if d == 0 or not math.isfinite(d):
                break
            step = (fx - y) / d
            nx = x - step
            if not (lo - (hi - lo) <= nx <= hi + (hi - lo)):
                break
            x = nx
        else:
            pass
    # fall back to full bisection
    for _ in range(200):
        fx = f(x)
        if abs(fx - y) <= tol:
            return x
        if (fx <= y) == increasing:
            lo = x
        else:
            hi = x
        x = 0.5 * (lo + hi)
    fx = f(x)
    if abs(fx - y) <= tol:
        return x
    raise EvalError(f"inversion did not converge: f({x!r}) = {fx!r}, target {y!r}")
