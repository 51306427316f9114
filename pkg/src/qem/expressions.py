"""Closed-form scalar expressions over chart coordinates.

An :class:`Expr` is a small immutable syntax tree built from constants,
coordinates, the four ring operations, powers, and the elementary functions
sin/cos/tan/sinh/cosh/tanh/exp/ln/sqrt.  Trees support exact symbolic
differentiation (`diff`) and evaluation either on floats or on
:class:`~qem.jets.Jet` objects, so the same component expression serves both
quick point probes and full third-order curvature evaluation.

A piecewise-quintic interpolant node (:class:`Interp`) lets numerically
integrated profiles participate in the same machinery; see
:class:`HermiteQuintic`.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, SingularExpr
from .jets import Jet


class Expr:
    """Base class; subclasses implement ``ev`` and ``diff``."""

    def __call__(self, args):
        """Evaluate on a sequence of per-coordinate floats or jets."""
        return self.ev(args)

    def ev(self, args):
        raise NotImplementedError

    def diff(self, var: int) -> "Expr":
        raise NotImplementedError

    # operator sugar -------------------------------------------------
    def __add__(self, other):
        return _add(self, _wrap(other))

    def __radd__(self, other):
        return _add(_wrap(other), self)

    def __sub__(self, other):
        return _sub(self, _wrap(other))

    def __rsub__(self, other):
        return _sub(_wrap(other), self)

    def __mul__(self, other):
        return _mul(self, _wrap(other))

    def __rmul__(self, other):
        return _mul(_wrap(other), self)

    def __truediv__(self, other):
        return _div(self, _wrap(other))

    def __rtruediv__(self, other):
        return _div(_wrap(other), self)

    def __neg__(self):
        return _mul(Const(-1.0), self)

    def __pow__(self, p):
        return _pow(self, p)


def _wrap(x) -> "Expr":
    if isinstance(x, Expr):
        return x
    return Const(float(x))


class Const(Expr):
    __slots__ = ("value",)

    def __init__(self, value: float):
        self.value = float(value)

    def ev(self, args):
        return self.value

    def diff(self, var):
        return Const(0.0)

    def __repr__(self):
        return f"{self.value:g}"


class Coord(Expr):
    __slots__ = ("index",)

    def __init__(self, index: int):
        self.index = int(index)

    def ev(self, args):
        return args[self.index]

    def diff(self, var):
        return Const(1.0 if var == self.index else 0.0)

    def __repr__(self):
        return f"x{self.index}"


class Add(Expr):
    __slots__ = ("a", "b")

    def __init__(self, a, b):
        self.a, self.b = a, b

    def ev(self, args):
        return self.a.ev(args) + self.b.ev(args)

    def diff(self, var):
        return _add(self.a.diff(var), self.b.diff(var))

    def __repr__(self):
        return f"({self.a!r} + {self.b!r})"


class Sub(Expr):
    __slots__ = ("a", "b")

    def __init__(self, a, b):
        self.a, self.b = a, b

    def ev(self, args):
        return self.a.ev(args) - self.b.ev(args)

    def diff(self, var):
        return _sub(self.a.diff(var), self.b.diff(var))

    def __repr__(self):
        return f"({self.a!r} - {self.b!r})"


class Mul(Expr):
    __slots__ = ("a", "b")

    def __init__(self, a, b):
        self.a, self.b = a, b

    def ev(self, args):
        return self.a.ev(args) * self.b.ev(args)

    def diff(self, var):
        return _add(
            _mul(self.a.diff(var), self.b), _mul(self.a, self.b.diff(var))
        )

    def __repr__(self):
        return f"({self.a!r} * {self.b!r})"


class Div(Expr):
    __slots__ = ("a", "b")

    def __init__(self, a, b):
        self.a, self.b = a, b

    def ev(self, args):
        den = self.b.ev(args)
        if not isinstance(den, Jet) and den == 0.0:
            raise SingularExpr(f"division by zero in {self!r}")
        return self.a.ev(args) / den

    def diff(self, var):
        num = _sub(
            _mul(self.a.diff(var), self.b), _mul(self.a, self.b.diff(var))
        )
        return _div(num, _mul(self.b, self.b))

    def __repr__(self):
        return f"({self.a!r} / {self.b!r})"


class Pow(Expr):
    """Integer or real power of a subexpression."""

    __slots__ = ("base", "p")

    def __init__(self, base, p):
        self.base = base
        self.p = int(p) if float(p).is_integer() else float(p)

    def ev(self, args):
        b = self.base.ev(args)
        if isinstance(b, Jet):
            return b**self.p
        if isinstance(self.p, int):
            if self.p < 0 and b == 0.0:
                raise SingularExpr(f"zero base with negative power in {self!r}")
            return b**self.p
        if b <= 0.0:
            raise SingularExpr(f"fractional power of non-positive base in {self!r}")
        return b**self.p

    def diff(self, var):
        return _mul(
            _mul(Const(float(self.p)), _pow(self.base, self.p - 1)),
            self.base.diff(var),
        )

    def __repr__(self):
        return f"({self.base!r} ** {self.p})"


def _guarded(fn, name, lo_open=None):
    def call(x):
        if lo_open is not None and x <= lo_open:
            raise SingularExpr(f"{name} of non-positive value {x!r}")
        return fn(x)

    return call


_FLOAT_FUNCS = {
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "sinh": math.sinh,
    "cosh": math.cosh,
    "tanh": math.tanh,
    "exp": math.exp,
    "ln": _guarded(math.log, "ln", lo_open=0.0),
    "sqrt": _guarded(math.sqrt, "sqrt", lo_open=0.0),
}

_JET_METHOD = {name: name for name in _FLOAT_FUNCS}
_JET_METHOD["ln"] = "log"


def _dfun(name, u: Expr) -> Expr:
    """Derivative of the named elementary function at argument ``u``."""
    if name == "sin":
        return Fun("cos", u)
    if name == "cos":
        return -Fun("sin", u)
    if name == "tan":
        return Const(1.0) + Fun("tan", u) ** 2
    if name == "sinh":
        return Fun("cosh", u)
    if name == "cosh":
        return Fun("sinh", u)
    if name == "tanh":
        return Const(1.0) - Fun("tanh", u) ** 2
    if name == "exp":
        return Fun("exp", u)
    if name == "ln":
        return Const(1.0) / u
    if name == "sqrt":
        return Const(0.5) / Fun("sqrt", u)
    raise ValueError(f"unknown function {name!r}")


class Fun(Expr):
    __slots__ = ("name", "arg")

    def __init__(self, name: str, arg: Expr):
        if name not in _FLOAT_FUNCS:
            raise ValueError(f"unknown function {name!r}")
        self.name = name
        self.arg = arg

    def ev(self, args):
        u = self.arg.ev(args)
        if isinstance(u, Jet):
            return getattr(u, _JET_METHOD[self.name])()
        return _FLOAT_FUNCS[self.name](u)

    def diff(self, var):
        return _mul(_dfun(self.name, self.arg), self.arg.diff(var))

    def __repr__(self):
        return f"{self.name}({self.arg!r})"


# convenience constructors ------------------------------------------------
def sin(u):
    return Fun("sin", _wrap(u))


def cos(u):
    return Fun("cos", _wrap(u))


def tan(u):
    return Fun("tan", _wrap(u))


def sinh(u):
    return Fun("sinh", _wrap(u))


def cosh(u):
    return Fun("cosh", _wrap(u))


def tanh(u):
    return Fun("tanh", _wrap(u))


def exp(u):
    return Fun("exp", _wrap(u))


def ln(u):
    return Fun("ln", _wrap(u))


def sqrt(u):
    return Fun("sqrt", _wrap(u))


# light constant folding, so differentiation does not balloon the trees ----
def _is_const(e, v=None):
    return isinstance(e, Const) and (v is None or e.value == v)


def _add(a, b):
    if _is_const(a) and _is_const(b):
        return Const(a.value + b.value)
    if _is_const(a, 0.0):
        return b
    if _is_const(b, 0.0):
        return a
    return Add(a, b)


def _sub(a, b):
    if _is_const(a) and _is_const(b):
        return Const(a.value - b.value)
    if _is_const(b, 0.0):
        return a
    if _is_const(a, 0.0):
        return -b
    return Sub(a, b)


def _mul(a, b):
    if _is_const(a) and _is_const(b):
        return Const(a.value * b.value)
    if _is_const(a, 0.0) or _is_const(b, 0.0):
        return Const(0.0)
    if _is_const(a, 1.0):
        return b
    if _is_const(b, 1.0):
        return a
    return Mul(a, b)


def _div(a, b):
    if _is_const(b, 1.0):
        return a
    if _is_const(a, 0.0) and not _is_const(b, 0.0):
        return Const(0.0)
    if _is_const(a) and _is_const(b) and b.value != 0.0:
        return Const(a.value / b.value)
    return Div(a, b)


def _pow(base, p):
    p = int(p) if float(p).is_integer() else float(p)
    if p == 0:
        return Const(1.0)
    if p == 1:
        return base
    if _is_const(base) and (isinstance(p, int) or base.value > 0.0):
        return Const(base.value**p)
    return Pow(base, p)


# --------------------------------------------------------------------------
# piecewise-quintic Hermite interpolation
# --------------------------------------------------------------------------
class HermiteQuintic:
    """C^2 piecewise-quintic interpolant from nodal (value, f', f'') data.

    On each interval the unique quintic matching value, first and second
    derivative at both ends is used, so the interpolant reproduces the nodal
    data *exactly* — important because downstream residual checks are taken
    at the nodes.  Interpolation error between nodes is O(h^6) for the value
    and O(h^4) for the second derivative.
    """

    def __init__(self, s, y, dy, d2y):
        s = np.asarray(s, float)
        y, dy, d2y = (np.asarray(a, float) for a in (y, dy, d2y))
        if s.ndim != 1 or len(s) < 2:
            raise ValueError("need at least two nodes")
        if np.any(np.diff(s) <= 0.0):
            raise ValueError("nodes must be strictly increasing")
        if not (s.shape == y.shape == dy.shape == d2y.shape):
            raise ValueError("node arrays must share one shape")
        self.s = s
        self.dx = np.diff(s)
        h = self.dx[:, None]
        y0, y1 = y[:-1, None], y[1:, None]
        d0, d1 = dy[:-1, None] * h, dy[1:, None] * h
        e0, e1 = d2y[:-1, None] * h**2, d2y[1:, None] * h**2
        dlt = y1 - y0
        a0 = y0
        a1 = d0
        a2 = e0 / 2.0
        a3 = 10.0 * dlt - 6.0 * d0 - 4.0 * d1 - 1.5 * e0 + 0.5 * e1
        a4 = -15.0 * dlt + 8.0 * d0 + 7.0 * d1 + 1.5 * e0 - e1
        a5 = 6.0 * dlt - 3.0 * (d0 + d1) - 0.5 * e0 + 0.5 * e1
        # rows: interval, columns: ascending powers of the local variable u
        self._coef = {0: np.hstack([a0, a1, a2, a3, a4, a5])}

    def _coef_order(self, order: int) -> np.ndarray:
        if order not in self._coef:
            prev = self._coef_order(order - 1)
            k = np.arange(1, prev.shape[1])
            self._coef[order] = prev[:, 1:] * k[None, :]
        return self._coef[order]

    def eval(self, x: float, order: int = 0) -> float:
        s = self.s
        if x < s[0] - 1e-9 or x > s[-1] + 1e-9:
            raise DomainError(f"{x!r} outside interpolation range [{s[0]}, {s[-1]}]")
        i = int(np.clip(np.searchsorted(s, x, side="right") - 1, 0, len(s) - 2))
        u = (x - s[i]) / self.dx[i]
        coefs = self._coef_order(order)
        if coefs.shape[1] == 0:
            return 0.0
        acc = 0.0
        for ck in coefs[i, ::-1]:
            acc = acc * u + ck
        return acc / self.dx[i] ** order


class Interp(Expr):
    """Expression leaf wrapping a :class:`HermiteQuintic` in one coordinate."""

    __slots__ = ("spline", "var", "order")

    def __init__(self, spline: HermiteQuintic, var: int = 0, order: int = 0):
        self.spline = spline
        self.var = int(var)
        self.order = int(order)

    def ev(self, args):
        x = args[self.var]
        if isinstance(x, Jet):
            v = float(x.value)
            d = [self.spline.eval(v, self.order + k) for k in range(4)]
            return x.compose(*d)
        return self.spline.eval(float(x), self.order)

    def diff(self, var):
        if var != self.var:
            return Const(0.0)
        return Interp(self.spline, self.var, self.order + 1)

    def __repr__(self):
        ticks = "'" * self.order
        return f"interp{ticks}(x{self.var})"
