"""Forward-mode truncated Taylor ("jet") arithmetic of total order 3.

A jet over ``n`` chart variables stores the Taylor coefficients

    c_alpha = (1/alpha!) * d^alpha f (p)

of a scalar function at a point ``p``, for every multi-index ``alpha`` with
``|alpha| <= 3``.  Sums, products, quotients and compositions with elementary
functions act on the coefficient arrays exactly (to floating-point rounding),
which gives all partial derivatives through third order without any finite
differencing.

Coefficient layout
------------------
Monomials are ordered by total degree, then by ``combinations_with_replacement``
order within a degree, so index 0 is the constant term and indices ``1..n`` are
the first-order terms in variable order.  A :class:`Jet` may carry arbitrary
leading batch axes; the coefficient axis is always last.

Truncation is consistent: an operation that only knows coefficients up to
degree ``d`` never contaminates coefficients of degree ``<= d`` in its output,
so e.g. differentiating a degree-3 jet yields a jet whose coefficients are
trustworthy through degree 2 and whose top-degree slots are zeroed.
"""

from __future__ import annotations

import math
from functools import lru_cache
from itertools import combinations_with_replacement

import numpy as np

from .errors import DegenerateMetric, SingularExpr

ORDER = 3


def _monomials(nvars: int) -> list[tuple[int, ...]]:
    out = []
    for deg in range(ORDER + 1):
        for combo in combinations_with_replacement(range(nvars), deg):
            alpha = [0] * nvars
            for v in combo:
                alpha[v] += 1
            out.append(tuple(alpha))
    return out


class JetSpace:
    """Monomial bookkeeping (multiplication/derivation tables) for one arity."""

    def __init__(self, nvars: int):
        if nvars < 1:
            raise ValueError("jet space needs at least one variable")
        self.nvars = nvars
        self.exponents = _monomials(nvars)
        self.size = len(self.exponents)
        self.index = {a: i for i, a in enumerate(self.exponents)}
        # alpha! per monomial, to convert stored coefficients into partials.
        self.fact = np.array(
            [math.prod(math.factorial(e) for e in a) for a in self.exponents],
            dtype=float,
        )
        self._build_mul_table()
        self._build_deriv_tables()

    def _build_mul_table(self) -> None:
        triples = []
        for i, a in enumerate(self.exponents):
            da = sum(a)
            for j, b in enumerate(self.exponents):
                if da + sum(b) <= ORDER:
                    k = self.index[tuple(x + y for x, y in zip(a, b))]
                    triples.append((k, i, j))
        triples.sort()
        ks, is_, js = (np.array(col) for col in zip(*triples))
        self._mul_i = is_
        self._mul_j = js
        # Every output index occurs (alpha = alpha + 0), so the segment starts
        # cover 0..size-1 and add.reduceat yields one sum per coefficient.
        self._mul_starts = np.searchsorted(ks, np.arange(self.size))

    def _build_deriv_tables(self) -> None:
        self._dsrc, self._ddst, self._dfac = [], [], []
        for v in range(self.nvars):
            src, dst, fac = [], [], []
            for i, a in enumerate(self.exponents):
                if sum(a) >= ORDER:  # top-degree information is lost
                    continue
                b = list(a)
                b[v] += 1
                src.append(self.index[tuple(b)])
                dst.append(i)
                fac.append(b[v])
            self._dsrc.append(np.array(src))
            self._ddst.append(np.array(dst))
            self._dfac.append(np.array(fac, dtype=float))

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Coefficient-array product (Cauchy product truncated at ORDER)."""
        p = a[..., self._mul_i] * b[..., self._mul_j]
        return np.add.reduceat(p, self._mul_starts, axis=-1)


@lru_cache(maxsize=None)
def jet_space(nvars: int) -> JetSpace:
    return JetSpace(nvars)


def _coef(x) -> np.ndarray:
    return x[..., None] if np.ndim(x) else np.asarray(x, dtype=float)


class Jet:
    """A (possibly batched) order-3 Taylor expansion.

    ``c`` has shape ``(*batch, space.size)``; all arithmetic broadcasts over
    the batch axes exactly like numpy.
    """

    __slots__ = ("space", "c")

    def __init__(self, space: JetSpace, c: np.ndarray):
        self.space = space
        self.c = np.asarray(c, dtype=float)

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------
    @classmethod
    def constant(cls, space: JetSpace, value) -> "Jet":
        value = np.asarray(value, dtype=float)
        c = np.zeros(value.shape + (space.size,))
        c[..., 0] = value
        return cls(space, c)

    @classmethod
    def variable(cls, space: JetSpace, v: int, value: float) -> "Jet":
        c = np.zeros(space.size)
        c[0] = value
        c[1 + v] = 1.0
        return cls(space, c)

    @classmethod
    def seed_point(cls, space: JetSpace, point) -> list["Jet"]:
        """One coordinate jet per chart variable, centred at ``point``."""
        return [cls.variable(space, v, point[v]) for v in range(space.nvars)]

    @classmethod
    def stack(cls, jets, axis: int = 0) -> "Jet":
        space = jets[0].space
        cs = np.broadcast_arrays(*(j.c for j in jets))
        return cls(space, np.stack(cs, axis=axis))

    # ------------------------------------------------------------------
    # views
    # ------------------------------------------------------------------
    @property
    def value(self):
        return self.c[..., 0]

    @property
    def grad(self) -> np.ndarray:
        """First partial derivatives, shape ``(*batch, nvars)``."""
        return self.c[..., 1 : self.space.nvars + 1]

    def partial(self, alpha) -> np.ndarray:
        """The partial derivative d^alpha, as a plain array."""
        i = self.space.index[tuple(alpha)]
        return self.c[..., i] * self.space.fact[i]

    def hess(self) -> np.ndarray:
        """Matrix of second partials, shape ``(*batch, n, n)``."""
        n = self.space.nvars
        out = np.empty(self.c.shape[:-1] + (n, n))
        for i in range(n):
            for j in range(i, n):
                alpha = [0] * n
                alpha[i] += 1
                alpha[j] += 1
                out[..., i, j] = out[..., j, i] = self.partial(alpha)
        return out

    def __getitem__(self, idx) -> "Jet":
        return Jet(self.space, self.c[idx])

    def transpose(self, *axes) -> "Jet":
        perm = tuple(axes) + (self.c.ndim - 1,)
        return Jet(self.space, np.transpose(self.c, perm))

    # ------------------------------------------------------------------
    # ring operations
    # ------------------------------------------------------------------
    def __add__(self, other) -> "Jet":
        if isinstance(other, Jet):
            return Jet(self.space, self.c + other.c)
        out = self.c + np.zeros(np.shape(other) + (1,))
        out[..., 0] += other
        return Jet(self.space, out)

    __radd__ = __add__

    def __neg__(self) -> "Jet":
        return Jet(self.space, -self.c)

    def __sub__(self, other) -> "Jet":
        return self + (-other if isinstance(other, Jet) else -np.asarray(other))

    def __rsub__(self, other) -> "Jet":
        return (-self) + other

    def __mul__(self, other) -> "Jet":
        if isinstance(other, Jet):
            return Jet(self.space, self.space.mul(self.c, other.c))
        return Jet(self.space, self.c * _coef(np.asarray(other, dtype=float)))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Jet":
        if isinstance(other, Jet):
            return self * other._reciprocal()
        return self * (1.0 / np.asarray(other, dtype=float))

    def __rtruediv__(self, other) -> "Jet":
        return self._reciprocal() * other

    def __pow__(self, p) -> "Jet":
        if isinstance(p, (int, np.integer)) or (
            isinstance(p, float) and p.is_integer()
        ):
            p = int(p)
            if p == 0:
                return Jet.constant(self.space, np.ones(self.c.shape[:-1]))
            if p < 0:
                return self._reciprocal() ** (-p)
            out = self
            for _ in range(p - 1):
                out = out * self
            return out
        v = self.value
        if np.any(v <= 0.0):
            raise SingularExpr(f"fractional power of non-positive base {v!r}")
        return self.compose(
            v**p,
            p * v ** (p - 1),
            p * (p - 1) * v ** (p - 2),
            p * (p - 1) * (p - 2) * v ** (p - 3),
        )

    def _reciprocal(self) -> "Jet":
        v = self.value
        if np.any(v == 0.0):
            raise SingularExpr("division by a jet with zero value")
        return self.compose(1.0 / v, -1.0 / v**2, 2.0 / v**3, -6.0 / v**4)

    # ------------------------------------------------------------------
    # composition with smooth univariate functions
    # ------------------------------------------------------------------
    def compose(self, d0, d1, d2, d3) -> "Jet":
        """Apply ``f`` given its value and first three derivatives at
        ``self.value`` (arrays broadcastable against the batch shape)."""
        sp = self.space
        h = self.c.copy()
        h[..., 0] = 0.0
        h2 = sp.mul(h, h)
        h3 = sp.mul(h2, h)
        out = h * _coef(np.asarray(d1, float))
        out += h2 * _coef(np.asarray(d2, float) / 2.0)
        out += h3 * _coef(np.asarray(d3, float) / 6.0)
        out[..., 0] += d0
        return Jet(sp, out)

    def exp(self) -> "Jet":
        e = np.exp(self.value)
        return self.compose(e, e, e, e)

    def log(self) -> "Jet":
        v = self.value
        if np.any(v <= 0.0):
            raise SingularExpr(f"log of non-positive value {v!r}")
        return self.compose(np.log(v), 1.0 / v, -1.0 / v**2, 2.0 / v**3)

    def sqrt(self) -> "Jet":
        v = self.value
        if np.any(v <= 0.0):
            raise SingularExpr(f"sqrt of non-positive value {v!r}")
        s = np.sqrt(v)
        return self.compose(s, 0.5 / s, -0.25 / (s * v), 0.375 / (s * v**2))

    def sin(self) -> "Jet":
        s, c = np.sin(self.value), np.cos(self.value)
        return self.compose(s, c, -s, -c)

    def cos(self) -> "Jet":
        s, c = np.sin(self.value), np.cos(self.value)
        return self.compose(c, -s, -c, s)

    def tan(self) -> "Jet":
        return self.sin() / self.cos()

    def sinh(self) -> "Jet":
        s, c = np.sinh(self.value), np.cosh(self.value)
        return self.compose(s, c, s, c)

    def cosh(self) -> "Jet":
        s, c = np.sinh(self.value), np.cosh(self.value)
        return self.compose(c, s, c, s)

    def tanh(self) -> "Jet":
        return self.sinh() / self.cosh()

    # ------------------------------------------------------------------
    # differentiation (drops one order)
    # ------------------------------------------------------------------
    def deriv(self, v: int) -> "Jet":
        """The jet of the partial derivative with respect to variable ``v``.

        The top-degree coefficients of the result are zero: they would need
        fourth-order data of the original jet.
        """
        sp = self.space
        out = np.zeros_like(self.c)
        out[..., sp._ddst[v]] = self.c[..., sp._dsrc[v]] * sp._dfac[v]
        return Jet(sp, out)


# ----------------------------------------------------------------------
# linear algebra over jets
# ----------------------------------------------------------------------
def jet_einsum(spec: str, x: Jet, y: Jet) -> Jet:
    """Einstein contraction of two jet tensors, fused with jet multiplication.

    ``spec`` uses the batch axes only (the coefficient axis is handled
    internally); the letter ``Z`` is reserved.
    """
    sp = x.space
    ins, out = spec.split("->")
    sx, sy = ins.split(",")
    p = np.einsum(
        f"{sx}Z,{sy}Z->{out}Z",
        x.c[..., sp._mul_i],
        y.c[..., sp._mul_j],
        optimize=True,
    )
    return Jet(sp, np.add.reduceat(p, sp._mul_starts, axis=-1))


def jet_matrix_inverse(a: Jet) -> Jet:
    """Inverse of a square jet matrix (batch shape ``(n, n)``).

    Two Newton steps ``X <- X (2I - A X)`` starting from the float inverse
    lift exactness from degree 0 to degree 3.
    """
    n = a.c.shape[0]
    try:
        x0 = np.linalg.inv(a.value)
    except np.linalg.LinAlgError as exc:
        raise DegenerateMetric(f"matrix not invertible: {exc}") from exc
    x = Jet.constant(a.space, x0)
    eye2 = 2.0 * np.eye(n)
    for _ in range(2):
        ax = jet_einsum("ik,kj->ij", a, x)
        t = Jet(a.space, -ax.c)
        t.c[..., 0] += eye2
        x = jet_einsum("ik,kj->ij", x, t)
    return x
