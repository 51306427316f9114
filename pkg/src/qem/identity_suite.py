"""Pointwise algebraic certificates for the distinct-eigenvalue branch.

When the three Ricci eigenvalues transverse to the potential gradient are
pairwise distinct, the structure equations close into purely algebraic
relations among the principal values (a, b, c) and the weight m -- no
curvature evaluation is involved.  The chain of relations forces f' = 0,
which rules the configuration out for non-constant potentials, so this module
certifies identities rather than metrics.

Everything is built from two symmetric polynomials:

* ``p_invariant``   --  P = a^2 + b^2 + c^2 - ab - bc - ca, which equals half
                        the sum of squared pairwise gaps (positive unless
                        a = b = c);
* ``sym_cubic``     --  a^2 b + a b^2 + a^2 c + a c^2 + b^2 c + b c^2.

The certified operations are ``gamma_sq`` (squared commutator coefficient),
``f_prime_distinct`` (the forced potential derivative), ``pair_prime`` (the
closed form of (zeta_i' - zeta_j')/(zeta_i - zeta_j)), and the two residuals
``prop31_residual`` / ``alpha_consistency`` that must vanish identically.
``sweep_report`` packages seeded random sweeps of the residuals for the CLI.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConstraintViolation, DegenerateTriple

_EXCLUDED_M = (0.0, 1.0, -1.0, -2.0)
_EXCLUSION_TOL = 1e-12

#: Weights used by the default random sweeps; avoids the excluded set.
SWEEP_M_VALUES = (-3.0, -0.5, 2.0, 5.0, 10.0)

#: Relative gap below which a pair of principal values counts as equal.
DISTINCT_TOL = 1e-8


@dataclass(frozen=True)
class Triple:
    """Principal values (a, b, c) of the transverse Ricci block, plus m.

    The weight shares the structural exclusions of the defining equation
    (m not in {0, +-1, -2}); those are rejected at construction.  Pairwise
    distinctness is a per-operation requirement, not a construction-time one:
    ``gamma_sq`` of a triple with a = b is a legitimate zero, while the
    operations that divide by a gap raise :class:`DegenerateTriple`.
    """

    a: float
    b: float
    c: float
    m: float

    def __post_init__(self):
        for bad in _EXCLUDED_M:
            if abs(self.m - bad) <= _EXCLUSION_TOL:
                raise ConstraintViolation(f"m = {bad:g} is excluded")

    @property
    def scale(self) -> float:
        return 1.0 + max(abs(self.a), abs(self.b), abs(self.c))


def p_invariant(t: Triple) -> float:
    """P = a^2 + b^2 + c^2 - ab - bc - ca (half the summed squared gaps)."""
    a, b, c = t.a, t.b, t.c
    return a * a + b * b + c * c - a * b - b * c - c * a


def sym_cubic(t: Triple) -> float:
    """The symmetric cubic a^2 b + a b^2 + a^2 c + a c^2 + b^2 c + b c^2."""
    a, b, c = t.a, t.b, t.c
    return (a * a * (b + c) + b * b * (a + c) + c * c * (a + b))


def _require_spread(t: Triple) -> float:
    """Return P, raising if the triple is too close to a = b = c."""
    p = p_invariant(t)
    if p <= DISTINCT_TOL * t.scale ** 2:
        raise DegenerateTriple(f"P = {p:g} is not positive at tolerance")
    return p


def _require_distinct(t: Triple) -> None:
    gap = min(abs(t.a - t.b), abs(t.a - t.c), abs(t.b - t.c))
    if gap <= DISTINCT_TOL * t.scale:
        raise DegenerateTriple(f"pairwise gap {gap:g} below tolerance")


def gamma_sq(t: Triple) -> float:
    """(a-b)(a-c)(b-c)^2 / (4P): the squared commutator coefficient pair.

    Degree-2 homogeneous; vanishes (legitimately) when a = b or a = c.
    """
    p = _require_spread(t)
    return (t.a - t.b) * (t.a - t.c) * (t.b - t.c) ** 2 / (4.0 * p)


def f_prime_distinct(t: Triple) -> float:
    """The potential derivative forced on a distinct triple.

    f' = -(sym_cubic - 6abc) / (2 (m+1) P); degree-1 homogeneous in
    (a, b, c).  Zero exactly when the symmetric cubic equals 6abc, which is
    the content of the chain's conclusion.
    """
    p = _require_spread(t)
    return -(sym_cubic(t) - 6.0 * t.a * t.b * t.c) / (2.0 * (t.m + 1.0) * p)


_PAIRS = {"ab": (0, 1, 2), "ac": (0, 2, 1), "bc": (1, 2, 0)}


def pair_prime(t: Triple, which: str) -> float:
    """Closed form of Phi_ij = (zeta_i' - zeta_j')/(zeta_i - zeta_j).

    ``which`` picks the pair (i, j) from {"ab", "ac", "bc"}; the remaining
    index plays the role of k:

        Phi_ij = -(z_i + z_j) - z_k/(m+1)
                 - (z_i - z_k)(z_j - z_k)(z_i + z_j - 2 z_k) / (2 (m+1) P).
    """
    if which not in _PAIRS:
        raise ValueError(f"which must be one of {sorted(_PAIRS)}, got {which!r}")
    p = _require_spread(t)
    vals = (t.a, t.b, t.c)
    i, j, k = _PAIRS[which]
    zi, zj, zk = vals[i], vals[j], vals[k]
    m1 = t.m + 1.0
    return (-(zi + zj) - zk / m1
            - (zi - zk) * (zj - zk) * (zi + zj - 2.0 * zk) / (2.0 * m1 * p))


def _prop31_parts(t: Triple) -> tuple:
    """Both sides of the identity certified by :func:`prop31_residual`."""
    p = _require_spread(t)
    phi_ab = pair_prime(t, "ab")
    phi_ac = pair_prime(t, "ac")
    phi_bc = pair_prime(t, "bc")
    lhs = 4.0 * p * phi_ab - ((t.a - t.b) ** 2 * phi_ab
                              + (t.a - t.c) ** 2 * phi_ac
                              + (t.b - t.c) ** 2 * phi_bc)
    rhs = (2.0 * p * (t.c - t.a - t.b)
           - (t.m + 2.0) / (t.m + 1.0) * (sym_cubic(t) - 6.0 * t.a * t.b * t.c))
    return lhs, rhs


def prop31_residual(t: Triple) -> float:
    """Residual of the closed identity chain; identically zero.

    The left side assembles 4P Phi_ab minus the gap-weighted sum of all three
    Phi's; the right side is the same quantity expressed through the symmetric
    cubic.  Both are degree-3 homogeneous, and their difference vanishes for
    every pairwise-distinct triple, which is what certifies the derivation
    that ends in f' = 0.
    """
    _require_distinct(t)
    lhs, rhs = _prop31_parts(t)
    return lhs - rhs


def _alpha_parts(t: Triple) -> tuple:
    """Both sides of the squared-coefficient consistency identity."""
    p = _require_spread(t)
    _require_distinct(t)
    ab2 = (t.a - t.b) ** 2
    alpha = ab2 / (2.0 * math.sqrt(p))
    beta = (t.b - t.c) ** 2 / ab2 * alpha
    gamma = (t.a - t.c) ** 2 / ab2 * alpha
    lhs = (alpha - gamma + beta) ** 2
    rhs = ab2 * (t.b - t.c) ** 2 / p
    return lhs, rhs


def alpha_consistency(t: Triple) -> float:
    """(alpha - gamma + beta)^2 - (a-b)^2 (b-c)^2 / P; identically zero.

    alpha is fixed positive with alpha^2 = (a-b)^4 / (4P), and beta, gamma
    carry the squared-gap ratios (b-c)^2/(a-b)^2 and (a-c)^2/(a-b)^2.  The
    cleared numerator is the degree-4 polynomial identity
    ((a-b)^2 - (a-c)^2 + (b-c)^2)^2 = 4 (a-b)^2 (b-c)^2.
    """
    lhs, rhs = _alpha_parts(t)
    return lhs - rhs


def zero_fprime_c(a: float, b: float) -> tuple:
    """Real values of c making the symmetric cubic equal 6abc exactly.

    Solving sym_cubic = 6abc for c given (a, b) is the quadratic
    (a+b) c^2 + (a^2 + b^2 - 6ab) c + ab(a+b) = 0.  Returns the real roots
    in ascending order (one root when the leading coefficient vanishes);
    raises :class:`DegenerateTriple` when no real solution exists.  Opposite
    signs of a and b guarantee a non-negative discriminant.
    """
    q2 = a + b
    q1 = a * a + b * b - 6.0 * a * b
    q0 = a * b * (a + b)
    scale = 1.0 + max(abs(a), abs(b))
    if abs(q2) <= 1e-14 * scale:
        if abs(q1) <= 1e-14 * scale ** 2:
            raise DegenerateTriple("coefficients vanish; every c is a root")
        roots = [-q0 / q1]
    else:
        disc = q1 * q1 - 4.0 * q2 * q0
        if disc < 0.0:
            raise DegenerateTriple(f"no real c for a = {a:g}, b = {b:g}")
        sq = math.sqrt(disc)
        qq = -0.5 * (q1 + math.copysign(sq, q1))
        if abs(qq) <= 1e-300:
            roots = [0.0, 0.0]
        else:
            roots = [qq / q2, q0 / qq]
    polished = []
    for c in roots:
        # One Newton step keeps the cubic residual at rounding level even
        # when the quadratic coefficients are large.
        slope = 2.0 * q2 * c + q1
        if abs(slope) > 1e-14:
            c = c - (q2 * c * c + q1 * c + q0) / slope
        polished.append(c)
    return tuple(sorted(polished))


def sweep_report(m_values=SWEEP_M_VALUES, count: int = 1000, seed: int = 42,
                 tol: float = 1e-10) -> list:
    """Seeded random sweeps of the identity residuals, as check dicts.

    Draws ``count`` triples uniformly from [-3, 3]^3 and evaluates
    ``prop31_residual`` and ``alpha_consistency`` under every weight in
    ``m_values``; both are reported in scaled units, residual divided by
    (1 + the largest participating magnitude).  A third check constructs
    triples with the symmetric cubic equal to 6abc (via :func:`zero_fprime_c`
    on opposite-sign pairs) and requires ``f_prime_distinct`` at them to stay
    below ``tol`` absolutely.  Triples too close to degenerate are skipped
    and counted.
    """
    rng = np.random.default_rng(seed)
    raw = rng.uniform(-3.0, 3.0, size=(count, 3))

    max_prop31 = 0.0
    max_alpha = 0.0
    used = 0
    skipped = 0
    for row in raw:
        for m in m_values:
            t = Triple(row[0], row[1], row[2], m)
            try:
                lhs, rhs = _prop31_parts(t)
                scale = 1.0 + max(abs(lhs), abs(rhs))
                max_prop31 = max(max_prop31, abs(lhs - rhs) / scale)
                lhs, rhs = _alpha_parts(t)
                scale = 1.0 + max(abs(lhs), abs(rhs))
                max_alpha = max(max_alpha, abs(lhs - rhs) / scale)
            except DegenerateTriple:
                skipped += 1
                continue
            used += 1

    pairs = np.column_stack([rng.uniform(0.2, 3.0, size=count),
                             -rng.uniform(0.2, 3.0, size=count)])
    max_fp = 0.0
    fp_used = 0
    fp_skipped = 0
    for a, b in pairs:
        try:
            cs = zero_fprime_c(a, b)
        except DegenerateTriple:
            fp_skipped += 1
            continue
        for c in cs:
            for m in m_values:
                t = Triple(a, b, c, m)
                try:
                    max_fp = max(max_fp, abs(f_prime_distinct(t)))
                except DegenerateTriple:
                    fp_skipped += 1
                    continue
                fp_used += 1

    def check(name, value, samples, skipped_n):
        return {"name": name, "max_residual": value, "tolerance": tol,
                "pass": bool(value <= tol), "samples": samples,
                "skipped": skipped_n}

    return [check("prop31_identity", max_prop31, used, skipped),
            check("alpha_consistency", max_alpha, used, skipped),
            check("zero_fprime_corollary", max_fp, fp_used, fp_skipped)]
