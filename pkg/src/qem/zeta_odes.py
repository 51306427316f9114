"""Reduced ODE systems for the level-hypersurface principal curvatures.

For the warped normal form g = ds^2 + p^2 dt^2 + h^2 g~ (g~ of constant
curvature k) the quantities zeta2 = p'/p and zeta3 = h'/h close into a
first-order system once the fiber term X = -k/h^2 is expressed
algebraically in (zeta2, zeta3); Q is the denominator of that inversion.
This module implements the system right-hand side, the branch classifier
for the loci where the obstruction vanishes, closed-form branch solutions,
a fixed-step 4th-order integrator with event terminations, and the
reconstruction of a warped metric (with its potential) from a trajectory.

The single-zeta system of the locally conformally flat case and its
closed-form profiles live here as well (`lcf_*`).

Conventions: primes are d/ds; all functions are pure; formulas accept
either floats or 2-variable jets in (zeta2, zeta3), which is how the
analytic chain-rule derivatives R' and f'' are produced.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .catalog import Box, ConstCurvChart
from .errors import (
    DomainError,
    EmptyDomain,
    InconsistentK,
    QSingular,
    ZeroDenominator,
)
from .expressions import Const, Coord, HermiteQuintic, Interp, exp as exp_expr
from .jets import Jet, jet_space
from .qe_residual import QEParams
from .tensor_core import Chart, MetricField, ScalarField

Q_MIN = 1e-8
BLOWUP_LIMIT = 1e8
ZETA2_FLOOR = 1e-8

CSV_COLUMNS = (
    "s",
    "zeta2",
    "zeta3",
    "X",
    "p",
    "h",
    "f",
    "k",
    "Q",
    "branch1",
    "branch2",
    "branch3",
    "branch4",
)


def _val(x) -> float:
    return float(x.value) if isinstance(x, Jet) else float(x)


def Q(zeta2, zeta3, params: QEParams):
    """Denominator of the algebraic inversion for X."""
    m, rho = params.m, params.rho
    return zeta3 * ((m - 1.0) * (4.0 * rho - 1.0)) + zeta2 * params.lambda_denom


def _q_checked(zeta2, zeta3, params, q_min):
    q = Q(zeta2, zeta3, params)
    if abs(_val(q)) <= q_min:
        raise QSingular(f"Q = {_val(q):.3e} within {q_min:g} of zero")
    return q


def X_of(zeta2, zeta3, params: QEParams, q_min: float = Q_MIN):
    """Fiber term X = -k/h^2 as an algebraic function of (zeta2, zeta3)."""
    m, rho, lam = params.m, params.rho, params.lam
    q = _q_checked(zeta2, zeta3, params, q_min)
    bracket = (
        zeta3 * zeta3 * ((m - 1.0) * (1.0 - 4.0 * rho))
        - lam * (m + 1.0)
        + 2.0 * zeta2 * zeta3 * (4.0 * rho - 1.0 + m * (5.0 * rho - 1.0))
    )
    return (zeta3 - zeta2) * bracket / q


def zeta_rhs(zeta2, zeta3, params: QEParams, q_min: float = Q_MIN):
    """(zeta2', zeta3') of the reduced flow."""
    m, rho, lam = params.m, params.rho, params.lam
    q = _q_checked(zeta2, zeta3, params, q_min)
    z2p = (
        zeta3 * (lam * (m - 1.0))
        + zeta2 * zeta2 * zeta3 * (1.0 - 2.0 * (m + 2.0) * rho)
        + zeta2 ** 3 * (1.0 - 4.0 * rho + m * (1.0 - 2.0 * rho))
        + zeta2 * (lam - 2.0 * zeta3 * zeta3 * ((m - 1.0) * (4.0 * rho - 1.0)))
    ) / q
    z3p = (
        zeta3
        * (
            lam * m
            - zeta3 * zeta3 * ((m - 1.0) * (4.0 * rho - 1.0))
            - zeta2 * zeta2 * (1.0 + m - 4.0 * rho - 2.0 * m * rho)
            - zeta2 * zeta3 * (8.0 * rho - 2.0 + m * (10.0 * rho - 3.0))
        )
        / q
    )
    return z2p, z3p


def scalar_curvature(zeta2, zeta3, params: QEParams, q_min: float = Q_MIN):
    """R from the curvature block, with primes substituted from zeta_rhs."""
    z2p, z3p = zeta_rhs(zeta2, zeta3, params, q_min)
    x = X_of(zeta2, zeta3, params, q_min)
    return (
        -2.0 * z2p
        - 4.0 * z3p
        - 2.0 * zeta2 * zeta2
        - 6.0 * zeta3 * zeta3
        - 4.0 * zeta2 * zeta3
        - 2.0 * x
    )


_FLOW_SPACE = jet_space(2)


def _flow_derivative(fun, zeta2: float, zeta3: float, params, q_min) -> float:
    """d/ds of fun(zeta2, zeta3, params) along the reduced flow."""
    z2j, z3j = Jet.seed_point(_FLOW_SPACE, (zeta2, zeta3))
    fj = fun(z2j, z3j, params, q_min)
    z2p, z3p = zeta_rhs(zeta2, zeta3, params, q_min)
    grad = np.asarray(fj.grad)
    return float(grad @ np.array([z2p, z3p]))


def scalar_curvature_prime(
    zeta2: float, zeta3: float, params: QEParams, q_min: float = Q_MIN
) -> float:
    """R' along the flow, by analytic chain rule (no finite differences)."""
    return _flow_derivative(scalar_curvature, zeta2, zeta3, params, q_min)


def f_prime_of(
    zeta2,
    zeta3,
    params: QEParams,
    q_min: float = Q_MIN,
    zeta2_floor: float = ZETA2_FLOOR,
):
    """|grad f| from the shape-operator equation; denominator zeta2.

    Cross-identity: equals (R_33 - R_22)/(zeta2 - zeta3) off the diagonal.
    """
    if abs(_val(zeta2)) <= zeta2_floor:
        raise ZeroDenominator(f"zeta2 = {_val(zeta2):.3e} too close to zero")
    z2p, _ = zeta_rhs(zeta2, zeta3, params, q_min)
    r = scalar_curvature(zeta2, zeta3, params, q_min)
    return (
        z2p + zeta2 * zeta2 + 2.0 * zeta2 * zeta3 + params.rho * r + params.lam
    ) / zeta2


def f_second_of(
    zeta2: float, zeta3: float, params: QEParams, q_min: float = Q_MIN
) -> float:
    """f'' along the flow, by analytic chain rule through f_prime_of."""

    def fun(a, b, p, qm):
        return f_prime_of(a, b, p, qm)

    return _flow_derivative(fun, zeta2, zeta3, params, q_min)


# ---------------------------------------------------------------------------
# branch classification
# ---------------------------------------------------------------------------
BRANCH_LABELS = ("zeta3_zero", "product_locus", "quadratic_locus", "q_zero")


@dataclass(frozen=True)
class BranchTag:
    """Evaluated vanishing loci; several flags may hold at once."""

    values: tuple
    flags: tuple

    @property
    def generic(self) -> bool:
        return not any(self.flags)

    def labels(self) -> tuple:
        return tuple(l for l, f in zip(BRANCH_LABELS, self.flags) if f)


def branch_classify(
    zeta2: float, zeta3: float, params: QEParams, tol: float = 1e-10
) -> BranchTag:
    """Classify a phase point against the four vanishing loci.

    Each condition is reported as its signed value and flagged when
    |value| <= tol * (1 + largest additive term).
    """
    m, rho, lam = params.m, params.rho, params.lam
    d = params.lambda_denom
    conditions = (
        (zeta3,),
        (3.0 * (4.0 * rho - 1.0) * zeta2 * zeta3, -lam),
        (
            lam * (m - 1.0) * (3.0 * rho - 1.0),
            zeta2 * zeta3 * (m - 1.0) * (4.0 * rho - 1.0),
            zeta2 * zeta2 * (9.0 * rho - 2.0) * d,
        ),
        (zeta3 * (m - 1.0) * (4.0 * rho - 1.0), zeta2 * d),
    )
    values, flags = [], []
    for terms in conditions:
        v = math.fsum(terms)
        scale = 1.0 + max(abs(t) for t in terms)
        values.append(v)
        flags.append(abs(v) <= tol * scale)
    return BranchTag(values=tuple(values), flags=tuple(flags))


def harmonic_branch_check(
    zeta2: float, zeta3: float, params: QEParams, q_min: float = Q_MIN
) -> float:
    """The factored compatibility obstruction of the reduced flow.

    Equals d/ds[X_of] + 2*zeta3*X_of along the flow (same sign); a phase
    point can belong to an actual metric only where this vanishes, which
    happens exactly on the four classified loci.
    """
    m, rho, lam = params.m, params.rho, params.lam
    q = _q_checked(zeta2, zeta3, params, q_min)
    c2 = 3.0 * (4.0 * rho - 1.0) * zeta2 * zeta3 - lam
    c3 = (
        lam * (m - 1.0) * (3.0 * rho - 1.0)
        + zeta2 * zeta3 * (m - 1.0) * (4.0 * rho - 1.0)
        + zeta2 * zeta2 * (9.0 * rho - 2.0) * params.lambda_denom
    )
    return 2.0 * (zeta2 - zeta3) * zeta3 * m * (m + 1.0) * c2 * c3 / q ** 3


# ---------------------------------------------------------------------------
# integration
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class ZetaState:
    s: float
    zeta2: float
    zeta3: float
    log_p: float = 0.0
    log_h: float = 0.0
    f: float = 0.0


class _Stop(Exception):
    def __init__(self, cause: str):
        self.cause = cause


@dataclass
class ZetaTrajectory:
    """Uniform-step trajectory of the reduced flow with accumulated logs."""

    params: QEParams
    s: np.ndarray
    zeta2: np.ndarray
    zeta3: np.ndarray
    log_p: np.ndarray
    log_h: np.ndarray
    f: np.ndarray
    termination: str  # reached_end | Q_singular | blowup | branch_locus

    @property
    def n(self) -> int:
        return len(self.s)

    def state(self, i: int) -> ZetaState:
        return ZetaState(
            s=float(self.s[i]),
            zeta2=float(self.zeta2[i]),
            zeta3=float(self.zeta3[i]),
            log_p=float(self.log_p[i]),
            log_h=float(self.log_h[i]),
            f=float(self.f[i]),
        )

    @property
    def p(self) -> np.ndarray:
        return np.exp(self.log_p)

    @property
    def h(self) -> np.ndarray:
        return np.exp(self.log_h)

    @property
    def q_values(self) -> np.ndarray:
        return np.array([Q(a, b, self.params) for a, b in zip(self.zeta2, self.zeta3)])

    @property
    def X(self) -> np.ndarray:
        return np.array(
            [X_of(a, b, self.params) for a, b in zip(self.zeta2, self.zeta3)]
        )

    @property
    def k_nodes(self) -> np.ndarray:
        """Nodewise fiber curvature k = -X h^2 (constant on exact solutions)."""
        return -self.X * self.h ** 2

    @property
    def k(self) -> float:
        return float(np.mean(self.k_nodes))

    def branch_flags(self, tol: float = 1e-10) -> np.ndarray:
        return np.array(
            [
                branch_classify(a, b, self.params, tol).flags
                for a, b in zip(self.zeta2, self.zeta3)
            ],
            dtype=bool,
        )


def integrate(
    initial: ZetaState,
    s_end: float,
    step: float,
    params: QEParams,
    q_min: float = Q_MIN,
    blowup: float = BLOWUP_LIMIT,
    zeta2_floor: float = ZETA2_FLOOR,
) -> ZetaTrajectory:
    """Classical fixed-step 4th-order integration of the reduced flow.

    State vector (zeta2, zeta3, log p, log h, f) with derivatives
    (zeta2', zeta3', zeta2, zeta3, f'). Terminates at s_end or at the
    first singular/blowup event; the event is recorded as the trajectory's
    termination cause, never raised.
    """
    if step <= 0.0:
        raise ValueError("step must be positive")

    def deriv(y):
        z2, z3 = y[0], y[1]
        if abs(Q(z2, z3, params)) <= q_min:
            raise _Stop("Q_singular")
        if abs(z2) <= zeta2_floor:
            raise _Stop("branch_locus")
        z2p, z3p = zeta_rhs(z2, z3, params, q_min)
        fp = f_prime_of(z2, z3, params, q_min, zeta2_floor)
        return np.array([z2p, z3p, z2, z3, fp])

    y = np.array(
        [initial.zeta2, initial.zeta3, initial.log_p, initial.log_h, initial.f]
    )
    rows = [(initial.s, y.copy())]
    termination = "reached_end"
    span = s_end - initial.s
    if abs(Q(initial.zeta2, initial.zeta3, params)) <= q_min:
        termination = "Q_singular"
    elif span != 0.0:
        n_steps = max(1, round(abs(span) / step))
        hstep = span / n_steps
        for i in range(n_steps):
            try:
                k1 = deriv(y)
                k2 = deriv(y + 0.5 * hstep * k1)
                k3 = deriv(y + 0.5 * hstep * k2)
                k4 = deriv(y + hstep * k3)
            except _Stop as stop:
                termination = stop.cause
                break
            y_next = y + (hstep / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if not np.all(np.isfinite(y_next)) or np.max(np.abs(y_next)) > blowup:
                termination = "blowup"
                break
            if abs(Q(y_next[0], y_next[1], params)) <= q_min:
                termination = "Q_singular"
                break
            if abs(y_next[0]) <= zeta2_floor:
                termination = "branch_locus"
                break
            y = y_next
            rows.append((initial.s + (i + 1) * hstep, y.copy()))

    arr = np.array([r[1] for r in rows])
    return ZetaTrajectory(
        params=params,
        s=np.array([r[0] for r in rows]),
        zeta2=arr[:, 0],
        zeta3=arr[:, 1],
        log_p=arr[:, 2],
        log_h=arr[:, 3],
        f=arr[:, 4],
        termination=termination,
    )


# ---------------------------------------------------------------------------
# closed forms and matching
# ---------------------------------------------------------------------------
def closed_form_zeta2(case: str, Lambda: float, s: float) -> float:
    """zeta2 of the three h-const branches: sqrt(L)cot, sqrt(-L)tanh/coth."""
    if case == "cot":
        if Lambda <= 0.0:
            raise DomainError("cot case needs Lambda > 0")
        a = math.sqrt(Lambda)
        den = math.sin(a * s)
        if abs(den) < 1e-12:
            raise DomainError(f"cot pole at s = {s!r}")
        return a * math.cos(a * s) / den
    if case == "tanh":
        if Lambda >= 0.0:
            raise DomainError("tanh case needs Lambda < 0")
        a = math.sqrt(-Lambda)
        return a * math.tanh(a * s)
    if case == "coth":
        if Lambda >= 0.0:
            raise DomainError("coth case needs Lambda < 0")
        a = math.sqrt(-Lambda)
        den = math.sinh(a * s)
        if abs(den) < 1e-12:
            raise DomainError(f"coth pole at s = {s!r}")
        return a * math.cosh(a * s) / den
    raise ValueError(f"unknown case {case!r}")


def closed_form_match(
    trajectory: ZetaTrajectory, case: str, tol: float = 1e-6
) -> dict:
    """Fit the phase from the first node, compare zeta2 along the trajectory.

    Returns {case, Lambda, phase, max_mismatch, tolerance, pass, samples}.
    """
    params = trajectory.params
    big_l = params.Lambda
    if big_l is None:
        raise DomainError("Lambda undefined for these parameters")
    z0 = float(trajectory.zeta2[0])
    s0 = float(trajectory.s[0])
    if case == "cot":
        if big_l <= 0.0:
            raise DomainError("cot case needs Lambda > 0")
        a = math.sqrt(big_l)
        phase = math.atan2(1.0, z0 / a) / a  # arccot into (0, pi)/a
    elif case == "tanh":
        if big_l >= 0.0:
            raise DomainError("tanh case needs Lambda < 0")
        a = math.sqrt(-big_l)
        u = z0 / a
        if abs(u) >= 1.0:
            raise DomainError(f"initial zeta2 outside tanh range: {u!r}")
        phase = math.atanh(u) / a
    elif case == "coth":
        if big_l >= 0.0:
            raise DomainError("coth case needs Lambda < 0")
        a = math.sqrt(-big_l)
        u = z0 / a
        if abs(u) <= 1.0:
            raise DomainError(f"initial zeta2 inside coth gap: {u!r}")
        phase = math.atanh(1.0 / u) / a
    else:
        raise ValueError(f"unknown case {case!r}")
    pred = np.array(
        [
            closed_form_zeta2(case, big_l, phase + (float(s) - s0))
            for s in trajectory.s
        ]
    )
    mism = float(np.max(np.abs(trajectory.zeta2 - pred)))
    return {
        "case": case,
        "Lambda": big_l,
        "phase": phase,
        "max_mismatch": mism,
        "tolerance": tol,
        "pass": bool(mism <= tol),
        "samples": trajectory.n,
    }


# ---------------------------------------------------------------------------
# reconstruction
# ---------------------------------------------------------------------------
def reconstruct_warped(trajectory: ZetaTrajectory, k_tol: float = 1e-6):
    """Realize a trajectory as (metric, potential f, fiber curvature k).

    p, h, f come from quintic interpolation of the accumulated logs with
    exact nodal first/second derivatives; k = -X h^2 is averaged over nodes
    and must be constant to k_tol relative, else InconsistentK.
    """
    if trajectory.n < 2:
        raise EmptyDomain("need at least two trajectory nodes to reconstruct")
    if trajectory.termination != "reached_end":
        raise DomainError(
            f"trajectory terminated by {trajectory.termination}; "
            "reconstruct only complete ranges"
        )
    params = trajectory.params
    sl = slice(None, None, -1) if trajectory.s[-1] < trajectory.s[0] else slice(None)
    s = np.asarray(trajectory.s, dtype=float)[sl]
    z2 = np.asarray(trajectory.zeta2, dtype=float)[sl]
    z3 = np.asarray(trajectory.zeta3, dtype=float)[sl]
    lp = np.asarray(trajectory.log_p, dtype=float)[sl]
    lh = np.asarray(trajectory.log_h, dtype=float)[sl]
    fv = np.asarray(trajectory.f, dtype=float)[sl]

    z2p = np.empty_like(z2)
    z3p = np.empty_like(z3)
    fp = np.empty_like(z2)
    fpp = np.empty_like(z2)
    xs = np.empty_like(z2)
    for i, (a, b) in enumerate(zip(z2, z3)):
        z2p[i], z3p[i] = zeta_rhs(a, b, params)
        fp[i] = f_prime_of(a, b, params)
        fpp[i] = f_second_of(a, b, params)
        xs[i] = X_of(a, b, params)

    h_sq = np.exp(2.0 * lh)
    k_nodes = -xs * h_sq
    k_bar = float(np.mean(k_nodes))
    spread = float(np.max(np.abs(k_nodes - k_bar)))
    if spread > k_tol * (1.0 + abs(k_bar)):
        raise InconsistentK(
            f"nodewise fiber curvature varies by {spread:.3e} "
            f"(mean {k_bar:.6g}); trajectory is not a warped-product solution"
        )

    sp_lp = HermiteQuintic(s, lp, z2, z2p)
    sp_lh = HermiteQuintic(s, lh, z3, z3p)
    sp_f = HermiteQuintic(s, fv, fp, fpp)

    chart = Chart(4, ("s", "t", "x3", "x4"))
    fiber = ConstCurvChart(k_bar)
    fr = fiber.radial_range()
    box = Box(
        (float(s[0]), 0.0, fr[0], 0.0),
        (float(s[-1]), 2.0 * math.pi, fr[1], 2.0 * math.pi),
    )
    h_sq_expr = exp_expr(2.0 * Interp(sp_lh, var=0))
    metric = MetricField.diagonal(
        chart,
        [
            Const(1.0),
            exp_expr(2.0 * Interp(sp_lp, var=0)),
            h_sq_expr,
            h_sq_expr * fiber.sn(Coord(2)) ** 2,
        ],
        guard=box.contains,
    )
    f_field = ScalarField(chart, Interp(sp_f, var=0), role="f")
    return metric, f_field, k_bar


# ---------------------------------------------------------------------------
# single-zeta (conformally flat) system
# ---------------------------------------------------------------------------
def lcf_residuals(
    zeta,
    zeta_prime,
    X,
    f_prime,
    f_second,
    R,
    R_prime,
    params: QEParams,
    zeta_second: Optional[float] = None,
):
    """Left-minus-right of the four single-zeta equations.

    The fourth residual needs zeta''; omit it to get None in that slot.
    """
    m, rho, lam = params.m, params.rho, params.lam
    rr = rho * R + lam
    if abs(f_prime) <= 1e-12:
        if abs(R_prime) > 1e-12:
            raise ZeroDenominator("f' = 0 while R' != 0")
        curvature_term = 0.0
    else:
        curvature_term = m * R_prime / f_prime * (1.0 / 6.0 - rho)
    r1 = (m + 1.0) * zeta_prime + (m + 3.0) * zeta ** 2 + 2.0 * X + rr + curvature_term
    r2 = zeta_prime + 3.0 * zeta ** 2 + 2.0 * X + rr - f_prime * zeta
    r3 = -3.0 * zeta_prime - 3.0 * zeta ** 2 + f_second - f_prime ** 2 / m - rr
    r4 = None
    if zeta_second is not None:
        r4 = -zeta_second - (4.0 * zeta * zeta_prime - 2.0 * zeta * X + R_prime / 6.0)
    return (r1, r2, r3, r4)


def lcf_closed_profile(case: str, kappa: float, m: float, rho: float, s: float) -> dict:
    """Pointwise data of the three closed-form conformally flat profiles.

    All satisfy zeta' = X = -(zeta^2 + kappa), R = 12 kappa (so R' = 0),
    lambda = kappa (m + 3 - 12 rho), f' = m kappa / zeta.
    """
    params = QEParams(m, rho, kappa * (m + 3.0 - 12.0 * rho))
    if case == "sin":
        if kappa <= 0.0:
            raise DomainError("sin case needs kappa > 0")
        a = math.sqrt(kappa)
        den = math.sin(a * s)
        if abs(den) < 1e-12:
            raise DomainError(f"cone pole at s = {s!r}")
        zeta = a * math.cos(a * s) / den
    elif case == "cosh":
        if kappa >= 0.0:
            raise DomainError("cosh case needs kappa < 0")
        a = math.sqrt(-kappa)
        zeta = a * math.tanh(a * s)
    elif case == "sinh":
        if kappa >= 0.0:
            raise DomainError("sinh case needs kappa < 0")
        a = math.sqrt(-kappa)
        den = math.sinh(a * s)
        if abs(den) < 1e-12:
            raise DomainError(f"cone pole at s = {s!r}")
        zeta = a * math.cosh(a * s) / den
    else:
        raise ValueError(f"unknown case {case!r}")
    zeta_prime = -(zeta * zeta + kappa)
    if abs(zeta) <= 1e-12:
        raise ZeroDenominator("zeta = 0: f' undefined at the equator point")
    f_prime = m * kappa / zeta
    return {
        "zeta": zeta,
        "zeta_prime": zeta_prime,
        "zeta_second": -2.0 * zeta * zeta_prime,
        "X": zeta_prime,
        "f_prime": f_prime,
        "f_second": -m * kappa * zeta_prime / (zeta * zeta),
        "R": 12.0 * kappa,
        "R_prime": 0.0,
        "lam": params.lam,
        "params": params,
    }


# ---------------------------------------------------------------------------
# along-trajectory identities
# ---------------------------------------------------------------------------
def system_residuals(
    zeta2: float, zeta3: float, params: QEParams, q_min: float = Q_MIN
) -> dict:
    """The three first-order identities the reduced flow must satisfy.

    These hold identically (to roundoff) at every phase point, being the
    defining system the algebraic inversion came from.
    """
    m, rho, lam = params.m, params.rho, params.lam
    z2p, z3p = zeta_rhs(zeta2, zeta3, params, q_min)
    x = X_of(zeta2, zeta3, params, q_min)
    r1ii1 = (
        (m + 1.0) * z2p
        + (m + 1.0) * zeta2 ** 2
        - (m + 1.0) * z3p
        - (m + 2.0) * zeta3 ** 2
        + zeta2 * zeta3
        - x
    )
    riccicurv = (zeta2 - zeta3) * (
        rho
        * (
            2.0 * zeta2 ** 2
            + 4.0 * zeta2 * zeta3
            + 6.0 * zeta3 ** 2
            + 2.0 * x
            + 2.0 * z2p
            + 4.0 * z3p
        )
        - lam
    ) - (zeta2 * x + zeta2 * z3p - z2p * zeta3)
    lastone = (
        (2.0 * m + 1.0) * z2p * zeta3
        - (m + 2.0) * zeta2 * z3p
        - (m - 1.0) * zeta3 * (z3p - x)
        + 3.0 * (m + 1.0) * zeta2 * zeta3 * (zeta2 - zeta3)
    )
    return {"r1ii1": r1ii1, "riccicurv": riccicurv, "lastone": lastone}


def double_prime_residuals(trajectory: ZetaTrajectory, q_min: float = Q_MIN) -> dict:
    """Second-order identities, with zeta'' finite-differenced along the
    trajectory (same step) and R' analytic.

    Meaningful on trajectories lying on a compatibility locus (where
    harmonic_branch_check vanishes); off the loci the underlying equations
    have no metric realization and these relations genuinely fail.
    """
    n = trajectory.n
    if n < 3:
        raise DomainError("need at least three nodes for the centered stencil")
    s = trajectory.s
    hstep = float(s[1] - s[0])
    params = trajectory.params
    z2 = trajectory.zeta2
    z3 = trajectory.zeta3
    z2p = np.empty(n)
    z3p = np.empty(n)
    for i in range(n):
        z2p[i], z3p[i] = zeta_rhs(z2[i], z3[i], params, q_min)
    res2, res3 = [], []
    for i in range(1, n - 1):
        z2pp = (z2p[i + 1] - z2p[i - 1]) / (2.0 * hstep)
        z3pp = (z3p[i + 1] - z3p[i - 1]) / (2.0 * hstep)
        rp = scalar_curvature_prime(z2[i], z3[i], params, q_min)
        x = X_of(z2[i], z3[i], params, q_min)
        res2.append(
            -z2pp
            - (
                2.0 * z2p[i] * z2[i]
                + 2.0 * z2p[i] * z3[i]
                + 2.0 * z2[i] ** 2 * z3[i]
                - 2.0 * z2[i] * z3[i] ** 2
                + rp / 6.0
            )
        )
        res3.append(
            -z3pp
            - (
                3.0 * z3p[i] * z3[i]
                + z2[i] * z3p[i]
                + z2[i] * z3[i] ** 2
                - z2[i] ** 2 * z3[i]
                - z3[i] * x
                + rp / 6.0
            )
        )
    return {
        "double2": float(np.max(np.abs(res2))),
        "double3": float(np.max(np.abs(res3))),
        "stencil_nodes": n - 2,
    }


def trajectory_to_csv(trajectory: ZetaTrajectory, dest, branch_tol: float = 1e-10):
    """Write the trajectory as CSV (fixed column set, see CSV_COLUMNS)."""
    own = isinstance(dest, (str, bytes))
    fh = open(dest, "w", newline="") if own else dest
    try:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        xs = trajectory.X
        ps = trajectory.p
        hs = trajectory.h
        ks = trajectory.k_nodes
        qs = trajectory.q_values
        flags = trajectory.branch_flags(branch_tol)
        for i in range(trajectory.n):
            writer.writerow(
                [
                    repr(float(v))
                    for v in (
                        trajectory.s[i],
                        trajectory.zeta2[i],
                        trajectory.zeta3[i],
                        xs[i],
                        ps[i],
                        hs[i],
                        trajectory.f[i],
                        ks[i],
                        qs[i],
                    )
                ]
                + [int(b) for b in flags[i]]
            )
    finally:
        if own:
            fh.close()
