"""Residual tensors for the defining equations under verification.

Each operation takes a metric (plus potential/profile where relevant) and a
point, and returns the left-minus-right value of one equation:

* ``qe_residual``      —  Ric + Hess f - (1/m) df (x) df - (rho R + lambda) g
* ``codazzi`` sweep    —  harmonic-Weyl condition, via ResidualReport
* ``curvature_identity_residual`` — R(X, Y, grad f, Z) against the
  (rho - 1/(2n-2)) dR coupling plus the (1/m) df (x) Hess f exchange terms
* ``w_residual``       —  Hess w - (w/m)(Ric - lambda g)
* ``mu_value``         —  w Lap w + (m-1) |grad w|^2 + lambda w^2
* ``einstein_residual``—  Ric - c g

Residuals come back as full tensors so a caller can point at the failing
component; the report helpers reduce them to sup-norms with the shared
tolerance rule abs_tol + rel_tol * scale, scale = 1 + largest participating
magnitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConstraintViolation, ZeroGradient
from .jets import Jet, jet_einsum
from .tensor_core import (
    CurvatureBundle,
    MetricField,
    ScalarField,
    codazzi_residual,
    curvature_bundle,
)

_EXCLUDED_M = (0.0, 1.0, -1.0, -2.0)
_EXCLUDED_RHO = (0.25, 1.0 / 6.0)
_EXCLUSION_TOL = 1e-12


@dataclass(frozen=True)
class QEParams:
    """The triple (m, rho, lambda) of the quasi-Einstein equation.

    Structurally excluded values of m and rho are rejected at construction;
    ``Lambda`` is the derived constant -lambda / (4 rho - 1 + m(2 rho - 1))
    and is None when that denominator vanishes.
    """

    m: float
    rho: float
    lam: float

    def __post_init__(self):
        for bad in _EXCLUDED_M:
            if abs(self.m - bad) <= _EXCLUSION_TOL:
                raise ConstraintViolation(f"m = {bad:g} is excluded")
        for bad in _EXCLUDED_RHO:
            if abs(self.rho - bad) <= _EXCLUSION_TOL:
                raise ConstraintViolation(f"rho = {bad} is excluded")

    @property
    def lambda_denom(self) -> float:
        return 4.0 * self.rho - 1.0 + self.m * (2.0 * self.rho - 1.0)

    @property
    def Lambda(self):
        d = self.lambda_denom
        if abs(d) <= _EXCLUSION_TOL:
            return None
        return -self.lam / d


@dataclass
class ResidualReport:
    """Sup-norms of one residual over a point sample, with pass/fail."""

    name: str
    points: list
    sup_norms: list
    scales: list
    abs_tol: float = 1e-10
    rel_tol: float = 1e-9
    skipped: int = 0

    @property
    def global_max(self) -> float:
        return max(self.sup_norms, default=0.0)

    @property
    def tolerance(self) -> float:
        return self.abs_tol + self.rel_tol * max(self.scales, default=1.0)

    @property
    def passed(self) -> bool:
        point_ok = all(
            s <= self.abs_tol + self.rel_tol * sc
            for s, sc in zip(self.sup_norms, self.scales)
        )
        total = len(self.sup_norms) + self.skipped
        skip_ok = self.skipped <= 0.1 * total if total else False
        return point_ok and skip_ok and bool(self.sup_norms)


def _f_data(f: ScalarField, point, bundle: CurvatureBundle):
    """(df, Hess f) of a scalar at a point, reusing the bundle's Gamma."""
    fj = f.jet(point)
    df = np.array(fj.grad)
    hess = fj.hess() - np.einsum("kij,k->ij", bundle.gamma, df)
    return df, hess


def qe_residual(
    metric: MetricField,
    f: ScalarField,
    params: QEParams,
    point,
    bundle: CurvatureBundle = None,
) -> np.ndarray:
    """Ric + Hess f - (1/m) df (x) df - (rho R + lambda) g at ``point``."""
    b = bundle or curvature_bundle(metric, point)
    df, hess = _f_data(f, point, b)
    return (
        b.ric
        + hess
        - np.outer(df, df) / params.m
        - (params.rho * b.r + params.lam) * b.g
    )


def qe_residual_scaled(metric, f, params, point, bundle=None):
    """(residual, scale) pair for report assembly."""
    b = bundle or curvature_bundle(metric, point)
    df, hess = _f_data(f, point, b)
    parts = (
        b.ric,
        hess,
        np.outer(df, df) / params.m,
        (params.rho * b.r + params.lam) * b.g,
    )
    res = parts[0] + parts[1] - parts[2] - parts[3]
    scale = 1.0 + max(float(np.max(np.abs(p))) for p in parts)
    return res, scale


def codazzi_scaled(metric, point, bundle=None):
    b = bundle or curvature_bundle(metric, point)
    n = b.g.shape[0]
    grad_t = b.grad_ric - b.dr[:, None, None] * b.g[None, :, :] / (2 * n - 2)
    res = grad_t - grad_t.transpose(1, 0, 2)
    scale = 1.0 + float(np.max(np.abs(grad_t)))
    return res, scale


def harmonic_weyl_residual(
    metric: MetricField,
    sample_points,
    abs_tol: float = 1e-10,
    rel_tol: float = 1e-9,
) -> ResidualReport:
    """Sup-norm of the Codazzi residual of T = Ric - R/(2n-2) g over samples."""
    sups, scales, pts = [], [], []
    for p in sample_points:
        res, scale = codazzi_scaled(metric, p)
        pts.append(tuple(p))
        sups.append(float(np.max(np.abs(res))))
        scales.append(scale)
    return ResidualReport(
        name="harmonic_weyl",
        points=pts,
        sup_norms=sups,
        scales=scales,
        abs_tol=abs_tol,
        rel_tol=rel_tol,
    )


def curvature_identity_residual(
    metric: MetricField,
    f: ScalarField,
    params: QEParams,
    point,
    x: int,
    y: int,
    z: int,
    bundle: CurvatureBundle = None,
    grad_tol: float = 1e-12,
) -> float:
    """Residual of the curvature commutation identity

        R(e_x, e_y, grad f, e_z) = (rho - 1/(2n-2)) (e_x(R) g_yz - e_y(R) g_xz)
                                   - (1/m) df(e_x) Hess f(e_y, e_z)
                                   + (1/m) df(e_y) Hess f(e_x, e_z)

    in coordinate-frame indices.  Raises ZeroGradient at critical points of f.
    """
    b = bundle or curvature_bundle(metric, point)
    n = b.g.shape[0]
    df, hess = _f_data(f, point, b)
    grad_up = b.g_inv @ df
    if math.sqrt(max(float(df @ grad_up), 0.0)) <= grad_tol:
        raise ZeroGradient(f"|grad f| <= {grad_tol} at {tuple(point)}")
    lhs = float(b.rm[x, y, :, z] @ grad_up)
    coef = params.rho - 1.0 / (2 * n - 2)
    rhs = (
        coef * (b.dr[x] * b.g[y, z] - b.dr[y] * b.g[x, z])
        - df[x] * hess[y, z] / params.m
        + df[y] * hess[x, z] / params.m
    )
    return lhs - rhs


def w_residual(
    metric: MetricField,
    w: ScalarField,
    m: float,
    lam: float,
    point,
    bundle: CurvatureBundle = None,
) -> np.ndarray:
    """Hess w - (w/m)(Ric - lambda g) at ``point``."""
    b = bundle or curvature_bundle(metric, point)
    dw, hess = _f_data(w, point, b)
    wv = w.value(point)
    return hess - (wv / m) * (b.ric - lam * b.g)


def w_residual_scaled(metric, w, m, lam, point, bundle=None):
    b = bundle or curvature_bundle(metric, point)
    dw, hess = _f_data(w, point, b)
    wv = w.value(point)
    rhs = (wv / m) * (b.ric - lam * b.g)
    scale = 1.0 + max(float(np.max(np.abs(hess))), float(np.max(np.abs(rhs))))
    return hess - rhs, scale


def mu_value(
    metric: MetricField,
    w: ScalarField,
    m: float,
    lam: float,
    point,
    bundle: CurvatureBundle = None,
) -> float:
    """w Lap w + (m-1) |grad w|^2 + lambda w^2 (constant on valid profiles)."""
    b = bundle or curvature_bundle(metric, point)
    dw, hess = _f_data(w, point, b)
    wv = w.value(point)
    lap = float(np.einsum("ij,ij->", b.g_inv, hess))
    grad_sq = float(dw @ (b.g_inv @ dw))
    return wv * lap + (m - 1.0) * grad_sq + lam * wv * wv


def einstein_residual(
    metric: MetricField,
    einstein_constant: float,
    sample_points,
    abs_tol: float = 1e-10,
    rel_tol: float = 1e-9,
) -> ResidualReport:
    """Sup-norm of Ric - c g over samples."""
    sups, scales, pts = [], [], []
    for p in sample_points:
        b = curvature_bundle(metric, p)
        res = b.ric - einstein_constant * b.g
        scale = 1.0 + max(
            float(np.max(np.abs(b.ric))),
            abs(einstein_constant) * float(np.max(np.abs(b.g))),
        )
        pts.append(tuple(p))
        sups.append(float(np.max(np.abs(res))))
        scales.append(scale)
    return ResidualReport(
        name="einstein",
        points=pts,
        sup_norms=sups,
        scales=scales,
        abs_tol=abs_tol,
        rel_tol=rel_tol,
    )


# ---------------------------------------------------------------------------
# adapted-frame diagnostics (used by the invariant checks)
# ---------------------------------------------------------------------------
def shape_operator_diag(
    metric: MetricField,
    f: ScalarField,
    point,
    bundle: CurvatureBundle = None,
):
    """(zeta_a for each coordinate direction, |grad f|) at ``point``.

    zeta_a = <nabla_{E_a} E1, E_a> with E1 = grad f / |grad f| and E_a the
    normalized a-th coordinate direction; meaningful for metrics whose
    Ricci-adapted frame is coordinate-aligned (all catalog charts are).
    """
    b = bundle or curvature_bundle(metric, point)
    n = b.g.shape[0]
    fj = f.jet(point)
    df_j = Jet.stack([fj.deriv(a) for a in range(n)])  # covector jet, order 2
    up = jet_einsum("ab,b->a", b.g_inv_jet, df_j)
    norm_sq = jet_einsum("a,a->", df_j, up)
    if norm_sq.value <= 1e-24:
        raise ZeroGradient(f"|grad f| ~ 0 at {tuple(point)}")
    e = df_j * (norm_sq ** -0.5)  # unit covector jet
    de = np.array(e.grad)  # [b, a] = d_a e_b
    nabla_e = de.T - np.einsum("mab,m->ab", b.gamma, e.value)
    zetas = np.diag(nabla_e) / np.diag(b.g)
    return zetas, float(np.sqrt(norm_sq.value))


def r1ii1_residuals(
    metric: MetricField,
    f: ScalarField,
    params: QEParams,
    point,
    bundle: CurvatureBundle = None,
    f_prime_floor: float = 1e-6,
):
    """Residuals of R_1ii1 = (R'/f')(1/(2n-2) - rho) - (1/m)(R_ii - rho R - lam)
    for each tangential direction i, or None when |f'| is below the floor
    (the caller counts such skips)."""
    b = bundle or curvature_bundle(metric, point)
    n = b.g.shape[0]
    fj = f.jet(point)
    df = np.array(fj.grad)
    grad_up = b.g_inv @ df
    f_prime = math.sqrt(max(float(df @ grad_up), 0.0))
    if f_prime <= f_prime_floor:
        return None
    e1 = grad_up / f_prime
    r_prime = float(b.dr @ e1)
    out = []
    for i in range(n):
        gii = b.g[i, i]
        # skip the direction parallel to E1 (catalog charts: coordinate 0)
        ei_dot_e1 = abs(float(b.g[i] @ e1)) / math.sqrt(gii)
        if ei_dot_e1 > 1e-6:
            continue
        r_1ii1 = float(e1 @ b.rm[:, i, i, :] @ e1) / gii
        r_ii = b.ric[i, i] / gii
        rhs = (r_prime / f_prime) * (1.0 / (2 * n - 2) - params.rho) - (
            r_ii - params.rho * b.r - params.lam
        ) / params.m
        out.append(r_1ii1 - rhs)
    return out
