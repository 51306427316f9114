"""Pointwise tensor calculus for metrics with closed-form components.

Everything here is driven by order-3 jet arithmetic (:mod:`qem.jets`): the
metric components are evaluated as degree-3 Taylor expansions at the request
point, and curvature follows by exact coefficient manipulation.  The validity
ladder is

    g (order 3) -> Gamma (order 2) -> Rm, Ric, R (order 1)
      -> grad Ric, dR (exact values),

which is precisely enough for the Codazzi residual (third metric derivatives)
without any finite differencing.

Index and sign conventions
--------------------------
``R^l_{ijk} = d_i Gamma^l_{jk} - d_j Gamma^l_{ik} + Gamma^l_{im}Gamma^m_{jk}
- Gamma^l_{jm}Gamma^m_{ik}`` and ``R_{ijkl} = g_{lm} R^m_{ijk}``; with this
choice the unit round 2-sphere has ``R_{stts} = sin^2 s`` and sectional
curvature +1, and a constant-curvature-K metric satisfies
``R_{abcd} = K (g_{ad} g_{bc} - g_{ac} g_{bd})``.  ``Ric_{jl} = g^{ad}
R_{ajld}`` and for the unit 2-sphere equals ``g``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DegenerateMetric, DomainError
from .expressions import Const, Expr
from .jets import Jet, jet_einsum, jet_matrix_inverse, jet_space


@dataclass(frozen=True)
class Chart:
    """A coordinate chart: a dimension and coordinate labels."""

    dim: int
    coord_names: tuple = ()

    def __post_init__(self):
        if not 2 <= self.dim <= 6:
            raise ValueError(f"chart dimension must be in 2..6, got {self.dim}")
        names = self.coord_names or tuple(f"x{i}" for i in range(self.dim))
        if len(names) != self.dim:
            raise ValueError("need one coordinate name per dimension")
        if len(set(names)) != self.dim:
            raise ValueError("coordinate names must be unique")
        object.__setattr__(self, "coord_names", tuple(names))


class MetricField:
    """A symmetric matrix of :class:`Expr` components plus a domain guard.

    The guard is part of the metric's identity: points outside it raise
    :class:`DomainError` from every evaluation entry point, so singular loci
    are encoded once rather than policed by each caller.
    """

    def __init__(
        self,
        chart: Chart,
        components: Sequence[Sequence[Expr]],
        guard: Optional[Callable[[Sequence[float]], bool]] = None,
    ):
        n = chart.dim
        if len(components) != n or any(len(row) != n for row in components):
            raise ValueError("components must be an n-by-n array of Expr")
        self.chart = chart
        self.components = [[components[i][j] for j in range(n)] for i in range(n)]
        self.guard = guard

    @classmethod
    def diagonal(cls, chart: Chart, diag: Sequence[Expr], guard=None) -> "MetricField":
        n = chart.dim
        comps = [
            [diag[i] if i == j else Const(0.0) for j in range(n)] for i in range(n)
        ]
        return cls(chart, comps, guard)

    def admissible(self, point) -> bool:
        return self.guard is None or bool(self.guard(point))

    def check_point(self, point) -> None:
        if len(point) != self.chart.dim:
            raise DomainError(
                f"point has {len(point)} coordinates, chart needs {self.chart.dim}"
            )
        if not self.admissible(point):
            raise DomainError(f"point {tuple(point)} fails the regularity guard")


@dataclass
class ScalarField:
    """A scalar function on a chart; ``role`` records its intended meaning
    (potential ``f`` or profile ``w``)."""

    chart: Chart
    expr: Expr
    role: str = "f"

    def value(self, point) -> float:
        return float(self.expr(list(point)))

    def jet(self, point) -> Jet:
        sp = jet_space(self.chart.dim)
        out = self.expr(Jet.seed_point(sp, point))
        if not isinstance(out, Jet):
            out = Jet.constant(sp, float(out))
        return out


@dataclass
class CurvatureBundle:
    """All curvature data of one metric at one point, as plain arrays."""

    point: tuple
    g: np.ndarray          # (n, n)
    g_inv: np.ndarray      # (n, n)
    gamma: np.ndarray      # (n, n, n): Gamma^k_ij -> gamma[k, i, j]
    rm: np.ndarray         # (n, n, n, n): R_{ijkl}
    ric: np.ndarray        # (n, n)
    r: float
    dr: np.ndarray         # (n,): partial_k R
    grad_ric: np.ndarray   # (n, n, n): nabla_k Ric_ij -> grad_ric[k, i, j]
    weyl: np.ndarray       # (n, n, n, n); zero for dim < 4
    gamma_jet: Jet = field(repr=False, default=None)
    g_inv_jet: Jet = field(repr=False, default=None)


def eval_jets(metric: MetricField, point) -> Jet:
    """Metric components as a (n, n) batch of order-3 jets at ``point``."""
    metric.check_point(point)
    n = metric.chart.dim
    sp = jet_space(n)
    seeds = Jet.seed_point(sp, point)
    c = np.zeros((n, n, sp.size))
    for i in range(n):
        for j in range(i, n):
            out = metric.components[i][j](seeds)
            cij = out.c if isinstance(out, Jet) else Jet.constant(sp, float(out)).c
            c[i, j] = cij
            c[j, i] = cij
    return Jet(sp, c)


def _gamma_jet(g_jet: Jet) -> tuple[Jet, Jet]:
    """(Gamma^l_ij as an order-2 jet, g^{-1} jet) from the metric jet."""
    n = g_jet.c.shape[0]
    try:
        np.linalg.cholesky(g_jet.value)
    except np.linalg.LinAlgError as exc:
        raise DegenerateMetric(
            f"metric not positive definite: {exc}"
        ) from exc
    g_inv = jet_matrix_inverse(g_jet)
    dg = Jet.stack([g_jet.deriv(k) for k in range(n)])  # [a,b,c] = d_a g_bc
    # low[k,i,j] = (d_i g_kj + d_j g_ki - d_k g_ij) / 2
    low = 0.5 * (dg.transpose(1, 0, 2) + dg.transpose(1, 2, 0) - dg)
    return jet_einsum("lk,kij->lij", g_inv, low), g_inv


def christoffel(metric: MetricField, point) -> np.ndarray:
    """Levi-Civita connection coefficients Gamma^k_ij at ``point``."""
    gamma, _ = _gamma_jet(eval_jets(metric, point))
    return gamma.value


def curvature_bundle(metric: MetricField, point) -> CurvatureBundle:
    """Evaluate the full curvature stack of ``metric`` at ``point``."""
    n = metric.chart.dim
    g_jet = eval_jets(metric, point)
    gamma_j, g_inv_j = _gamma_jet(g_jet)

    dgam = Jet.stack([gamma_j.deriv(a) for a in range(n)])  # [a,l,j,k]
    t1 = dgam.transpose(1, 0, 2, 3)  # [l,i,j,k] = d_i Gamma^l_jk
    t2 = dgam.transpose(1, 2, 0, 3)  # [l,i,j,k] = d_j Gamma^l_ik
    gg = jet_einsum("lim,mjk->lijk", gamma_j, gamma_j)
    rm_up = t1 - t2 + gg - gg.transpose(0, 2, 1, 3)
    rm_j = jet_einsum("lm,mijk->ijkl", g_jet, rm_up)  # R_{ijkl} = g_lm R^m_ijk
    ric_j = jet_einsum("ad,ajld->jl", g_inv_j, rm_j)
    r_j = jet_einsum("jl,jl->", g_inv_j, ric_j)

    g = g_jet.value
    g_inv = g_inv_j.value
    gamma = gamma_j.value
    ric = ric_j.value
    r = float(r_j.value)
    dr = np.array(r_j.grad)
    dric = np.moveaxis(ric_j.grad, -1, 0)  # [k,i,j] = d_k Ric_ij
    grad_ric = (
        dric
        - np.einsum("mki,mj->kij", gamma, ric)
        - np.einsum("mkj,im->kij", gamma, ric)
    )
    rm = rm_j.value
    weyl = _weyl_from_parts(g, rm, ric, r) if n >= 4 else np.zeros_like(rm)
    return CurvatureBundle(
        point=tuple(point),
        g=g,
        g_inv=g_inv,
        gamma=gamma,
        rm=rm,
        ric=ric,
        r=r,
        dr=dr,
        grad_ric=grad_ric,
        weyl=weyl,
        gamma_jet=gamma_j,
        g_inv_jet=g_inv_j,
    )


def kulkarni_nomizu(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(a ^ b)_{ijkl} = a_il b_jk + a_jk b_il - a_ik b_jl - a_jl b_ik."""
    return (
        np.einsum("il,jk->ijkl", a, b)
        + np.einsum("jk,il->ijkl", a, b)
        - np.einsum("ik,jl->ijkl", a, b)
        - np.einsum("jl,ik->ijkl", a, b)
    )


def _weyl_from_parts(g, rm, ric, r) -> np.ndarray:
    n = g.shape[0]
    return (
        rm
        - kulkarni_nomizu(ric, g) / (n - 2)
        + r * kulkarni_nomizu(g, g) / (2 * (n - 1) * (n - 2))
    )


def riemann(metric: MetricField, point, bundle: CurvatureBundle = None) -> np.ndarray:
    b = bundle or curvature_bundle(metric, point)
    return b.rm


def ricci_scalar(
    metric: MetricField, point, bundle: CurvatureBundle = None
) -> tuple[np.ndarray, float]:
    b = bundle or curvature_bundle(metric, point)
    return b.ric, b.r


def weyl(metric: MetricField, point, bundle: CurvatureBundle = None) -> np.ndarray:
    b = bundle or curvature_bundle(metric, point)
    return b.weyl


def codazzi_residual(
    metric: MetricField, point, bundle: CurvatureBundle = None
) -> np.ndarray:
    """C_{kij} = nabla_k T_ij - nabla_i T_kj with T = Ric - R/(2n-2) g.

    Vanishing of C is the harmonic-Weyl condition.
    """
    b = bundle or curvature_bundle(metric, point)
    n = b.g.shape[0]
    grad_t = b.grad_ric - b.dr[:, None, None] * b.g[None, :, :] / (2 * n - 2)
    return grad_t - grad_t.transpose(1, 0, 2)


def harmonic_curvature_residual(
    metric: MetricField, point, bundle: CurvatureBundle = None
) -> np.ndarray:
    """Like :func:`codazzi_residual` but with T = Ric itself (d^nabla Ric)."""
    b = bundle or curvature_bundle(metric, point)
    return b.grad_ric - b.grad_ric.transpose(1, 0, 2)


def hessian(
    scalar: ScalarField, metric: MetricField, point, bundle: CurvatureBundle = None
) -> np.ndarray:
    """Covariant Hessian (nabla df)_ij = d_i d_j f - Gamma^k_ij d_k f."""
    metric.check_point(point)
    fj = scalar.jet(point)
    if bundle is not None:
        gamma = bundle.gamma
    else:
        gamma = christoffel(metric, point)
    return fj.hess() - np.einsum("kij,k->ij", gamma, fj.grad)


def ricci_eigensystem(
    metric: MetricField,
    point,
    grad_f=None,
    bundle: CurvatureBundle = None,
    angle_tol: float = 1e-8,
):
    """Eigenvalues of g^{-1} Ric in nondecreasing order, plus a flag saying
    whether ``grad_f`` (covariant components d_i f) is an eigenvector
    direction to within ``angle_tol``.  The flag is None when ``grad_f`` is
    omitted or has negligible length.
    """
    b = bundle or curvature_bundle(metric, point)
    try:
        chol = np.linalg.cholesky(b.g)
    except np.linalg.LinAlgError as exc:
        raise DegenerateMetric(f"metric not positive definite: {exc}") from exc
    a = np.linalg.solve(chol, np.linalg.solve(chol, b.ric).T).T
    vals = np.linalg.eigvalsh(0.5 * (a + a.T))

    flag = None
    if grad_f is not None:
        df = np.asarray(grad_f, dtype=float)
        v = b.g_inv @ df  # raise the index: the gradient vector field
        norm2 = float(df @ v)
        if norm2 > 1e-24:
            u = v / np.sqrt(norm2)
            bu = b.g_inv @ (b.ric @ u)
            lam = float(u @ (b.ric @ u))
            resid = bu - lam * u
            resid_len = np.sqrt(float(resid @ (b.g @ resid)))
            bu_len = np.sqrt(float(bu @ (b.g @ bu)))
            spec = 1.0 + float(np.max(np.abs(vals)))
            if bu_len <= 1e-12 * spec:
                flag = True  # Ric u ~ 0: u spans a null eigen-direction
            else:
                flag = bool(resid_len / bu_len <= angle_tol)
    return vals, flag


def cluster_eigenvalues(values, gap: float = None) -> list[list[float]]:
    """Group sorted eigenvalues whose successive gaps fall below threshold.

    Default threshold: 1e-6 * (1 + spectral radius).
    """
    vals = np.sort(np.asarray(values, dtype=float))
    if gap is None:
        gap = 1e-6 * (1.0 + float(np.max(np.abs(vals), initial=0.0)))
    groups = [[float(vals[0])]]
    for v in vals[1:]:
        if v - groups[-1][-1] <= gap:
            groups[-1].append(float(v))
        else:
            groups.append([float(v)])
    return groups
