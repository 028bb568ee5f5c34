"""Sharp Wronskian inequality for omega(z) = z^n F(z) on the real axis.

For a config (measure, n, tau) drawn from the admissible hypothesis families,
the inequality reads 4 sigma d(x) >= x^{2n-2} D(x) with d = x^{2n} Delta and
D the squared phase bracket built from C, S and their derivatives.  The
removable x-powers are cancelled analytically before evaluation for n in
{0, 1}; the n = -1 case uses exact limits at the origin.

Equality on the whole line or at isolated points is detected, and the
closed-form witness (c, beta, gamma) of the equality family is fitted when the
nonnegative combination E matches c sin^2(sigma x + tau + beta).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .measure import StieltjesMeasure
from .transforms import eval_E, real_transforms

#: grid-hypothesis slack, relative to max(total variation, 1)
HYPOTHESIS_TOL = 1e-9
#: |margin| <= MARGIN_TOL * scale counts as equality at a point
MARGIN_TOL = 1e-8
#: |E| <= E_TOL * sqrt(total variation) counts as a vanishing combination
E_TOL = 1e-6
#: below this |x|, the n = -1 formulas switch to their exact x -> 0 limits
_N_MINUS_CUT = 1e-4


class HypothesisKind(enum.Enum):
    """Which admissible (n, tau) family a config claims."""

    COSINE_NONNEG = "cosine_nonneg"            # n = 0,  tau = 0,      C >= 0
    SINE_NONNEG_DECAY = "sine_nonneg_decay"    # n = 1,  tau = -pi/2,  S >= 0, F vanishing at infinity
    SINE_NONNEG_ROOT = "sine_nonneg_root"      # n = -1, tau = -pi/2,  S >= 0, F(0) = 0
    ROTATED_NONNEG = "rotated_nonneg"          # n = 0,  tau = +-tau0, C cos tau0 - S sin tau0 >= 0


@dataclass(frozen=True)
class OmegaConfig:
    """Selects omega(z) = z^n F(z) and the phase tau.

    The constructor refuses (n, tau) pairs outside the four admissible
    families and records which family is claimed.  The grid hypothesis itself
    (E >= 0) is checked later by `check_inequality`, never proved.
    """

    measure: StieltjesMeasure
    n: int
    tau: float
    kind: HypothesisKind = field(init=False)

    def __post_init__(self):
        if self.n not in (-1, 0, 1):
            raise ValueError("n must be -1, 0, or 1")
        tau = float(self.tau)
        v = max(self.measure.total_variation, 1.0)
        if self.n == 0:
            kind = HypothesisKind.COSINE_NONNEG if tau == 0.0 else HypothesisKind.ROTATED_NONNEG
        elif self.n == 1:
            if not math.isclose(tau, -math.pi / 2, rel_tol=0.0, abs_tol=1e-12):
                raise ValueError("n = 1 requires tau = -pi/2")
            if self.measure.atoms:
                raise ValueError(
                    "n = 1 requires F vanishing at infinity; atomic parts never decay"
                )
            kind = HypothesisKind.SINE_NONNEG_DECAY
        else:
            if not math.isclose(tau, -math.pi / 2, rel_tol=0.0, abs_tol=1e-12):
                raise ValueError("n = -1 requires tau = -pi/2")
            if abs(self.measure.total_mass) > 1e-12 * v:
                raise ValueError("n = -1 requires F(0) = 0")
            kind = HypothesisKind.SINE_NONNEG_ROOT
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "kind", kind)


def default_grid(cfg: OmegaConfig, x_min: float, x_max: float) -> np.ndarray:
    """Uniform grid with step pi / (50 sigma): >= 100 points per oscillation."""
    step = math.pi / (50.0 * cfg.measure.sigma)
    return np.arange(x_min, x_max + 0.5 * step, step)


def _limit_d_at_zero(measure: StieltjesMeasure) -> float:
    # lim Delta(x)/x^2 = -G''(0) H'(0) / 2 = (int t^2 dmu)(int t dmu)/2, valid for F(0)=0
    return 0.5 * measure.moment(2) * measure.moment(1)


def eval_d(cfg: OmegaConfig, x):
    """d(x) = x^{2n} Delta(x); the n = -1 removable point uses the exact limit."""
    x = np.asarray(x, dtype=float)
    delta = real_transforms(cfg.measure, x, order=1).Delta
    if cfg.n == 0:
        out = delta
    elif cfg.n == 1:
        out = x * x * delta
    else:
        small = np.abs(x) < _N_MINUS_CUT
        safe = np.where(small, 1.0, x)
        out = np.where(small, _limit_d_at_zero(cfg.measure), delta / (safe * safe))
    return out if out.ndim else float(out)


def eval_D(cfg: OmegaConfig, x):
    """The squared bracket D(x) exactly as printed (x-powers not cancelled)."""
    x = np.asarray(x, dtype=float)
    rt = real_transforms(cfg.measure, x, order=1)
    n, tau = cfg.n, cfg.tau
    sig = cfg.measure.sigma
    bracket = (2.0 * sig * x * rt.S + x * rt.Cp + n * rt.C) * math.cos(tau) + (
        2.0 * sig * x * rt.C - x * rt.Sp - n * rt.S
    ) * math.sin(tau)
    out = bracket * bracket
    return out if out.ndim else float(out)


def _margin_pieces(cfg: OmegaConfig, x: np.ndarray):
    """(lhs, rhs) with margin = lhs - rhs and the x-power factored analytically.

    n = 0:  lhs = 4 sigma Delta,        rhs = [(2 sigma S + C')cos + (2 sigma C - S')sin]^2
    n = 1:  lhs = 4 sigma x^2 Delta,    rhs = bracket^2 (prefactor x^0)
    n = -1: exact limits below |x| < cut, direct division above.
    """
    rt = real_transforms(cfg.measure, x, order=1)
    sig = cfg.measure.sigma
    tau = cfg.tau
    delta = rt.Delta
    if cfg.n == 0:
        bracket = (2.0 * sig * rt.S + rt.Cp) * math.cos(tau) + (2.0 * sig * rt.C - rt.Sp) * math.sin(tau)
        return 4.0 * sig * delta, bracket * bracket
    if cfg.n == 1:
        bracket = (2.0 * sig * x * rt.S + x * rt.Cp + rt.C) * math.cos(tau) + (
            2.0 * sig * x * rt.C - x * rt.Sp - rt.S
        ) * math.sin(tau)
        return 4.0 * sig * x * x * delta, bracket * bracket
    # n = -1
    bracket = (2.0 * sig * x * rt.S + x * rt.Cp - rt.C) * math.cos(tau) + (
        2.0 * sig * x * rt.C - x * rt.Sp + rt.S
    ) * math.sin(tau)
    small = np.abs(x) < _N_MINUS_CUT
    safe = np.where(small, 1.0, x)
    lhs = np.where(small, 4.0 * sig * _limit_d_at_zero(cfg.measure), 4.0 * sig * delta / safe**2)
    # bracket has a triple zero at the origin when F(0) = 0, so rhs -> 0 there
    rhs = np.where(small, 0.0, (bracket / safe**2) ** 2)
    return lhs, rhs


def margin_values(cfg: OmegaConfig, x):
    x = np.asarray(x, dtype=float)
    lhs, rhs = _margin_pieces(cfg, x)
    out = lhs - rhs
    return out if out.ndim else float(out)


def margin_scale(cfg: OmegaConfig, x):
    x = np.asarray(x, dtype=float)
    lhs, rhs = _margin_pieces(cfg, x)
    out = np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), 1.0)
    return out if out.ndim else float(out)


def squared_bracket_direct(cfg: OmegaConfig, x):
    """x^{2n-2} D(x) computed from P = x^n G, Q = x^n H directly.

    Uses the one-parameter bracket {(sigma P + Q')sin(sigma x + tau)
    + (P' - sigma Q)cos(sigma x + tau)}^2, an independent route to the
    right-hand side (valid away from x = 0 for n != 0).
    """
    x = np.asarray(x, dtype=float)
    rt = real_transforms(cfg.measure, x, order=1)
    sig = cfg.measure.sigma
    n = cfg.n
    xn = x.astype(float) ** n if n != 0 else np.ones_like(x)
    P = xn * rt.G
    Q = xn * rt.H
    if n == 0:
        Pp = rt.Gp
        Qp = rt.Hp
    else:
        Pp = n * x ** (n - 1) * rt.G + xn * rt.Gp
        Qp = n * x ** (n - 1) * rt.H + xn * rt.Hp
    phase = sig * x + cfg.tau
    bracket = (sig * P + Qp) * np.sin(phase) + (Pp - sig * Q) * np.cos(phase)
    out = bracket * bracket
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class InequalityReport:
    """Grid margins of the sharp inequality plus equality diagnostics.

    hypothesis_ok records only that E >= 0 held on the grid ("grid-verified",
    never "verified").  equality_points are refined locations where both E and
    the margin vanish within tolerance; for a globally vanishing E the flag
    global_equality is set instead and the list stays empty.
    """

    grid: np.ndarray
    margin: np.ndarray
    e_values: np.ndarray
    scale: np.ndarray
    min_margin: float
    equality_points: tuple
    hypothesis_ok: bool
    global_equality: bool

    @property
    def worst_relative_margin(self) -> float:
        return float(np.min(self.margin / self.scale))


def _refine_equality_points(cfg: OmegaConfig, grid, e_vals, e_tol):
    """Golden-section refinement of |E| around grid local minima."""
    candidates = []
    e_abs = np.abs(e_vals)
    e_scale = float(np.max(e_abs)) if e_abs.size else 0.0
    threshold = max(100.0 * e_tol, 1e-3 * e_scale)
    for i in range(1, len(grid) - 1):
        if e_abs[i] <= e_abs[i - 1] and e_abs[i] <= e_abs[i + 1] and e_abs[i] <= threshold:
            candidates.append(i)
    points = []
    for i in candidates:
        fun = lambda t: abs(eval_E(cfg.measure, cfg.tau, cfg.n, float(t)))
        res = optimize.minimize_scalar(
            fun,
            bracket=(grid[i - 1], grid[i], grid[i + 1]),
            method="golden",
            options={"xtol": 1e-11},
        )
        x_star = float(res.x)
        if cfg.n != 0 and abs(x_star) < 1e-8:
            # E carries a forced zero at the origin from the x^n prefactor;
            # it is structural, not an equality of the transforms
            continue
        if abs(eval_E(cfg.measure, cfg.tau, cfg.n, x_star)) > e_tol:
            continue
        m_star = margin_values(cfg, x_star)
        if abs(m_star) > MARGIN_TOL * margin_scale(cfg, x_star):
            continue
        if points and abs(points[-1] - x_star) < 1e-9 * max(1.0, abs(x_star)):
            continue
        points.append(x_star)
    return tuple(points)


def check_inequality(cfg: OmegaConfig, grid) -> InequalityReport:
    """Margins of the inequality on a sorted finite grid.

    A hypothesis violation (E < 0 somewhere) is reported, not raised; margins
    are still computed so the caller can inspect the failure.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise ValueError("grid must be a 1-d array with at least 2 points")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")
    lhs, rhs = _margin_pieces(cfg, grid)
    margin = lhs - rhs
    scale = np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), 1.0)
    e_vals = np.asarray(eval_E(cfg.measure, cfg.tau, cfg.n, grid))
    v = cfg.measure.total_variation
    hyp_tol = HYPOTHESIS_TOL * max(v, 1.0)
    hypothesis_ok = bool(np.min(e_vals) >= -hyp_tol)
    e_tol = E_TOL * math.sqrt(max(v, 1e-30))
    global_equality = bool(np.max(np.abs(e_vals)) <= e_tol)
    if global_equality:
        points = ()
    else:
        points = _refine_equality_points(cfg, grid, e_vals, e_tol)
    return InequalityReport(
        grid=grid,
        margin=margin,
        e_values=e_vals,
        scale=scale,
        min_margin=float(np.min(margin)),
        equality_points=points,
        hypothesis_ok=hypothesis_ok,
        global_equality=global_equality,
    )


@dataclass(frozen=True)
class EqualityWitness:
    """Closed-form equality family: E = c sin^2(sigma x + tau + beta), with

    P(x) = c sin(beta) sin(sigma x + tau + beta) + gamma sin(sigma x + tau)
    Q(x) = c cos(beta) sin(sigma x + tau + beta) - gamma cos(sigma x + tau)

    and d identically gamma^2 sigma.  beta is normalized to [0, pi); the sign
    of gamma is fixed by matching P at a sample point.
    """

    c: float
    beta: float
    gamma: float


def fit_equality_witness(cfg: OmegaConfig, grid) -> EqualityWitness | None:
    """Fit (c, beta, gamma) if E matches the equality family on the grid."""
    grid = np.asarray(grid, dtype=float)
    m = cfg.measure
    sig = m.sigma
    v = m.total_variation
    tol = 1e-8 * max(v, 1.0)

    e_vals = np.asarray(eval_E(m, cfg.tau, cfg.n, grid))
    # E = A + B cos(2 sigma x + 2 tau) + C sin(2 sigma x + 2 tau) with
    # A = c/2, B = -(c/2) cos(2 beta), C = (c/2) sin(2 beta)
    theta = 2.0 * sig * grid + 2.0 * cfg.tau
    design = np.column_stack([np.ones_like(grid), np.cos(theta), np.sin(theta)])
    coef, *_ = np.linalg.lstsq(design, e_vals, rcond=None)
    resid = e_vals - design @ coef
    if float(np.max(np.abs(resid))) > tol:
        return None
    A, B, C = (float(c) for c in coef)
    amp = math.hypot(B, C)
    if abs(A - amp) > tol or A < -tol:
        return None
    c = max(2.0 * A, 0.0)
    if c <= tol:
        c = 0.0
        beta = 0.0
    else:
        beta = 0.5 * math.atan2(C, -B)
        beta %= math.pi

    d_vals = np.asarray(eval_d(cfg, grid))
    d_bar = float(np.mean(d_vals))
    quad_scale = max(v * v * sig, 1.0)
    if float(np.max(np.abs(d_vals - d_bar))) > 1e-8 * quad_scale or d_bar < -1e-8 * quad_scale:
        return None
    gamma_abs = math.sqrt(max(d_bar, 0.0) / sig)

    # fix the sign of gamma from the P identity at a well-conditioned point
    rt = real_transforms(m, grid, order=0)
    xn = grid**cfg.n if cfg.n != 0 else np.ones_like(grid)
    with np.errstate(divide="ignore", invalid="ignore"):
        P = np.where(np.isfinite(xn), xn, 0.0) * rt.G
    phase = sig * grid + cfg.tau
    i_star = int(np.argmax(np.abs(np.sin(phase))))
    denom = math.sin(phase[i_star])
    gamma_est = (P[i_star] - c * math.sin(beta) * math.sin(phase[i_star] + beta)) / denom
    gamma = math.copysign(gamma_abs, gamma_est) if gamma_abs > 0.0 else 0.0

    # validate both closed forms on the grid before accepting
    Q = np.where(np.isfinite(xn), xn, 0.0) * rt.H
    P_model = c * math.sin(beta) * np.sin(phase + beta) + gamma * np.sin(phase)
    Q_model = c * math.cos(beta) * np.sin(phase + beta) - gamma * np.cos(phase)
    if cfg.n == -1:
        ok = np.abs(grid) > 1e-6
    else:
        ok = np.ones_like(grid, dtype=bool)
    if float(np.max(np.abs((P - P_model)[ok]))) > 1e-6 * max(v, 1.0):
        return None
    if float(np.max(np.abs((Q - Q_model)[ok]))) > 1e-6 * max(v, 1.0):
        return None
    return EqualityWitness(c=c, beta=beta, gamma=gamma)


def borderline_growth_d(a: float, x):
    """Closed-form d for omega(z) = sin z + a z cos z + i (a z sin z + 1 - cos z).

    This omega grows like O(x) instead of o(x) on the real axis; its Wronskian
    d(x) = a^2 x^2 + a x sin x + (a+1)(1 - cos x) changes sign for
    a in (-1, -1/2) (negative like x^2 (a+1)(a+1/2) near 0, positive like
    a^2 x^2 at infinity), so the strict decay condition cannot be weakened.
    """
    if not (-1.0 < a < -0.5):
        raise ValueError("a must lie in (-1, -1/2)")
    x = np.asarray(x, dtype=float)
    out = a * a * x * x + a * x * np.sin(x) + (a + 1.0) * (1.0 - np.cos(x))
    return out if out.ndim else float(out)
