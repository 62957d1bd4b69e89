"""Affine LIBOR model: bond quotients as exponential-affine martingales.

Bond prices relative to the terminal numeraire are modeled as

    B(t, T_k) / B(t, T_N) = M_t^{u_k} = exp( phi_{T_N - t}(u_k) + psi_{T_N - t}(u_k) X_t ),

where X is the nonnegative square-root diffusion of :mod:`liborlab.affine`
and (u_k) is a nonincreasing parameter sequence with u_N = 0.  Because
X >= 0 and u >= 0, each martingale stays >= 1 and is nondecreasing in u,
which makes bond prices decreasing in maturity and every rate

    1 + delta L(t, T_k) = M_t^{u_k} / M_t^{u_{k+1}} = exp(A_k(t) + B_k(t) X_t) >= 1

nonnegative by construction.  Fitting the initial curve is a sequence of
scalar root-finds M_0^{u_k} = B(0, T_k) / B(0, T_N).

Under any forward measure the driver stays affine (time inhomogeneous):
the conditional exponential moment of X under the T_k forward measure has
the closed exponential-affine form produced by composing the flow with
psi_{T_N - r}(u_k), so caplets price by one-dimensional Fourier inversion;
for this driver the transition laws are scaled noncentral chi-square, so a
closed form in terms of the chi-square distribution function is available
as a cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
import numpy as np
from scipy.optimize import brentq
from scipy.stats import ncx2

from .affine import (
    CirParams,
    cir_flow,
    explosion_threshold,
    simulate_cir,
    transition_constants,
)
from .errors import DomainError, FitInfeasibleError, LiborLabError
from .fourier import damped_call_expectation, select_damping
from .lmm import LiborPathSet
from .tenor import InitialCurve, TenorStructure

_FIT_RTOL = 1e-10
_DOMAIN_MARGIN = 1.0 - 1e-9


@dataclass(frozen=True)
class MartingaleFamily:
    """Fitted martingale family of one affine LIBOR model.

    ``u_seq[k]`` for k = 0..N is nonincreasing with ``u_seq[N] = 0``; every
    u_k lies in the moment domain at the terminal horizon and reproduces
    the observed bond ratio at time zero.
    """

    curve: InitialCurve
    params: CirParams
    u_seq: np.ndarray = field(repr=False)

    def __post_init__(self):
        u = np.asarray(self.u_seq, dtype=float)
        n = self.curve.tenor.n
        if u.shape != (n + 1,):
            raise LiborLabError(f"need {n + 1} martingale parameters, got {u.shape}")
        if np.any(np.diff(u) > 0.0):
            raise LiborLabError("martingale parameters must be nonincreasing")
        if u[n] != 0.0:
            raise LiborLabError("the terminal parameter must be 0")
        object.__setattr__(self, "u_seq", u)

    @property
    def tenor(self) -> TenorStructure:
        return self.curve.tenor

    @property
    def horizon(self) -> float:
        return self.tenor.horizon


def martingale_value(family: MartingaleFamily, u: float, t: float, x) -> np.ndarray:
    """M_t^u = exp(phi_{T_N - t}(u) + psi_{T_N - t}(u) x); >= 1 for u >= 0."""
    if t < 0.0 or t > family.horizon:
        raise LiborLabError(f"time {t} outside [0, {family.horizon}]")
    phi, psi = cir_flow(family.params, family.horizon - t, u)
    return np.exp(phi + psi * np.asarray(x, dtype=float))[()]


def fit_initial_curve(curve: InitialCurve, params: CirParams) -> MartingaleFamily:
    """Solve M_0^{u_k} = B(0, T_k) / B(0, T_N) for each k by root bracketing.

    A flat curve (all ratios 1) maps to u identically zero.  Ratios beyond
    the attainable supremum of u -> M_0^u raise ``FitInfeasibleError``
    naming the offending tenor index.
    """
    tenor = curve.tenor
    n = tenor.n
    horizon = tenor.horizon
    u_max = float(explosion_threshold(params, horizon))

    def log_m0(u: float) -> float:
        phi, psi = cir_flow(params, horizon, u)
        return phi + psi * params.x0

    degenerate = params.x0 == 0.0 and (
        params.mean_reversion == 0.0 or params.long_run_level == 0.0
    )

    def solve(k: int) -> float:
        target = math.log(curve.bond(k) / curve.bond(n))
        if target == 0.0:
            return 0.0
        if degenerate:
            raise FitInfeasibleError(
                f"bond ratio at index {k} unattainable: the martingale family is degenerate "
                "(x0 = 0 and no mean-reversion level)",
                tenor_index=k,
            )
        hi = None
        for frac in 1.0 - 0.5 ** np.arange(1, 60):
            cand = u_max * frac
            if log_m0(cand) >= target:
                hi = cand
                break
        if hi is None:
            raise FitInfeasibleError(
                f"bond ratio at index {k} exceeds the attainable supremum", tenor_index=k
            )
        root = brentq(lambda v: log_m0(v) - target, 0.0, hi, xtol=1e-15, rtol=8.9e-16)
        if abs(log_m0(root) - target) > _FIT_RTOL:
            raise FitInfeasibleError(
                f"curve fit at index {k} missed the target ratio", tenor_index=k
            )
        return root

    u = np.zeros(n + 1)
    for k in range(n - 1, -1, -1):
        u[k] = solve(k)
    return MartingaleFamily(curve=curve, params=params, u_seq=u)


def libor_coefficients(family: MartingaleFamily, k: int, t: float):
    """(A_k(t), B_k(t)) with 1 + delta L(t, T_k) = exp(A + B X_t).

    A and B are flow differences at the remaining horizon; B >= 0 because
    the parameters are nonincreasing and psi is increasing in u.
    """
    if not 0 <= k <= family.tenor.n - 1:
        raise LiborLabError(f"rate index {k} outside 0..{family.tenor.n - 1}")
    rem = family.horizon - t
    phi_k, psi_k = cir_flow(family.params, rem, family.u_seq[k])
    phi_n, psi_n = cir_flow(family.params, rem, family.u_seq[k + 1])
    return phi_k - phi_n, psi_k - psi_n


def libor_value(family: MartingaleFamily, k: int, t: float, x) -> np.ndarray:
    """L(t, T_k; x) = (exp(A_k(t) + B_k(t) x) - 1) / delta; never negative."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0):
        raise LiborLabError("driver state must be nonnegative")
    a, b = libor_coefficients(family, k, t)
    return (np.expm1(a + b * x) / family.tenor.delta)[()]


def forward_measure_mgf(
    family: MartingaleFamily, k: int, v, s: float, r: float, x_s
) -> np.ndarray:
    """E^{T_k}[ exp(v X_r) | X_s = x_s ] in exponential-affine closed form.

    The measure change to the T_k forward measure tilts the driver by
    psi_{T_N - r}(u_k); composing the flow gives

        exp( phi_{r-s}(q + v) - phi_{r-s}(q)
             + [psi_{r-s}(q + v) - psi_{r-s}(q)] x_s ),   q = psi_{T_N - r}(u_k).

    ``v`` may be complex (Fourier pricing); the domain condition applies to
    its real part.
    """
    if not 0.0 <= s <= r <= family.horizon:
        raise LiborLabError("need 0 <= s <= r <= horizon")
    if not 1 <= k <= family.tenor.n:
        raise LiborLabError(f"measure index {k} outside 1..{family.tenor.n}")
    q = cir_flow(family.params, family.horizon - r, family.u_seq[k])[1]
    phi_qv, psi_qv = cir_flow(family.params, r - s, q + np.asarray(v))
    phi_q, psi_q = cir_flow(family.params, r - s, q)
    return np.exp(phi_qv - phi_q + (psi_qv - psi_q) * np.asarray(x_s))[()]


def _caplet_setup(family: MartingaleFamily, k: int, strike: float):
    if not 1 <= k <= family.tenor.n - 1:
        raise LiborLabError(f"rate index {k} outside 1..{family.tenor.n - 1}")
    if strike < 0.0:
        raise LiborLabError("caplet strike must be nonnegative")
    delta = family.tenor.delta
    t_fix = family.tenor.dates[k]
    a, b = libor_coefficients(family, k, t_fix)
    return delta, t_fix, a, b


def caplet_price_fourier(family: MartingaleFamily, k: int, strike: float) -> float:
    """Caplet value B(0,T_{k+1}) delta E^{T_{k+1}}[(L(T_k,T_k) - K)^+].

    The accrual-scaled payoff is a call on exp(A + B X_{T_k}) with strike
    1 + delta K, priced by damped Fourier inversion against the forward
    measure's exponential moment of X_{T_k}.
    """
    delta, t_fix, a, b = _caplet_setup(family, k, strike)
    discount = family.curve.bond(k + 1)
    strike_factor = 1.0 + delta * strike

    if b <= 1e-14:
        # deterministic rate exp(A) - 1; with u_k = u_{k+1} it is zero
        intrinsic = max(math.expm1(a) / delta - strike, 0.0)
        return discount * delta * intrinsic

    # moment function of S = A + B X_{T_k} under the T_{k+1} forward measure
    def moment(w):
        return np.exp(w * a) * forward_measure_mgf(
            family, k + 1, w * b, 0.0, t_fix, family.params.x0
        )

    # damping bound: Re(w) b + psi_{T_N - T_k}(u_{k+1}) below the explosion
    # threshold of the flow at horizon T_k
    q = cir_flow(family.params, family.horizon - t_fix, family.u_seq[k + 1])[1]
    u_max = float(explosion_threshold(family.params, t_fix)) * _DOMAIN_MARGIN
    w_max = (u_max - q) / b
    damping = select_damping(w_max)
    value = damped_call_expectation(moment, strike_factor, damping)
    return discount * value


def forward_transition_law(family: MartingaleFamily, k: int, r: float):
    """Scaled noncentral chi-square law of X_r under the T_k forward measure.

    The terminal-measure transition over [0, r] is scale * NCChi2(df, nc);
    the forward measure tilts it by q = psi_{T_N - r}(u_k), which maps a
    scaled noncentral chi-square into another one with

        scale' = scale / (1 - 2 scale q),   nc' = nc / (1 - 2 scale q).

    Returns (scale', df, nc').
    """
    scale, df, decay = transition_constants(family.params, r)
    nc = family.params.x0 * decay / scale
    q = cir_flow(family.params, family.horizon - r, family.u_seq[k])[1]
    shrink = 1.0 - 2.0 * scale * q
    if shrink <= 0.0:
        raise DomainError("forward-measure tilt outside the transition's moment domain")
    return scale / shrink, df, nc / shrink


def caplet_price_chi2(family: MartingaleFamily, k: int, strike: float) -> float:
    """Closed-form caplet value through the noncentral chi-square law.

    Splits delta (L - K)^+ = (e^{A + B X} - (1 + delta K)) 1_{X > x*} and
    evaluates both pieces with the chi-square distribution function (the
    exponential piece through one more tilt).  Requires positive degrees of
    freedom (long-run level > 0) and B > 0.
    """
    delta, t_fix, a, b = _caplet_setup(family, k, strike)
    discount = family.curve.bond(k + 1)
    strike_factor = 1.0 + delta * strike
    if b <= 1e-14:
        intrinsic = max(math.expm1(a) / delta - strike, 0.0)
        return discount * delta * intrinsic

    scale, df, nc = forward_transition_law(family, k + 1, t_fix)
    if df <= 0.0:
        raise LiborLabError("chi-square form needs positive degrees of freedom")
    x_star = (math.log(strike_factor) - a) / b

    shrink = 1.0 - 2.0 * scale * b
    if shrink <= 0.0:
        raise DomainError("caplet exponent outside the transition's moment domain")
    mgf_b = math.exp(nc * scale * b / shrink) / shrink ** (0.5 * df)
    if x_star <= 0.0:
        exp_piece = mgf_b * math.exp(a)
        prob_piece = 1.0
    else:
        exp_piece = (
            mgf_b * math.exp(a) * ncx2.sf(x_star / (scale / shrink), df, nc / shrink)
        )
        prob_piece = ncx2.sf(x_star / scale, df, nc)
    return discount * (exp_piece - strike_factor * prob_piece)


def simulate_affine_paths(
    family: MartingaleFamily,
    n_paths: int,
    seed: int,
    steps_per_period: int = 1,
    store_dates: bool = False,
) -> LiborPathSet:
    """Simulate the model's rates on the tenor dates.

    The driver transitions are sampled exactly, so the grid only refines
    the tenor dates for diagnostic purposes.  Fixing weights carry the
    density M^{u_{k+1}}_{T_k} / M^{u_{k+1}}_0 of each rate's payment
    measure; rates are frozen at their fixing values after the reset date.
    """
    tenor = family.tenor
    n = tenor.n
    horizon = tenor.dates[n - 1]
    n_steps = (n - 1) * steps_per_period
    grid = np.linspace(0.0, horizon, n_steps + 1)
    states = simulate_cir(family.params, grid, n_paths, seed)

    l0 = np.asarray(family.curve.libors)
    fixings = np.empty((n_paths, n))
    fixings[:, 0] = l0[0]
    fixing_weights = np.ones((n_paths, n))
    date_values = np.empty((n_paths, n, n)) if store_dates else None

    frozen = np.tile(l0, (n_paths, 1))
    for d in range(0, n):
        if d > 0:
            x_d = states[d * steps_per_period]
            for k in range(d, n):
                frozen[:, k] = libor_value(family, k, tenor.dates[d], x_d)
            fixings[:, d] = frozen[:, d]
            m_now = martingale_value(family, family.u_seq[d + 1], tenor.dates[d], x_d)
            m_zero = martingale_value(family, family.u_seq[d + 1], 0.0, family.params.x0)
            fixing_weights[:, d] = m_now / m_zero
        if store_dates and d < n:
            date_values[:, d, :] = frozen

    return LiborPathSet(
        tenor=tenor,
        scheme="affine",
        seed=int(seed),
        grid=grid,
        initial_libors=l0,
        fixings=fixings,
        fixing_weights=fixing_weights,
        date_values=date_values,
        grid_values=None,
        antithetic=False,
    )


def export_family_csv(path, family: MartingaleFamily) -> None:
    """Write the fitted family as ``k,u_k,M0``."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("k,u_k,M0\n")
        for k in range(1, family.tenor.n + 1):
            m0 = float(
                martingale_value(family, family.u_seq[k], 0.0, family.params.x0)
            )
            fh.write(f"{k},{family.u_seq[k]:.17g},{m0:.17g}\n")
