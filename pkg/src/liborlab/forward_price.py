"""Forward price model: exponential dynamics for 1 + delta L.

The forward price F(., T_k, T_{k+1}) = 1 + delta L(., T_k) is modeled as

    1 + delta L(t, T_k) = (1 + delta L(0, T_k)) exp( int_0^t beta(s, T_k) ds
                                                     + int_0^t lambda(s, T_k) dH_s ),

with the drift pinned by the martingale property of L(., T_k) under the
forward measure of T_{k+1}.  The measure changes are exponential tilts with
deterministic loadings (Esscher transforms): under the T_{k+1} forward
measure the Brownian motion shifts by the cumulative loading
Lambda_{k+1}(s) = sum_{l>k} lambda(s, T_l) times sqrt(c) and the jump
compensator is tilted by exp(x Lambda_{k+1}(s)).  Writing kappa for the
terminal-measure cumulant, the tilted cumulant is

    kappa^{k+1}(z) = kappa(z + Lambda_{k+1}) - kappa(Lambda_{k+1}),

and the martingale drift collapses to the deterministic table

    beta(s, T_k) = -kappa^{k+1}(lambda_k(s)) = kappa(Lambda_{k+1}(s)) - kappa(Lambda_k(s)).

Because drift and loadings are deterministic and piecewise constant, the
log-Euler recursion on a refining grid reproduces the model law exactly,
and caplets price in closed form by Fourier inversion of the forward
price's moment function.  Forward prices stay positive but the implied
rates (F - 1) / delta can go negative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError, LiborLabError
from .fourier import damped_call_expectation, select_damping
from .levy import DriverPathSet, LevyCharacteristics, simulate_driver
from .lmm import LiborPathSet, _check_grid
from .tenor import InitialCurve, TenorStructure
from .volatility import VolatilitySurface

_GRID_ATOL = 1e-10
_DOMAIN_MARGIN = 1.0 - 1e-9


@dataclass(frozen=True)
class FpmModel:
    """Forward-price-model definition with the precomputed drift table.

    ``drift_table[j, k]`` holds the martingale drift of rate k on the tenor
    interval [T_j, T_{j+1}); it is deterministic, which is the tractability
    payoff of modeling the forward price.
    """

    tenor: TenorStructure
    curve: InitialCurve
    vols: VolatilitySurface
    chars: LevyCharacteristics
    drift_table: np.ndarray = field(init=False, repr=False)
    loading_tails: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.curve.tenor != self.tenor or self.vols.tenor != self.tenor:
            raise LiborLabError("curve and volatility surface must share the tenor structure")
        n = self.tenor.n
        lam = self.vols.values
        # tails[j, k] = Lambda_k(on interval j) = sum_{l >= k} lambda(j, l)
        tails = np.zeros((n, n + 1))
        tails[:, :-1] = np.cumsum(lam[:, ::-1], axis=1)[:, ::-1]
        bound = self.chars.exp_moment_bound
        if np.max(np.abs(tails)) >= bound:
            raise DomainError(
                "cumulative loading exceeds the driver's exponential-moment bound",
                max_admissible=bound,
            )
        table = np.zeros((n, n))
        for j in range(n):
            for k in range(1, n):
                if lam[j, k] != 0.0:
                    table[j, k] = float(
                        self.chars.cumulant(tails[j, k + 1]) - self.chars.cumulant(tails[j, k])
                    )
        object.__setattr__(self, "drift_table", table)
        object.__setattr__(self, "loading_tails", tails)

    @property
    def delta(self) -> float:
        return self.tenor.delta


def forward_price_drift(model: FpmModel, s: float, k: int) -> float:
    """Martingale drift beta(s, T_k); deterministic, zero after the reset."""
    if not 1 <= k <= model.tenor.n - 1:
        raise LiborLabError(f"rate index {k} outside 1..{model.tenor.n - 1}")
    if s > model.tenor.dates[k] + _GRID_ATOL:
        raise LiborLabError(f"drift of rate {k} queried after its reset date")
    return float(model.drift_table[model.tenor.index_of(s), k])


def forward_measure_shift(model: FpmModel, s: float, k: int):
    """Girsanov data under the T_{k+1} forward measure.

    Returns the Brownian drift shift sqrt(c) * Lambda_{k+1}(s) and the
    deterministic jump-compensator tilt x -> exp(x * Lambda_{k+1}(s)); both
    are free of any rate state, so the driver's structure is preserved.
    """
    tail = float(model.loading_tails[model.tenor.index_of(s), k + 1])
    shift = math.sqrt(model.chars.diffusion_c) * tail

    def compensator_factor(x):
        return np.exp(np.asarray(x, dtype=float) * tail)

    return shift, compensator_factor


def simulate_fpm(
    model: FpmModel,
    grid,
    n_paths: int,
    seed: int,
    driver: Optional[DriverPathSet] = None,
    store_dates: bool = False,
    store_grid: bool = False,
    antithetic: bool = False,
) -> LiborPathSet:
    """Exact-in-law simulation of the forward prices on the grid.

    Drift and loadings are piecewise constant, so the per-step integrals
    are exact; the only randomness enters through the shared driver
    increments.  Rates are reported as (F - 1) / delta and may be negative.
    """
    grid = np.asarray(grid, dtype=float)
    _check_grid(model.tenor, grid)
    if driver is None:
        driver = simulate_driver(model.chars, grid, n_paths, seed, antithetic=antithetic)
    elif driver.n_steps != len(grid) - 1 or not np.allclose(driver.grid, grid):
        raise LiborLabError("driver path set does not match the simulation grid")
    else:
        n_paths = driver.n_paths
        antithetic = driver.antithetic

    tenor = model.tenor
    n = tenor.n
    delta = tenor.delta
    l0 = np.asarray(model.curve.libors)
    dh = driver.increments(model.chars)
    dts = driver.dts

    log_f = np.tile(np.log1p(delta * l0), (driver.n_paths, 1))
    fixings = np.full((driver.n_paths, n), np.nan)
    fixings[:, 0] = l0[0]
    fixing_weights = np.ones((driver.n_paths, n))

    date_idx = {}
    for d, t in enumerate(tenor.dates):
        hits = np.nonzero(np.abs(grid - t) <= _GRID_ATOL)[0]
        if hits.size:
            date_idx[int(hits[0])] = d
    n_dates = max(date_idx.values()) + 1
    date_values = np.empty((driver.n_paths, n_dates, n)) if store_dates else None
    grid_values = np.empty((driver.n_paths, len(grid), n)) if store_grid else None

    def record(i_grid: int):
        d = date_idx.get(i_grid)
        if d is None and not store_grid:
            return
        libors = np.expm1(log_f) / delta
        if store_grid:
            grid_values[:, i_grid, :] = libors
        if d is None:
            return
        if store_dates:
            date_values[:, d, :] = libors
        if 1 <= d <= n - 1:
            fixings[:, d] = libors[:, d]
            ratios = np.exp(log_f[:, d + 1 : n]) / (1.0 + delta * l0[d + 1 : n])
            fixing_weights[:, d] = np.prod(ratios, axis=1)

    record(0)
    for i in range(len(grid) - 1):
        j = tenor.index_of(grid[i])
        log_f += model.drift_table[j] * dts[i] + model.vols.values[j] * dh[i][:, None]
        record(i + 1)

    return LiborPathSet(
        tenor=tenor,
        scheme="fpm",
        seed=int(seed),
        grid=grid,
        initial_libors=l0,
        fixings=fixings,
        fixing_weights=fixing_weights,
        date_values=date_values,
        grid_values=grid_values,
        antithetic=antithetic,
    )


def write_caplet_table(path, model: FpmModel, strikes) -> None:
    """Write the closed-form caplet surface as ``k,strike,price,implied_vol``.

    The implied-vol column is left blank when the price violates the
    nonnegative-rate bounds of the Black formula (possible here: the model
    admits negative fixings).
    """
    from .errors import PriceBoundsError
    from .pricing import implied_vol

    with open(path, "w", encoding="utf-8") as fh:
        fh.write("k,strike,price,implied_vol\n")
        for k in model.tenor.rate_indices:
            for strike in strikes:
                price = caplet_price_fourier(model, k, strike)
                iv = ""
                if strike > 0.0 and model.curve.libor(k) > 0.0:
                    try:
                        value = implied_vol(
                            price,
                            model.curve.libor(k),
                            strike,
                            model.delta,
                            model.curve.bond(k + 1),
                            expiry=model.tenor.dates[k],
                        )
                        iv = f"{value:.17g}"
                    except PriceBoundsError:
                        iv = ""
                fh.write(f"{k},{strike:.17g},{price:.17g},{iv}\n")


def negative_rate_fraction(paths: LiborPathSet, k: Optional[int] = None) -> float:
    """Empirical probability of a negative fixing (per rate or overall)."""
    fix = paths.fixings[:, 1:] if k is None else paths.fixings[:, k]
    fix = fix[~np.isnan(fix)]
    return float(np.mean(fix < 0.0))


def log_forward_moment(model: FpmModel, k: int, w) -> complex:
    """Moment function E^{T_{k+1}}[exp(w log F(T_k, T_k, T_{k+1}))].

    Under the T_{k+1} forward measure the driver is a time-inhomogeneous
    tilt of the terminal one, so the exponent integrates interval by
    interval:

        log M(w) = w log F(0) + sum_j delta_j [ w beta_k(j)
                   + kappa(w lambda_k(j) + Lambda_{k+1}(j)) - kappa(Lambda_{k+1}(j)) ].
    """
    delta = model.tenor.delta
    f0 = 1.0 + delta * model.curve.libor(k)
    out = w * math.log(f0)
    for j in range(k):
        lam = model.vols.values[j, k]
        tail = model.loading_tails[j, k + 1]
        out = out + delta * (
            w * model.drift_table[j, k]
            + model.chars.cumulant(w * lam + tail)
            - model.chars.cumulant(tail)
        )
    return np.exp(out)


def _damping_bound(model: FpmModel, k: int) -> float:
    """Largest real w with the tilted cumulants finite for rate k."""
    bound = model.chars.exp_moment_bound * _DOMAIN_MARGIN
    if math.isinf(bound):
        return math.inf
    w_hi = math.inf
    for j in range(k):
        lam = model.vols.values[j, k]
        tail = model.loading_tails[j, k + 1]
        if lam > 0.0:
            w_hi = min(w_hi, (bound - tail) / lam)
        elif lam < 0.0:
            w_hi = min(w_hi, (-bound - tail) / lam)
    return w_hi


def caplet_price_fourier(model: FpmModel, k: int, strike: float) -> float:
    """Caplet value B(0, T_{k+1}) delta E^{T_{k+1}}[(L(T_k, T_k) - strike)^+].

    The accrual-scaled payoff delta (L - K)^+ equals a call on the forward
    price with strike 1 + delta K, so a one-dimensional damped Fourier
    inversion of the forward price's moment function prices it; damping
    sits at the midpoint of the admissible strip.
    """
    if not 1 <= k <= model.tenor.n - 1:
        raise LiborLabError(f"rate index {k} outside 1..{model.tenor.n - 1}")
    delta = model.tenor.delta
    if strike <= -1.0 / delta:
        raise LiborLabError(f"strike must exceed -1/delta = {-1.0 / delta}")
    strike_factor = 1.0 + delta * strike
    discount = model.curve.bond(k + 1)

    if not any(model.vols.values[j, k] != 0.0 for j in range(k)):
        return discount * delta * max(model.curve.libor(k) - strike, 0.0)

    damping = select_damping(_damping_bound(model, k))
    value = damped_call_expectation(
        lambda w: log_forward_moment(model, k, w), strike_factor, damping
    )
    return discount * value
