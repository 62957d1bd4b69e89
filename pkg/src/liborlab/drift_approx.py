"""Drift approximation schemes for the market model.

Three schemes trade drift fidelity for tractability, each producing paths
comparable against the exact simulation on the same driver increments:

* ``frozen``  - the forward-price weights delta L / (1 + delta L) in the
  drift (and in the jump tilt factors) are pinned to their time-zero
  values.  The drift becomes deterministic, so each log-rate is a
  deterministic integral plus a loaded driver integral; in the Brownian
  case the rate is exactly log-normal with closed-form mean and variance.
* ``picard1`` - for continuous drivers only: the weight processes are
  replaced by their first Picard iterate, which is Gaussian because the
  iterate's coefficients are evaluated at the constant zeroth iterate.
  Order 0 reproduces the frozen scheme identically.
* ``taylor``  - universal: each rate's log is expanded to first order in a
  perturbation of its dynamics.  The first-variation processes carry the
  frozen drift plus the loaded driver integrals, and the exact drift is
  then evaluated with the subsequent rates replaced by their first-order
  approximations L(0, T_l) exp(Y(t, T_l)).

All three exponentiate, so approximate rates stay strictly positive.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import LiborLabError, UnsupportedSchemeError
from .levy import DriverPathSet
from .lmm import (
    LiborPathSet,
    LmmModel,
    _FrozenWeights,
    _PicardWeights,
    _TaylorWeights,
    _drift_all,
    _JumpQuadrature,
    _simulate_core,
    forward_price_weights,
    picard_tables_row,
)


@dataclass(frozen=True)
class PicardState:
    """Constant zeroth iterate and the per-interval SDE coefficient tables.

    ``w0[k] = delta L(0,T_k) / (1 + delta L(0,T_k))`` and the tables hold
    the drift and diffusion coefficients of the weight process of each rate
    on each tenor interval, both evaluated at ``w0``.
    """

    w0: np.ndarray = field(repr=False)
    drift_table: np.ndarray = field(repr=False)
    vol_table: np.ndarray = field(repr=False)


def picard_coefficients(model: LmmModel) -> PicardState:
    """Tabulate the Gaussian first-iterate coefficients per tenor interval.

    Raises
    ------
    UnsupportedSchemeError
        For jump drivers; the iterate's derivation assumes continuous paths.
    """
    if model.chars.has_jumps:
        raise UnsupportedSchemeError("Picard approximation requires a continuous driver")
    n = model.tenor.n
    w0 = forward_price_weights(model.curve.libors, model.tenor.delta)
    drift_table = np.zeros((n, n))
    vol_table = np.zeros((n, n))
    for j in range(n):
        drift_table[j], vol_table[j] = picard_tables_row(
            w0, model.vols.values[j], model.chars.diffusion_c
        )
    return PicardState(w0=w0, drift_table=drift_table, vol_table=vol_table)


def frozen_drift_simulate(
    model: LmmModel,
    grid,
    n_paths: int,
    seed: int,
    driver: Optional[DriverPathSet] = None,
    store_dates: bool = False,
    store_grid: bool = False,
    antithetic: bool = False,
) -> LiborPathSet:
    """Simulation with the weights frozen at their time-zero values."""
    w0 = forward_price_weights(np.asarray(model.curve.libors), model.tenor.delta)
    provider = _FrozenWeights(w0)
    return _simulate_core(
        model, grid, n_paths, seed, provider, "frozen", driver, store_dates, store_grid, antithetic
    )


def picard_simulate(
    model: LmmModel,
    grid,
    n_paths: int,
    seed: int,
    order: int = 1,
    driver: Optional[DriverPathSet] = None,
    store_dates: bool = False,
    store_grid: bool = False,
    antithetic: bool = False,
) -> LiborPathSet:
    """Simulation with the drift weights replaced by a Picard iterate.

    ``order=0`` uses the constant zeroth iterate and coincides with the
    frozen-drift scheme; ``order=1`` uses the Gaussian first iterate driven
    by the shared Brownian path, making each rate log-normal conditional on
    the driver.
    """
    if model.chars.has_jumps:
        raise UnsupportedSchemeError("Picard approximation requires a continuous driver")
    if order not in (0, 1):
        raise LiborLabError(f"Picard order must be 0 or 1, got {order}")
    provider = _PicardWeights(model, n_paths, order)
    return _simulate_core(
        model,
        grid,
        n_paths,
        seed,
        provider,
        f"picard{order}",
        driver,
        store_dates,
        store_grid,
        antithetic,
    )


def taylor_simulate(
    model: LmmModel,
    grid,
    n_paths: int,
    seed: int,
    driver: Optional[DriverPathSet] = None,
    store_dates: bool = False,
    store_grid: bool = False,
    antithetic: bool = False,
) -> LiborPathSet:
    """First-order strong Taylor scheme on the shared driver path.

    The first variation of each log-rate,

        Y(t, T_k) = int_0^t beta0(s, T_k) ds + int_0^t lambda(s, T_k) dH_s,

    carries the deterministic frozen drift beta0 (the exact drift evaluated
    at the initial state).  The exact drift of each rate is then evaluated
    with every subsequent rate replaced by its first-order approximation
    L(0, T_l) exp(Y(t, T_l)), which decouples the system while tracking the
    realized weights to first order.
    """
    quad = _JumpQuadrature(model.chars, model.quad_order) if model.chars.has_jumps else None
    provider = _TaylorWeights(model, n_paths, quad)
    return _simulate_core(
        model, grid, n_paths, seed, provider, "taylor", driver, store_dates, store_grid, antithetic
    )


@dataclass(frozen=True)
class TaylorState:
    """Frozen drift table and first-variation paths of the Taylor scheme."""

    beta0_table: np.ndarray = field(repr=False)
    y_dates: np.ndarray = field(repr=False)
    grid: np.ndarray = field(repr=False)


def taylor_first_variation(
    model: LmmModel, grid, driver: DriverPathSet
) -> TaylorState:
    """First-variation paths Y recorded at the tenor dates of ``grid``."""
    grid = np.asarray(grid, dtype=float)
    table = frozen_drift_table(model, grid)
    dh = driver.increments(model.chars)
    y = np.zeros((driver.n_paths, model.tenor.n))
    dates = [t for t in model.tenor.dates if t <= grid[-1] + 1e-10]
    y_dates = np.zeros((driver.n_paths, len(dates), model.tenor.n))
    d = 1
    for i in range(len(grid) - 1):
        lam_row = model.vols.values[model.tenor.index_of(grid[i])]
        y += table[i] * (grid[i + 1] - grid[i]) + lam_row * dh[i][:, None]
        if d < len(dates) and abs(grid[i + 1] - dates[d]) <= 1e-10:
            y_dates[:, d, :] = y
            d += 1
    return TaylorState(beta0_table=table, y_dates=y_dates, grid=grid)


def frozen_drift_table(model: LmmModel, grid) -> np.ndarray:
    """Deterministic drift beta0 per (step, rate) on the given grid."""
    grid = np.asarray(grid, dtype=float)
    w0 = forward_price_weights(np.asarray(model.curve.libors), model.tenor.delta)[None, :]
    quad = _JumpQuadrature(model.chars, model.quad_order) if model.chars.has_jumps else None
    table = np.zeros((len(grid) - 1, model.tenor.n))
    for i in range(len(grid) - 1):
        lam_row = model.vols.values[model.tenor.index_of(grid[i])]
        table[i] = _drift_all(w0, lam_row, model.chars, quad)[0]
    return table


def frozen_drift_law(model: LmmModel, grid, k: int, t: float):
    """Mean and variance of log L(t, T_k) under the frozen-drift scheme.

    Only defined for continuous drivers, where the scheme's log-rate is
    Gaussian:  mean = log L(0,T_k) + int_0^t beta0,  var = int_0^t lambda^2 c.
    Both integrals are sums over steps because the integrands are piecewise
    constant on the grid.
    """
    if model.chars.has_jumps:
        raise UnsupportedSchemeError("closed-form law requires a continuous driver")
    grid = np.asarray(grid, dtype=float)
    hits = np.nonzero(np.abs(grid - t) <= 1e-10)[0]
    if not hits.size:
        raise LiborLabError(f"time {t} is not a grid point")
    stop = int(hits[0])
    table = frozen_drift_table(model, grid)
    dts = np.diff(grid)[:stop]
    lam = np.array(
        [model.vols.values[model.tenor.index_of(s), k] for s in grid[:stop]]
    )
    mean = float(np.log(model.curve.libor(k)) + np.sum(table[:stop, k] * dts))
    var = float(model.chars.diffusion_c * np.sum(lam**2 * dts))
    return mean, var
