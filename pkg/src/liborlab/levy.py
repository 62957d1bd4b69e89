"""Terminal-measure driver: Brownian part plus compound-Poisson jumps.

The driver H is a Levy process with canonical decomposition

    H_t = b * t + sqrt(c) * W_t + (sum of jumps up to t  -  t * intensity * E[jump]),

i.e. the jump part is compensated, so H is a martingale plus the linear
drift b * t.  Its cumulant (Levy-Khintchine exponent with the jump
integrand e^{zx} - 1 - zx) is

    kappa(z) = b z + c z^2 / 2 + intensity * (m(z) - 1 - z * E[jump]),

where m is the moment generating function of the jump-size law, and
exp(z H_t - t kappa(z)) is a martingale for z inside the moment domain.

Finite activity keeps path simulation exact: Gaussian increments, Poisson
jump counts and i.i.d. jump sizes per step.  Loadings in this package are
piecewise constant on the simulation grid, so the per-step jump sum is a
sufficient statistic and is what ``DriverPathSet`` stores.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError, LiborLabError


class NormalJumps:
    """Gaussian jump sizes, mean ``mean`` and standard deviation ``sd``."""

    def __init__(self, mean: float, sd: float):
        if sd <= 0.0:
            raise LiborLabError(f"jump-size sd must be positive, got {sd}")
        self.mean = float(mean)
        self.sd = float(sd)

    def mgf(self, z):
        return np.exp(z * self.mean + 0.5 * z * z * self.sd**2)

    def exp_moment_bound(self) -> float:
        return math.inf

    def jump_mean(self) -> float:
        return self.mean

    def quadrature(self, order: int):
        """Nodes and probability weights integrating the jump-size density."""
        h, w = np.polynomial.hermite.hermgauss(order)
        return self.mean + math.sqrt(2.0) * self.sd * h, w / math.sqrt(math.pi)

    def sample(self, rng: np.random.Generator, shape):
        return rng.normal(self.mean, self.sd, size=shape)

    def __repr__(self):
        return f"NormalJumps(mean={self.mean}, sd={self.sd})"


class DoubleExponentialJumps:
    """Two-sided exponential (Kou) jump sizes.

    With probability ``p`` the jump is +Exp(alpha_pos), otherwise
    -Exp(alpha_neg).  Exponential moments exist for |z| < min(alpha_pos,
    alpha_neg).
    """

    def __init__(self, p: float, alpha_pos: float, alpha_neg: float):
        if not 0.0 <= p <= 1.0:
            raise LiborLabError(f"up-jump probability must lie in [0,1], got {p}")
        if alpha_pos <= 0.0 or alpha_neg <= 0.0:
            raise LiborLabError("jump tail rates must be positive")
        self.p = float(p)
        self.alpha_pos = float(alpha_pos)
        self.alpha_neg = float(alpha_neg)

    def mgf(self, z):
        zr = np.real(np.asarray(z))
        if np.any(zr >= self.alpha_pos) or np.any(zr <= -self.alpha_neg):
            raise DomainError(
                f"jump-size mgf diverges at Re(z)={zr}",
                max_admissible=self.exp_moment_bound(),
            )
        return self.p * self.alpha_pos / (self.alpha_pos - z) + (
            1.0 - self.p
        ) * self.alpha_neg / (self.alpha_neg + z)

    def exp_moment_bound(self) -> float:
        return min(self.alpha_pos, self.alpha_neg)

    def jump_mean(self) -> float:
        return self.p / self.alpha_pos - (1.0 - self.p) / self.alpha_neg

    def quadrature(self, order: int):
        """Two Gauss-Laguerre half-lines glued at the origin."""
        y, w = np.polynomial.laguerre.laggauss(order)
        nodes = np.concatenate([y / self.alpha_pos, -y / self.alpha_neg])
        weights = np.concatenate([self.p * w, (1.0 - self.p) * w])
        return nodes, weights

    def sample(self, rng: np.random.Generator, shape):
        up = rng.random(size=shape) < self.p
        mag_up = rng.exponential(1.0 / self.alpha_pos, size=shape)
        mag_dn = rng.exponential(1.0 / self.alpha_neg, size=shape)
        return np.where(up, mag_up, -mag_dn)

    def __repr__(self):
        return (
            f"DoubleExponentialJumps(p={self.p}, alpha_pos={self.alpha_pos}, "
            f"alpha_neg={self.alpha_neg})"
        )


@dataclass(frozen=True)
class LevyCharacteristics:
    """Driver triplet under the terminal measure.

    Attributes
    ----------
    drift_b : float
        Linear drift per year of the canonical decomposition.
    diffusion_c : float
        Variance rate of the continuous martingale part (>= 0).
    jump_intensity : float
        Jumps per year (>= 0); zero means a Brownian driver.
    jump_law : NormalJumps or DoubleExponentialJumps, optional
        Jump-size distribution; required when the intensity is positive.
    """

    drift_b: float = 0.0
    diffusion_c: float = 1.0
    jump_intensity: float = 0.0
    jump_law: Optional[object] = None

    def __post_init__(self):
        if self.diffusion_c < 0.0:
            raise LiborLabError(f"diffusion coefficient must be >= 0, got {self.diffusion_c}")
        if self.jump_intensity < 0.0:
            raise LiborLabError(f"jump intensity must be >= 0, got {self.jump_intensity}")
        if self.jump_intensity > 0.0 and self.jump_law is None:
            raise LiborLabError("positive jump intensity requires a jump law")

    @property
    def has_jumps(self) -> bool:
        return self.jump_intensity > 0.0 and self.jump_law is not None

    @property
    def exp_moment_bound(self) -> float:
        """Largest z* with finite exponential moments on |z| < z*."""
        if not self.has_jumps:
            return math.inf
        return self.jump_law.exp_moment_bound()

    @property
    def jump_mean_rate(self) -> float:
        """Compensator drift intensity * E[jump] per year."""
        if not self.has_jumps:
            return 0.0
        return self.jump_intensity * self.jump_law.jump_mean()

    def check_domain(self, z) -> None:
        bound = self.exp_moment_bound
        zr = np.abs(np.real(np.asarray(z)))
        if np.any(zr >= bound):
            raise DomainError(
                f"|Re z| = {float(np.max(zr))} outside the moment domain (bound {bound})",
                max_admissible=bound,
            )

    def cumulant(self, z):
        """kappa(z); accepts real or complex arguments inside the domain."""
        self.check_domain(z)
        z = np.asarray(z)
        out = self.drift_b * z + 0.5 * self.diffusion_c * z * z
        if self.has_jumps:
            out = out + self.jump_intensity * (
                self.jump_law.mgf(z) - 1.0 - z * self.jump_law.jump_mean()
            )
        return out if out.ndim else out[()]

    def mean(self, t: float) -> float:
        """E[H_t]; the jump part is compensated, so only the drift remains."""
        return self.drift_b * t

    def jump_quadrature(self, order: int = 48):
        """Probability-weighted nodes of the jump-size law."""
        if not self.has_jumps:
            return np.zeros(0), np.zeros(0)
        return self.jump_law.quadrature(order)


def shifted_compensator_factor(chars: LevyCharacteristics, lambda_sum: float, x):
    """Exponential tilt e^{x * lambda_sum} applied to the jump compensator.

    This is the factor relating the compensator under a forward measure of
    the forward price model to the terminal one; ``lambda_sum`` must lie in
    the moment domain so the tilted law stays integrable.
    """
    chars.check_domain(lambda_sum)
    return np.exp(np.asarray(x, dtype=float) * lambda_sum)


@dataclass(frozen=True)
class DriverPathSet:
    """Per-step driver increments on a fixed grid.

    ``dw[i]`` holds the standard Brownian increments over
    [grid[i], grid[i+1]] for every path, and ``jump_sums[i]`` the summed raw
    jump sizes in that window (``None`` for a continuous driver).  The same
    seed always regenerates an identical object.
    """

    grid: np.ndarray = field(repr=False)
    dw: np.ndarray = field(repr=False)
    jump_sums: Optional[np.ndarray] = field(repr=False)
    seed: int
    antithetic: bool = False

    @property
    def n_paths(self) -> int:
        return self.dw.shape[1]

    @property
    def n_steps(self) -> int:
        return self.dw.shape[0]

    @property
    def dts(self) -> np.ndarray:
        return np.diff(self.grid)

    def increments(self, chars: LevyCharacteristics) -> np.ndarray:
        """Driver increments dH per (step, path) for the given triplet."""
        dts = self.dts[:, None]
        dh = chars.drift_b * dts + math.sqrt(chars.diffusion_c) * self.dw
        if chars.has_jumps:
            if self.jump_sums is None:
                raise LiborLabError("path set was generated without jumps")
            dh = dh + self.jump_sums - chars.jump_mean_rate * dts
        return dh

    def cumulative(self, chars: LevyCharacteristics) -> np.ndarray:
        """H on the grid, shape (len(grid), n_paths), starting at 0."""
        dh = self.increments(chars)
        out = np.zeros((len(self.grid), self.n_paths))
        np.cumsum(dh, axis=0, out=out[1:])
        return out


def simulate_driver(
    chars: LevyCharacteristics,
    grid,
    n_paths: int,
    seed: int,
    antithetic: bool = False,
    max_jumps_per_step: int = 64,
) -> DriverPathSet:
    """Exact path simulation of the driver on ``grid``.

    Brownian increments are N(0, dt) per step (scaled by sqrt(c) when
    consumed), jump counts are Poisson(intensity * dt) and jump sizes are
    i.i.d. from the jump law.  With ``antithetic=True`` the second half of
    the paths negates the Brownian increments of the first half while
    sharing its jumps; ``n_paths`` must then be even.
    """
    grid = np.asarray(grid, dtype=float)
    if len(grid) < 2:
        raise LiborLabError("simulation grid needs at least two points")
    if np.any(np.diff(grid) <= 0.0):
        raise LiborLabError("simulation grid must be strictly increasing")
    if n_paths < 1:
        raise LiborLabError(f"need at least one path, got {n_paths}")
    if antithetic and n_paths % 2:
        raise LiborLabError("antithetic sampling needs an even path count")

    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    n_base = n_paths // 2 if antithetic else n_paths
    dts = np.diff(grid)
    n_steps = len(dts)

    dw = rng.normal(0.0, np.sqrt(dts)[:, None], size=(n_steps, n_base))

    jump_sums = None
    if chars.has_jumps:
        counts = rng.poisson(chars.jump_intensity * dts[:, None], size=(n_steps, n_base))
        m = int(counts.max())
        if m > max_jumps_per_step:
            raise LiborLabError(
                f"{m} jumps in one step exceeds the cap {max_jumps_per_step}; refine the grid"
            )
        jump_sums = np.zeros((n_steps, n_base))
        if m > 0:
            sizes = chars.jump_law.sample(rng, (n_steps, n_base, m))
            mask = np.arange(m) < counts[..., None]
            jump_sums = np.sum(sizes * mask, axis=2)

    if antithetic:
        dw = np.concatenate([dw, -dw], axis=1)
        if jump_sums is not None:
            jump_sums = np.concatenate([jump_sums, jump_sums], axis=1)

    return DriverPathSet(
        grid=grid, dw=dw, jump_sums=jump_sums, seed=int(seed), antithetic=antithetic
    )
