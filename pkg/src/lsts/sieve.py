"""AR-sieve bootstrap calibration of the stationarity test.

Fits autoregressions by Yule-Walker/Levinson-Durbin, selects the order with a
Whittle-type AIC, simulates Gaussian pseudo-series from the fitted recursion,
and turns the sup-statistic plus its bootstrap replicates into a test
decision.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter, lfiltic

from ._seeds import MASK64, normal_generator
from .empirical import distance_values, sup_statistic
from .spectral import (
    BadWindowError,
    SpectralGrid,
    _block_periodograms,
    make_grid,
    pre_periodogram_matrix,
    stationary_periodogram_all,
)

TWO_PI = 2.0 * np.pi

ESTIMATORS = ("local", "pre")

_PRE_CHUNK_BUDGET = 1 << 24  # floats per (chunk, T, T) lag-product tensor


def _pre_chunk(T: int) -> int:
    return max(1, min(64, _PRE_CHUNK_BUDGET // (T * T)))


class DegenerateSeriesError(ValueError):
    """Sample autocovariance at lag zero vanishes (constant series)."""


@dataclass
class ArFit:
    """Fitted autoregression of order p.

    sigma2 is the residual innovation variance, recomputed from the one-step
    prediction errors with mean centering (not the Levinson-Durbin variance).
    aic_trace holds the criterion value per candidate order when the fit came
    from order selection.
    """

    order: int
    coeffs: np.ndarray
    sigma2: float
    aic_trace: np.ndarray | None = None
    candidate_orders: np.ndarray | None = None


@dataclass
class TestResult:
    statistic: float
    replicates: np.ndarray
    critical_value: float
    p_value: float
    reject: bool
    T: int
    N: int | None
    M: int | None
    B: int
    alpha: float
    order: int
    seed: int
    estimator: str


@dataclass
class TestDraws:
    """Observed statistic and bootstrap replicates, before any alpha is chosen."""

    statistic: float
    replicates: np.ndarray
    fit: ArFit
    grid: SpectralGrid | None
    series: np.ndarray
    seed: int
    estimator: str


def autocovariance(x: np.ndarray, max_lag: int) -> np.ndarray:
    """Biased, mean-centered sample autocovariances gamma(0..max_lag)."""
    x = np.asarray(x, dtype=float)
    T = x.shape[0]
    if max_lag >= T:
        raise ValueError(f"max_lag={max_lag} must be below the series length {T}")
    xc = x - x.mean()
    return np.array([xc[: T - h] @ xc[h:] for h in range(max_lag + 1)]) / T


def _levinson_all(gamma: np.ndarray, p_max: int) -> list[np.ndarray]:
    """Levinson-Durbin recursion; returns the coefficient vector of each order."""
    fits = []
    a = np.zeros(0)
    pred_var = gamma[0]
    for m in range(1, p_max + 1):
        if pred_var <= 0:
            raise DegenerateSeriesError(
                f"prediction variance vanished at order {m}; autocovariance not positive definite"
            )
        if m == 1:
            kappa = gamma[1] / pred_var
        else:
            kappa = (gamma[m] - a @ gamma[m - 1 : 0 : -1]) / pred_var
        a = np.concatenate([a - kappa * a[::-1], [kappa]])
        pred_var *= 1.0 - kappa * kappa
        fits.append(a.copy())
    return fits


def _residual_variance(x: np.ndarray, coeffs: np.ndarray) -> float:
    """Mean-centered variance of the one-step residuals z_t = X_t - sum a_j X_{t-j}."""
    p = len(coeffs)
    T = x.shape[0]
    z = x[p:].copy()
    for j in range(1, p + 1):
        z -= coeffs[j - 1] * x[p - j : T - j]
    z -= z.mean()
    return float(z @ z / (T - p))


def yule_walker(x: np.ndarray, p: int) -> ArFit:
    """Fit an AR(p) by solving the Toeplitz moment equations.

    The biased autocovariance estimate keeps the fitted polynomial causal.
    """
    x = np.asarray(x, dtype=float)
    T = x.shape[0]
    if p < 1:
        raise ValueError("order p must be at least 1")
    if p >= T / 2:
        raise ValueError(f"order p={p} too large for series length {T}")
    gamma = autocovariance(x, p)
    if gamma[0] == 0.0:
        raise DegenerateSeriesError("constant series: autocovariance at lag 0 is zero")
    coeffs = _levinson_all(gamma, p)[-1]
    sigma2 = _residual_variance(x, coeffs)
    if not sigma2 > 0:
        raise DegenerateSeriesError("residual variance is not positive")
    return ArFit(order=p, coeffs=coeffs, sigma2=sigma2)


def ar_spectral_density(fit: ArFit, lam):
    """Spectral density sigma^2 / (2 pi |1 - sum_j a_j e^{-i lam j}|^2) of the fit."""
    lam = np.asarray(lam, dtype=float)
    transfer = np.ones_like(lam, dtype=complex)
    for j, c in enumerate(fit.coeffs, start=1):
        transfer = transfer - c * np.exp(-1j * lam * j)
    out = fit.sigma2 / (TWO_PI * np.abs(transfer) ** 2)
    if out.ndim == 0:
        return float(out)
    return out


def default_order_range(T: int) -> tuple[int, int]:
    """Default AIC search range 1..min(ceil(10 log10 T), T//8)."""
    p_max = min(int(np.ceil(10.0 * np.log10(T))), T // 8)
    return 1, max(1, p_max)


def aic_select(x: np.ndarray, p_min: int, p_max: int) -> ArFit:
    """Order selection by the Whittle form of the AIC.

    For each candidate p the criterion is

        (1/T) sum_{k=1}^{T/2} [ log f_p(lambda_{k,T}) + I(lambda_{k,T}) / f_p(lambda_{k,T}) ] + p/T

    with f_p the fitted AR(p) spectral density and I the full-sample
    periodogram; ties break to the smallest order.
    """
    x = np.asarray(x, dtype=float)
    T = x.shape[0]
    if not 1 <= p_min <= p_max:
        raise ValueError(f"need 1 <= p_min <= p_max, got ({p_min}, {p_max})")
    if p_max >= T / 4:
        raise ValueError(f"p_max={p_max} too large for series length {T}")
    gamma = autocovariance(x, p_max)
    if gamma[0] == 0.0:
        raise DegenerateSeriesError("constant series: autocovariance at lag 0 is zero")
    all_fits = _levinson_all(gamma, p_max)
    pgram = stationary_periodogram_all(x)

    orders = np.arange(p_min, p_max + 1)
    trace = np.empty(len(orders))
    sigmas = np.empty(len(orders))
    for i, p in enumerate(orders):
        coeffs = all_fits[p - 1]
        sigma2 = _residual_variance(x, coeffs)
        if not sigma2 > 0:
            raise DegenerateSeriesError(f"residual variance vanished at order {p}")
        poly = np.zeros(T)
        poly[0] = 1.0
        poly[1 : p + 1] = -coeffs
        gain = np.abs(np.fft.rfft(poly)[1 : T // 2 + 1]) ** 2
        f = sigma2 / (TWO_PI * gain)
        trace[i] = np.sum(np.log(f) + pgram / f) / T + p / T
        sigmas[i] = sigma2

    best = int(np.argmin(trace))
    p = int(orders[best])
    return ArFit(
        order=p,
        coeffs=all_fits[p - 1],
        sigma2=float(sigmas[best]),
        aic_trace=trace,
        candidate_orders=orders,
    )


def _ar_poly(fit: ArFit) -> np.ndarray:
    return np.r_[1.0, -np.asarray(fit.coeffs, dtype=float)]


def bootstrap_replicate(x: np.ndarray, fit: ArFit, seed: int) -> np.ndarray:
    """One pseudo-series: first p values copied, then the fitted recursion
    driven by fresh N(0, sigma2) innovations."""
    x = np.asarray(x, dtype=float)
    T = x.shape[0]
    p = fit.order
    noise = normal_generator(seed).standard_normal(T - p) * np.sqrt(fit.sigma2)
    if p == 0:
        return noise
    a_poly = _ar_poly(fit)
    zi = lfiltic([1.0], a_poly, x[p - 1 :: -1])
    tail, _ = lfilter([1.0], a_poly, noise, zi=zi)
    return np.concatenate([x[:p], tail])


def _replicate_statistics(
    x: np.ndarray, fit: ArFit, B: int, seed: int, estimator: str, grid: SpectralGrid | None
) -> np.ndarray:
    """Sup-statistics of B bootstrap pseudo-series.

    Replicate i draws its innovations from the stream keyed by seed XOR i, so
    the result is identical under any batching or parallel schedule.
    """
    T = x.shape[0]
    p = fit.order
    noise = np.empty((B, T - p))
    for i in range(1, B + 1):
        noise[i - 1] = normal_generator((seed ^ i) & MASK64).standard_normal(T - p)
    noise *= np.sqrt(fit.sigma2)
    if p > 0:
        a_poly = _ar_poly(fit)
        zi = lfiltic([1.0], a_poly, x[p - 1 :: -1])
        tails, _ = lfilter([1.0], a_poly, noise, axis=-1, zi=np.tile(zi, (B, 1)))
        series = np.concatenate([np.tile(x[:p], (B, 1)), tails], axis=1)
    else:
        series = noise

    if estimator == "local":
        pgrams = _block_periodograms(series.reshape(B, grid.M, grid.N))
        return sup_statistic(distance_values(pgrams, T), T)
    stats = np.empty(B)
    step = _pre_chunk(T)
    for lo in range(0, B, step):
        chunk = series[lo : lo + step]
        stats[lo : lo + step] = sup_statistic(
            distance_values(pre_periodogram_matrix(chunk), T * T), T
        )
    return stats


def default_window(T: int) -> int:
    """Default block length: even divisor of T in [T^0.5, T^0.75] closest to T^(5/8).

    Falls back to the closest even non-divisor in the range (the series tail
    is then truncated to a multiple of N).  Ties prefer the larger window.
    """
    lo, hi = T**0.5, T**0.75
    target = T**0.625
    candidates = [n for n in range(4, T // 2 + 1, 2) if lo <= n <= hi and T % n == 0]
    if not candidates:
        candidates = [n for n in range(4, T // 2 + 1, 2) if lo <= n <= hi and T // n >= 2]
    if not candidates:
        candidates = [n for n in range(4, T // 2 + 1, 2) if T // n >= 2]
    if not candidates:
        raise ValueError(f"no admissible window length for T={T}")
    return min(candidates, key=lambda n: (abs(n - target), -n))


def bootstrap_draws(
    x: np.ndarray,
    N: int | None = None,
    B: int = 200,
    p_min: int | None = None,
    p_max: int | None = None,
    seed: int = 0,
    estimator: str = "local",
) -> TestDraws:
    """Observed sup-statistic plus B bootstrap replicate statistics.

    For the local estimator the series tail is truncated to a multiple of the
    window length N (with a warning); the pre estimator uses the series as is.
    The AR order is AIC-selected in [p_min, p_max].
    """
    if estimator not in ESTIMATORS:
        raise ValueError(f"estimator must be one of {ESTIMATORS}, got {estimator!r}")
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError("series must be one-dimensional")
    if not np.all(np.isfinite(x)):
        raise ValueError("series contains non-finite values")
    if B < 1:
        raise ValueError("B must be positive")

    grid = None
    if estimator == "local":
        if N is None:
            N = default_window(x.shape[0])
        if N % 2 != 0 or N < 4:
            raise BadWindowError(f"N must be an even integer >= 4, got {N}")
        T_use = (x.shape[0] // N) * N
        if T_use < x.shape[0]:
            warnings.warn(
                f"series length {x.shape[0]} not divisible by N={N}; "
                f"truncating tail to T={T_use}",
                stacklevel=2,
            )
            x = x[:T_use]
        grid = make_grid(T_use, N)
    T = x.shape[0]
    if T < 8:
        raise ValueError(f"series too short: T={T}")

    lo, hi = default_order_range(T)
    p_lo = lo if p_min is None else p_min
    p_hi = hi if p_max is None else p_max
    fit = aic_select(x, p_lo, p_hi)

    if estimator == "local":
        pgrams = _block_periodograms(x.reshape(grid.M, grid.N))
        statistic = float(sup_statistic(distance_values(pgrams, T), T))
    else:
        statistic = float(sup_statistic(distance_values(pre_periodogram_matrix(x), T * T), T))

    replicates = _replicate_statistics(x, fit, B, seed, estimator, grid)
    return TestDraws(
        statistic=statistic,
        replicates=replicates,
        fit=fit,
        grid=grid,
        series=x,
        seed=seed,
        estimator=estimator,
    )


def order_statistic_index(B: int, alpha: float) -> int:
    """1-based index floor((1-alpha) B) of the bootstrap order statistic."""
    k = int(np.floor((1.0 - alpha) * B + 1e-9))
    if not 1 <= k <= B:
        raise ValueError(f"alpha={alpha} with B={B} leaves no admissible order statistic")
    return k


def decide(statistic: float, replicates: np.ndarray, alpha: float) -> tuple[float, float, bool]:
    """(critical value, p-value, decision) from replicate statistics.

    The critical value is the floor((1-alpha)B)-th order statistic; the
    p-value is (1 + #{replicates >= statistic}) / (B + 1); rejection follows
    the order-statistic rule, not the p-value.
    """
    B = len(replicates)
    k = order_statistic_index(B, alpha)
    critical = float(np.sort(replicates)[k - 1])
    p_value = float((1 + np.count_nonzero(replicates >= statistic)) / (B + 1))
    return critical, p_value, bool(statistic > critical)


def run_test(
    x: np.ndarray,
    N: int | None = None,
    B: int = 200,
    alpha: float = 0.05,
    p_min: int | None = None,
    p_max: int | None = None,
    seed: int = 0,
    estimator: str = "local",
) -> TestResult:
    """Full bootstrap test of second-order stationarity.

    Parameters
    ----------
    x : array_like
        Observed series.
    N : int, optional
        Window length for the local periodogram (even, at least 4).  Chosen
        automatically when omitted; ignored by the pre estimator.
    B : int
        Number of bootstrap replicates (B >= 99 recommended).
    alpha : float
        Nominal level in (0, 1).
    p_min, p_max : int, optional
        AIC search range for the sieve order; defaults to 1..min(ceil(10
        log10 T), T//8).
    seed : int
        Base seed; replicate i uses seed XOR i.
    estimator : {"local", "pre"}
        Which distance process drives the statistic.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    draws = bootstrap_draws(x, N=N, B=B, p_min=p_min, p_max=p_max, seed=seed, estimator=estimator)
    critical, p_value, reject = decide(draws.statistic, draws.replicates, alpha)
    return TestResult(
        statistic=draws.statistic,
        replicates=draws.replicates,
        critical_value=critical,
        p_value=p_value,
        reject=reject,
        T=draws.series.shape[0],
        N=draws.grid.N if draws.grid is not None else None,
        M=draws.grid.M if draws.grid is not None else None,
        B=B,
        alpha=alpha,
        order=draws.fit.order,
        seed=seed,
        estimator=estimator,
    )
