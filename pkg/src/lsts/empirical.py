"""Empirical spectral distance processes and their sup-statistics.

The distance process contrasts the time-localized cumulative spectrum with
its time-averaged counterpart on the block/frequency grid; scaled by sqrt(T),
its supremum over the unit square is the Kolmogorov-Smirnov type test
statistic.  A second construction does the same from the pre-periodogram on
the full-resolution grid.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .spectral import LocalPeriodogramMatrix, SpectralGrid, pre_periodogram_matrix

TWO_PI = 2.0 * np.pi


def distance_values(estimates: np.ndarray, denom: float) -> np.ndarray:
    """Cumulative-contrast values over all grid corners.

    For an R x C matrix P of spectral estimates this is

        V[j, k] = (1/denom) ( sum_{j'<=j, k'<=k} P - (j/R) sum_{j'<=R, k'<=k} P ),

    computed with one pass of 2-D cumulative sums.  Row j = R is exactly zero
    by cancellation.  Batched over leading axes.
    """
    S = estimates.cumsum(axis=-2).cumsum(axis=-1)
    R = S.shape[-2]
    frac = (np.arange(1, R + 1) / R)[:, None]
    return (S - frac * S[..., -1:, :]) / denom


def sup_statistic(values: np.ndarray, T: int) -> np.ndarray:
    """sqrt(T) * max |values| over the trailing two axes.

    The process is piecewise constant in (v, omega), so the max over grid
    corners exhausts the supremum over the whole unit square.
    """
    return np.sqrt(T) * np.abs(values).max(axis=(-2, -1))


def _write_surface_csv(fileobj, row_header, row_labels, col_labels, values):
    fileobj.write(row_header + "," + ",".join(f"{c:.10g}" for c in col_labels) + "\n")
    for lab, row in zip(row_labels, values):
        fileobj.write(f"{lab:.10g}," + ",".join(f"{v:.17g}" for v in row) + "\n")


@dataclass
class DistanceProcess:
    """Distance process on the M x N/2 grid; entry (j, k) is the value at (j/M, 2k/N)."""

    values: np.ndarray
    grid: SpectralGrid
    sup_stat: float

    def to_csv(self, fileobj) -> None:
        """Matrix as CSV: header row of frequencies, first column of midpoints."""
        _write_surface_csv(fileobj, "u", self.grid.midpoints, self.grid.frequencies, self.values)


@dataclass
class PreDistanceProcess:
    """Pre-periodogram distance process on the T x floor(T/2) grid (j/T, 2k/T)."""

    values: np.ndarray
    T: int
    sup_stat: float

    def to_csv(self, fileobj) -> None:
        T = self.T
        times = np.arange(1, T + 1) / T
        freqs = TWO_PI * np.arange(1, T // 2 + 1) / T
        _write_surface_csv(fileobj, "u", times, freqs, self.values)


def distance_process(periodograms: LocalPeriodogramMatrix) -> DistanceProcess:
    """Distance process of a local periodogram matrix."""
    T = periodograms.grid.T
    vals = distance_values(periodograms.values, T)
    return DistanceProcess(values=vals, grid=periodograms.grid, sup_stat=float(sup_statistic(vals, T)))


def pre_distance_process(x: np.ndarray) -> PreDistanceProcess:
    """Distance process built from the pre-periodogram of the series."""
    x = np.asarray(x, dtype=float)
    T = x.shape[0]
    if T < 8:
        raise ValueError(f"series too short for the pre-periodogram process: T={T}")
    vals = distance_values(pre_periodogram_matrix(x), T * T)
    return PreDistanceProcess(values=vals, T=T, sup_stat=float(sup_statistic(vals, T)))


def limit_covariance_h0(
    f: Callable[[float], float], v1: float, omega1: float, v2: float, omega2: float
) -> float:
    """Covariance of the limiting Gaussian process under stationarity.

    (min(v1,v2) - v1 v2) / (2 pi) * int_0^{pi min(omega1,omega2)} f(l)^2 dl
    for a stationary spectral density f, by adaptive quadrature.
    """
    factor = (min(v1, v2) - v1 * v2) / TWO_PI
    upper = np.pi * min(omega1, omega2)
    if factor == 0.0 or upper <= 0.0:
        return 0.0
    integral, _ = quad(lambda lam: f(lam) ** 2, 0.0, upper, epsabs=1e-12, epsrel=1e-12, limit=200)
    return factor * integral
