"""Independent reference implementations used only by the tests.

These deliberately avoid the code paths they check: the convolution
oracle is a dense separable matrix product in real space (no FFT), and
the photon-statistics oracles are plain finite sums.
"""

import math

import numpy as np


def direct_gaussian_convolution(values: np.ndarray, pitch: float, sigma: float) -> np.ndarray:
    """Linear (non-circular) convolution with a sampled unit-mass Gaussian.

    Separable kernel applied as K @ V @ K.T with
    K[i, j] = exp(-(x_i - x_j)^2 / (2 sigma^2)) * pitch / sqrt(2 pi sigma^2).
    """
    n = values.shape[0]
    x = np.arange(n) * pitch
    kernel = np.exp(-((x[:, None] - x[None, :]) ** 2) / (2.0 * sigma ** 2))
    kernel *= pitch / math.sqrt(2.0 * math.pi * sigma ** 2)
    return kernel @ values @ kernel.T


def poisson_terms(n_bar: float, terms: int) -> list[float]:
    probs = [math.exp(-n_bar)]
    for n in range(1, terms + 1):
        probs.append(probs[-1] * n_bar / n)
    return probs


def brute_weighted_limit(n_bar: float, terms: int = 200) -> float:
    probs = poisson_terms(n_bar, terms)
    total = sum((n + 1) / (n + 2) * p for n, p in enumerate(probs) if n >= 1)
    return total / (1.0 - probs[0])


def brute_nmin(n_bar: float, eta: float, terms: int = 200) -> int:
    probs = poisson_terms(n_bar, terms)
    budget = (1.0 - probs[0]) * eta
    for nm in range(terms):
        if sum(probs[nm + 1:]) <= budget:
            return nm
    return terms


def brute_classical_limit(n_bar: float, eta: float, terms: int = 400) -> float:
    probs = poisson_terms(n_bar, terms)
    nm = brute_nmin(n_bar, eta, terms)
    tail = sum(probs[nm + 1:])
    weighted = sum((n + 1) / (n + 2) * p for n, p in enumerate(probs) if n >= nm + 1)
    gamma = eta * (1.0 - probs[0]) - tail
    return ((nm + 1) / (nm + 2) * gamma + weighted) / (gamma + tail)
