"""Non-convex rate bound: its stepsize, the bound itself and the sample complexity."""

from math import sqrt
from warnings import warn


def transient_time(n: int, Delta: float, L: float, sigma: float, tau_max: int) -> float:
    """Smallest T for which the rate bound applies: 1024 L Delta n tau_max / sigma^2."""
    return 1024.0 * L * Delta * n * tau_max / sigma**2


def theorem1_stepsize(n: int, Delta: float, L: float, sigma: float, tau_max: int, T: int) -> float:
    """eta = 1/2 sqrt(n Delta / (L sigma^2 tau_max T))."""
    if sigma == 0:
        raise ValueError("stepsize formula undefined for sigma=0; supply eta explicitly")
    assert all(x > 0 for x in (n, Delta, L, sigma, tau_max, T)), "rate-bound constants must be positive"
    if T < transient_time(n, Delta, L, sigma, tau_max):
        warn(
            f"T={T} is below the rate-bound transient time {transient_time(n, Delta, L, sigma, tau_max):.3g}; "
            "the rate guarantee does not apply"
        )
    return 0.5 * sqrt(n * Delta / (L * sigma**2 * tau_max * T))


def theorem1_bound(n: int, Delta: float, L: float, sigma: float, tau_max: int, T: int) -> float:
    """Rate bound on the averaged squared gradient norm (worst-case constants, reported but never asserted)."""
    lead = 128.0 * sqrt(L * Delta * sigma**2 * tau_max / (n * T))
    tail = 128.0 * (L * Delta) ** 1.5 * sqrt(n * tau_max) / (sigma * T**1.5)
    return lead + tail


def sample_complexity(n: int, Delta: float, L: float, sigma: float, tau_max: int, eps: float) -> float:
    """Leading-order samples to reach eps-stationarity: L Delta sigma^2 tau_max / (n eps^2)."""
    assert eps > 0, "target accuracy must be positive"
    return L * Delta * sigma**2 * tau_max / (n * eps**2)
