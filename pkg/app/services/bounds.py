"""
Closed-form tail bounds for uniform random forests.

Each function evaluates one proven upper bound so experiments can compare it
with an empirical frequency. Bounds above 1 are returned as computed.
"""

import math
from typing import Sequence

from app.core.exceptions import DomainError
from app.models.degrees import DegreeSequence


def degree_indicator_ratio(s: DegreeSequence) -> float:
    """1_s = (|s| - 2) / (|s| - 1 - s^(1))."""
    n = s.n
    if n < 3:
        raise DomainError(f"the height bound needs |s| >= 3, got {n}")
    return (n - 2) / (n - 1 - s.count(1))


def height_tail_bound(s: DegreeSequence, m: float) -> float:
    """P(h(T(s)) >= m) <= 7 exp(-m² / (608 σ²(s) 1_s²)), σ²(s) = Σ i² s^(i)."""
    ratio = degree_indicator_ratio(s)
    return 7.0 * math.exp(-m * m / (608.0 * s.stats().sigma2_s * ratio * ratio))


def variance_tail_bound(children: Sequence[int], k: int, lam: float) -> float:
    """
    P(S_k >= λ (k/n) S_n) <= exp(-(3σ²(c)/16n)(λk/Δ²)) for a uniform permutation of c.
    """
    n = len(children)
    if lam < 2:
        raise DomainError(f"the bound holds for lambda >= 2, got {lam}")
    if not 1 <= k <= n:
        raise DomainError(f"k = {k} outside 1..{n}")
    delta = max(children)
    if delta == 0:
        raise DomainError("the bound needs a positive child count")
    sigma2 = sum(x * x for x in children)
    return math.exp(-(3.0 * sigma2 / (16.0 * n)) * (lam * k / (delta * delta)))


def tree_variance_bound(alpha: float, lam: float, second_moment: float) -> float:
    """
    P(∃T: |T| <= αn, σ²(T) >= λασ²(s)) <= (2/α) exp(-3Mλ/16), M = σ²(s)/n.

    Valid for λ >= 4 and α > Δ²/n; the caller checks the latter.
    """
    if lam < 4:
        raise DomainError(f"the bound holds for lambda >= 4, got {lam}")
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    return (2.0 / alpha) * math.exp(-3.0 * second_moment * lam / 16.0)


def martingale_bound(s: float, t: float) -> float:
    """P(max_{j <= n-s} |q - X_j/(n-j)| >= t) <= exp(-3st²/(3+2t))."""
    if s <= 0 or t <= 0:
        raise DomainError(f"s and t must be positive, got s={s}, t={t}")
    return math.exp(-3.0 * s * t * t / (3.0 + 2.0 * t))


def bad_event_condition(n: int, epsilon: float) -> bool:
    """Whether √5/log n < ε < 1."""
    return n >= 3 and math.sqrt(5.0) / math.log(n) < epsilon < 1.0


def bad_event_bound(n: int, epsilon: float, strict: bool = True) -> float:
    """
    P(B^{ε,i}) <= n^-3, valid when √5/log n < ε < 1.

    With strict=False the value is returned outside that range as well.
    """
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    if strict and not bad_event_condition(n, epsilon):
        raise DomainError(f"epsilon = {epsilon} outside (√5/log n, 1) for n = {n}")
    return float(n) ** -3


__all__ = [
    "degree_indicator_ratio",
    "height_tail_bound",
    "variance_tail_bound",
    "tree_variance_bound",
    "martingale_bound",
    "bad_event_condition",
    "bad_event_bound",
]
