"""
Closed-form expected walltime improvement factor (EWIF) evaluators.

Covers plain speculative decoding (SD), the two-model vertical cascade (VC)
and the two-model horizontal cascade (HC). All costs are expressed in units
of one target forward pass; every acceptance rate is an i.i.d. Bernoulli
probability per drafted token.
"""

from dataclasses import dataclass

import numpy as np

from .helpers import check_alpha, check_cost, check_count, geometric_sum, near_one
from utils.exceptions import DomainError


@dataclass(frozen=True)
class SpecParams:
    """Inputs of T_SD: acceptance rate, cost coefficient, draft length."""
    alpha: float
    cost: float
    k: int

    def __post_init__(self):
        check_alpha('alpha', self.alpha)
        check_cost('cost', self.cost)
        check_count('k', self.k)


@dataclass(frozen=True)
class VcParams:
    """Inputs of T_VC.

    alpha_t_d1 is the target/top-draft acceptance, alpha_d1_d2 the acceptance
    of the bottom draft when verified by the top draft. n is the number of
    sub-draft rounds and k the inner draft length (k = 0 means the top draft
    runs alone, one token per round).
    """
    alpha_t_d1: float
    alpha_d1_d2: float
    c_d1: float
    c_d2: float
    n: int
    k: int

    def __post_init__(self):
        check_alpha('alpha_t_d1', self.alpha_t_d1)
        check_alpha('alpha_d1_d2', self.alpha_d1_d2)
        check_cost('c_d1', self.c_d1)
        check_cost('c_d2', self.c_d2)
        check_count('n', self.n, minimum=1)
        check_count('k', self.k)


@dataclass(frozen=True)
class HcParams:
    """Inputs of T_HC: k_d1 tokens from the first draft, then k_d2 from the second."""
    alpha_d1: float
    alpha_d2: float
    c_d1: float
    c_d2: float
    k_d1: int
    k_d2: int

    def __post_init__(self):
        check_alpha('alpha_d1', self.alpha_d1)
        check_alpha('alpha_d2', self.alpha_d2)
        check_cost('c_d1', self.c_d1)
        check_cost('c_d2', self.c_d2)
        check_count('k_d1', self.k_d1)
        check_count('k_d2', self.k_d2)
        if self.k_d1 + self.k_d2 < 1:
            raise DomainError(f"k_d1 + k_d2 must be >= 1, got {self.k_d1} + {self.k_d2}")


def pgf_eval(alpha: float, k: int, x: float) -> float:
    """Generating function of the tokens-per-cycle distribution of SD(alpha, k)."""
    check_alpha('alpha', alpha)
    check_count('k', k)
    ax = alpha * x
    if near_one(ax):
        return 1.0 + (x - 1.0) * (k + 1)
    return 1.0 + (x - 1.0) * (1.0 - ax ** (k + 1)) / (1.0 - ax)


def pgf_coefficients(alpha: float, k: int) -> np.ndarray:
    """
    Explicit distribution of tokens emitted per verify cycle.

    Index i holds P(i tokens); index 0 is always zero because the bonus token
    guarantees progress. The last entry is the all-accepted case alpha**k.
    """
    check_alpha('alpha', alpha)
    check_count('k', k)
    probs = np.zeros(k + 2)
    for i in range(1, k + 1):
        probs[i] = alpha ** (i - 1) * (1.0 - alpha)
    probs[k + 1] = alpha ** k
    return probs


def expected_tokens_sd(alpha: float, k: int) -> float:
    """phi'(1): expected tokens per verify cycle, accepted drafts plus the bonus."""
    check_alpha('alpha', alpha)
    check_count('k', k)
    return geometric_sum(alpha, k + 1)


def ewif_sd(p: SpecParams) -> float:
    """T_SD = (1 - alpha^(k+1)) / ((1 - alpha)(ck + 1))."""
    return expected_tokens_sd(p.alpha, p.k) / (p.cost * p.k + 1.0)


def vc_expected_tokens(alpha_t_d1: float, alpha_d1_d2: float, n: int, k: int) -> float:
    """Numerator of T_VC; phi^n is the n-th power of the inner generating function."""
    if near_one(alpha_t_d1):
        # d/da [a * phi(a)^n] at a = 1
        return 1.0 + n * expected_tokens_sd(alpha_d1_d2, k)
    phi = pgf_eval(alpha_d1_d2, k, alpha_t_d1)
    return (1.0 - alpha_t_d1 * phi ** n) / (1.0 - alpha_t_d1)


def vc_cost(c_d1: float, c_d2: float, n: int, k: int) -> float:
    """Denominator of T_VC: one target pass plus n rounds of (top verify + k bottom steps)."""
    return 1.0 + n * c_d1 + n * k * c_d2


def ewif_vc(p: VcParams) -> float:
    """T_VC = (1 - alpha * phi(alpha)^n) / ((1 - alpha)(1 + n c_d1 + n k c_d2))."""
    return (vc_expected_tokens(p.alpha_t_d1, p.alpha_d1_d2, p.n, p.k)
            / vc_cost(p.c_d1, p.c_d2, p.n, p.k))


def hc_expected_tokens(alpha_d1: float, alpha_d2: float, k_d1: int, k_d2: int) -> float:
    """Numerator of T_HC."""
    head = geometric_sum(alpha_d1, k_d1 + 1)
    tail = alpha_d2 * geometric_sum(alpha_d2, k_d2)
    return head + alpha_d1 ** k_d1 * tail


def ewif_hc(p: HcParams) -> float:
    """T_HC: k_d1 tokens from the first draft followed by k_d2 from the second."""
    return (hc_expected_tokens(p.alpha_d1, p.alpha_d2, p.k_d1, p.k_d2)
            / (1.0 + p.k_d1 * p.c_d1 + p.k_d2 * p.c_d2))
