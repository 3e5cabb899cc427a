"""Independent verification machinery for the estimation layer.

Three routes to the same asymptotic variance are kept deliberately
separate so they can check one another:

  1. the closed-form series implemented in ``estimation.sigma_sq_true``;
  2. the delta-method quadratic form grad^T Sigma grad built here from the
     analytic gradient and the explicit multinomial covariance;
  3. a Monte Carlo estimate of Var[sqrt(n) (H_hat_m - H_m)].

The gradient itself is double-checked against central finite differences
on the simplex.  ``run_verification`` bundles all of it into the report
behind the command-line ``verify`` subcommand.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .distributions import AnalyticDistribution, DiscretePmf, derive_seed, sample
from .entropy import _check_order, as_pmf, gse, gse_analytic
from .estimation import gse_plugin, sigma_sq_literal, sigma_sq_true

DEFAULT_CORPUS_SEED = 20260810
DEFAULT_CORPUS_SIZE = 100
DEFAULT_FD_STEP = 1e-6


def _positive_pmf(pmf) -> DiscretePmf:
    pmf = as_pmf(pmf)
    if pmf.size < 2:
        raise ValueError("gradient oracles need at least two categories")
    if np.any(pmf.probs <= 0.0):
        raise ValueError("gradient oracles require strictly positive probabilities")
    return pmf


def analytic_gradient(pmf, m: int) -> np.ndarray:
    """Partial derivatives of the order-m entropy in the K-1 free coordinates.

    The last category absorbs the simplex constraint (p_K = 1 - sum).  For
    free index i:

        dH/dp_i = (ln q_K - ln q_i) m q_i / p_i
                  - m (q_i / p_i - q_K / p_K) (H + ln q_K).
    """
    pmf = _positive_pmf(pmf)
    m = _check_order(m)
    p = pmf.probs
    w = m * np.log(p)
    w -= w.max()
    log_norm = np.log(np.sum(np.exp(w)))
    log_q = w - log_norm
    q = np.exp(log_q)
    h = float(-np.dot(q, log_q))
    ratio = m * q / p
    return (log_q[-1] - log_q[:-1]) * ratio[:-1] - (ratio[:-1] - ratio[-1]) * (h + log_q[-1])


def fd_gradient(pmf, m: int, h: float = DEFAULT_FD_STEP) -> np.ndarray:
    """Central finite differences of gse along the free coordinates.

    Each step moves p_i by +/-h and lets p_K absorb the change; steps that
    would leave the open simplex are a domain error.
    """
    pmf = _positive_pmf(pmf)
    m = _check_order(m)
    if not (h > 0.0):
        raise ValueError("step size must be positive")
    p = pmf.probs
    k = p.size
    if np.any(p[:-1] + h >= 1.0) or np.any(p[:-1] - h <= 0.0) or p[-1] - h <= 0.0:
        raise ValueError(f"step {h} leaves the simplex for {p}")
    out = np.empty(k - 1)
    for i in range(k - 1):
        plus = p.copy()
        plus[i] += h
        plus[-1] -= h
        minus = p.copy()
        minus[i] -= h
        minus[-1] += h
        out[i] = (gse(DiscretePmf(plus), m) - gse(DiscretePmf(minus), m)) / (2.0 * h)
    return out


def delta_variance_oracle(pmf, m: int) -> float:
    """grad^T Sigma grad with the explicit (K-1)x(K-1) multinomial covariance."""
    pmf = _positive_pmf(pmf)
    g = analytic_gradient(pmf, m)
    v = pmf.probs[:-1]
    cov = np.diag(v) - np.outer(v, v)
    return float(g @ cov @ g)


def mc_variance_oracle(dist: AnalyticDistribution, m: int, n: int, reps: int,
                       seed: int, workers: int = 1) -> float:
    """Empirical variance of sqrt(n) (plug-in - true) over seeded replicates.

    Replicate r draws with the derived seed (seed, r), so the result is
    independent of worker count.
    """
    if reps < 100:
        raise ValueError("need at least 100 replicates for a meaningful variance")
    h_true = gse_analytic(dist, m)
    scale = np.sqrt(float(n))
    values = np.empty(reps)

    def fill(block: range) -> None:
        for r in block:
            counts = sample(dist, n, derive_seed(seed, r))
            values[r] = scale * (gse_plugin(counts, m) - h_true)

    _run_blocks(fill, reps, workers)
    return float(np.var(values, ddof=1))


def _run_blocks(fill, total: int, workers: int) -> None:
    if workers <= 1:
        fill(range(total))
        return
    step = -(-total // workers)
    blocks = [range(i, min(i + step, total)) for i in range(0, total, step)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for future in [pool.submit(fill, block) for block in blocks]:
            future.result()


# ---------------------------------------------------------------------------
# fixed-seed corpus and the bundled verification report
# ---------------------------------------------------------------------------


def pmf_corpus(seed: int = DEFAULT_CORPUS_SEED, size: int = DEFAULT_CORPUS_SIZE,
               k_min: int = 2, k_max: int = 12, min_prob: float = 0.01) -> list[DiscretePmf]:
    """Reproducible corpus of random interior simplex points.

    Draws whose smallest entry falls below ``min_prob`` are rejected, so
    finite differences stay inside the simplex and 1/p_k terms stay well
    conditioned.
    """
    rng = np.random.default_rng(seed)
    corpus: list[DiscretePmf] = []
    while len(corpus) < size:
        k = int(rng.integers(k_min, k_max + 1))
        p = rng.dirichlet(np.full(k, 2.0))
        if p.min() >= min_prob:
            corpus.append(DiscretePmf(p))
    return corpus


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class VerificationReport:
    corpus_seed: int
    corpus_size: int
    m_values: tuple[int, ...]
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


def run_verification(corpus_seed: int = DEFAULT_CORPUS_SEED,
                     corpus_size: int = DEFAULT_CORPUS_SIZE,
                     m_values: tuple[int, ...] = (1, 2, 3, 4)) -> VerificationReport:
    """Run the oracle battery on a fixed-seed corpus and report per-invariant results."""
    corpus = pmf_corpus(seed=corpus_seed, size=corpus_size)
    checks: list[CheckResult] = []

    # analytic gradient vs central finite differences
    worst = 0.0
    for pmf in corpus:
        for m in m_values:
            a = analytic_gradient(pmf, m)
            f = fd_gradient(pmf, m)
            gap = np.abs(a - f) / np.maximum(1.0, 1e2 * np.abs(a))
            worst = max(worst, float(gap.max()))
    checks.append(CheckResult(
        "gradient vs finite differences (tol max(1e-6, 1e-4|g|))",
        worst <= 1e-6, f"worst normalized gap {worst:.3e}"))

    # closed-form variance vs delta-method quadratic form
    worst = 0.0
    for pmf in corpus:
        for m in m_values:
            direct = sigma_sq_true(pmf, m)
            quad = delta_variance_oracle(pmf, m)
            worst = max(worst, abs(direct - quad) / max(abs(quad), 1e-30))
    checks.append(CheckResult(
        "variance series vs delta-method quadratic form (rel tol 1e-8)",
        worst <= 1e-8, f"worst relative gap {worst:.3e}"))

    # m = 1 must reduce to the classical plug-in entropy variance
    worst = 0.0
    for pmf in corpus:
        p = pmf.probs
        log_p = np.log(p)
        classical = float(np.dot(p, log_p**2) - np.dot(p, log_p) ** 2)
        worst = max(worst, abs(sigma_sq_true(pmf, 1) - classical))
    checks.append(CheckResult(
        "m=1 reduction to sum p ln^2 p - H^2 (abs tol 1e-12)",
        worst <= 1e-12, f"worst absolute gap {worst:.3e}"))

    # gradient mean-zero identity sum_k p_k g_k = 0
    worst = 0.0
    for pmf in corpus:
        for m in m_values:
            p = pmf.probs
            w = m * np.log(p)
            w -= w.max()
            log_q = w - np.log(np.sum(np.exp(w)))
            q = np.exp(log_q)
            h = float(-np.dot(q, log_q))
            g = -(m * q / p) * (log_q + h)
            worst = max(worst, abs(float(np.dot(p, g))))
    checks.append(CheckResult(
        "mean-zero identity sum p_k g_k = 0 (abs tol 1e-12)",
        worst <= 1e-12, f"worst absolute value {worst:.3e}"))

    # diagnostic: the inside-the-square weighting disagrees on non-uniform pmfs
    disagreements = 0
    non_uniform = 0
    for pmf in corpus:
        if np.ptp(pmf.probs) <= 1e-12:
            continue
        non_uniform += 1
        corrected = sigma_sq_true(pmf, 2)
        literal = sigma_sq_literal(pmf, 2)
        if abs(literal - corrected) > 1e-8 * max(corrected, 1e-30):
            disagreements += 1
    probe = np.array([0.3, 0.7])
    checks.append(CheckResult(
        "diagnostic: inside-the-square weighting disagrees everywhere non-uniform",
        disagreements == non_uniform,
        f"{disagreements}/{non_uniform} corpus pmfs disagree; example (0.3,0.7) m=2: "
        f"corrected {sigma_sq_true(probe, 2):.6f} vs literal {sigma_sq_literal(probe, 2):.6f}"))

    return VerificationReport(corpus_seed, corpus_size, tuple(m_values), tuple(checks))
