"""Inequality checks for positive semi-definite unit-diagonal matrices.

Hadamard, Marcus, Lieb, Fisher and Schur are theorems; their checks should
never fail beyond round-off.  Permanental dominance is a conjecture, so
:func:`dominance_campaign` records violations with a matrix dump instead of
stopping.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, RangeError
from .immanant import determinant, immanants, matrix_to_json, permanent
from .partitions import Partition, enumerate_partitions, hook_dimension
from .scattering import validate_distinguishability

TOL = 1e-9
MAX_DOMINANCE_N = 7


def random_psd_unit_diagonal(n: int, seed: int) -> np.ndarray:
    """Complex Gaussian Gram matrix rescaled to unit diagonal.

    Deterministic for a given ``(n, seed)``.
    """
    if n < 1:
        raise DomainError("n must be positive")
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    A = G @ G.conj().T
    scale = 1.0 / np.sqrt(A.diagonal().real)
    S = A * scale[:, None] * scale[None, :]
    S = 0.5 * (S + S.conj().T)
    np.fill_diagonal(S, 1.0)
    return S


@dataclass(frozen=True)
class HadamardMarcusBounds:
    det: float
    perm: float
    n: int
    det_nonnegative: bool
    det_at_most_one: bool
    perm_at_least_one: bool
    perm_at_most_factorial: bool

    @property
    def holds(self) -> bool:
        return self.det_nonnegative and self.det_at_most_one and self.perm_at_least_one and self.perm_at_most_factorial


def _real(z: complex) -> float:
    return float(z.real)


def check_hadamard_marcus(S, tol: float = TOL) -> HadamardMarcusBounds:
    """``0 <= det(S) <= 1 <= perm(S) <= n!``."""
    S = validate_distinguishability(S)
    n = S.shape[0]
    d, p = _real(determinant(S)), _real(permanent(S))
    top = math.factorial(n)
    return HadamardMarcusBounds(
        det=d,
        perm=p,
        n=n,
        det_nonnegative=d >= -tol,
        det_at_most_one=d <= 1.0 + tol,
        perm_at_least_one=p >= 1.0 - tol,
        perm_at_most_factorial=p <= top * (1.0 + tol),
    )


@dataclass(frozen=True)
class LiebFisherBounds:
    split: int
    perm: float
    perm_blocks: float
    det: float
    det_blocks: float
    lieb: bool
    fisher: bool

    @property
    def holds(self) -> bool:
        return self.lieb and self.fisher


def check_lieb_fisher(S, split: int, tol: float = TOL) -> LiebFisherBounds:
    """Lieb: ``perm(S) >= perm(A) perm(C) >= 1``.  Fisher: ``det(S) <= det(A) det(C) <= 1``.

    ``A`` is the leading ``split x split`` block and ``C`` the trailing one.
    """
    S = validate_distinguishability(S)
    n = S.shape[0]
    if not 1 <= split < n:
        raise DomainError(f"split must satisfy 1 <= k < {n}, got {split}")
    A, C = S[:split, :split], S[split:, split:]
    p, pb = _real(permanent(S)), _real(permanent(A)) * _real(permanent(C))
    d, db = _real(determinant(S)), _real(determinant(A)) * _real(determinant(C))
    return LiebFisherBounds(
        split=split,
        perm=p,
        perm_blocks=pb,
        det=d,
        det_blocks=db,
        lieb=p >= pb - tol * max(1.0, p) and pb >= 1.0 - tol,
        fisher=d <= db + tol and db <= 1.0 + tol,
    )


@dataclass
class InequalityReport:
    n: int
    seed: int | None
    det: float
    perm: float
    normalized: dict[Partition, float]
    schur_ok: bool
    dominance_ok: bool
    schur_margin: float
    dominance_margin: float
    max_imag_ratio: float

    @property
    def worst_margin(self) -> float:
        return min(self.schur_margin, self.dominance_margin)


def check_schur_dominance(S, seed: int | None = None, tol: float = TOL) -> InequalityReport:
    """Compare every normalized immanant of ``S`` with ``det(S)`` and ``perm(S)``.

    ``schur_margin`` is ``min over lam of (imm/chi(e) - det)``.
    ``dominance_margin`` is ``min over lam != (n) of (perm - imm/chi(e)) / perm``;
    for ``n = 1`` there is no such shape and the margin is ``inf``.
    """
    S = validate_distinguishability(S)
    n = S.shape[0]
    if n > MAX_DOMINANCE_N:
        raise RangeError(f"supported up to n = {MAX_DOMINANCE_N}")
    d, p = _real(determinant(S)), _real(permanent(S))
    raw = immanants(S)
    normalized, imag_ratio = {}, 0.0
    for lam, value in raw.items():
        normalized[lam] = value.real / hook_dimension(lam)
        imag_ratio = max(imag_ratio, abs(value.imag) / max(abs(value), 1e-300))
    schur_margin = min(v - d for v in normalized.values())
    others = [v for lam, v in normalized.items() if not lam.is_bosonic()]
    dominance_margin = min((p - v) / p for v in others) if others else math.inf
    return InequalityReport(
        n=n,
        seed=seed,
        det=d,
        perm=p,
        normalized=normalized,
        schur_ok=schur_margin >= -tol,
        dominance_ok=dominance_margin >= -tol,
        schur_margin=schur_margin,
        dominance_margin=dominance_margin,
        max_imag_ratio=imag_ratio,
    )


@dataclass
class CampaignSummary:
    n: int
    trials: int
    schur_violations: int = 0
    dominance_violations: int = 0
    min_dominance_margin: float | None = None
    max_dominance_margin: float | None = None
    min_schur_margin: float | None = None
    wall_time_s: float | None = None
    violations: list[dict] = field(default_factory=list)

    @property
    def violated(self) -> bool:
        return bool(self.schur_violations or self.dominance_violations)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "trials": self.trials,
            "schur_violations": self.schur_violations,
            "dominance_violations": self.dominance_violations,
            "min_dominance_margin": self.min_dominance_margin,
            "max_dominance_margin": self.max_dominance_margin,
            "min_schur_margin": self.min_schur_margin,
            "wall_time_s": self.wall_time_s,
            "violation_found": self.violated,
            "violations": self.violations,
        }


def _trial(args: tuple[int, int]) -> tuple[int, float, float, bool, bool]:
    n, seed = args
    report = check_schur_dominance(random_psd_unit_diagonal(n, seed), seed=seed)
    return seed, report.schur_margin, report.dominance_margin, report.schur_ok, report.dominance_ok


def dominance_campaign(n: int, trials: int, seed: int, jobs: int = 1, timed: bool = True) -> CampaignSummary:
    """Check Schur's inequality and permanental dominance on random matrices.

    Trial ``i`` uses matrix seed ``seed + i``.  Each violating matrix is kept
    in the matrix JSON format together with its seed.  With ``timed=False``
    the wall time is left out so that the summary is reproducible.
    """
    if n > MAX_DOMINANCE_N:
        raise RangeError(f"supported up to n = {MAX_DOMINANCE_N}")
    start = time.perf_counter()
    tasks = [(n, seed + i) for i in range(trials)]
    if jobs > 1 and trials > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_trial, tasks, chunksize=max(1, trials // (4 * jobs))))
    else:
        results = [_trial(t) for t in tasks]

    summary = CampaignSummary(n=n, trials=trials)
    if results:
        summary.min_schur_margin = min(r[1] for r in results)
        dom = [r[2] for r in results if math.isfinite(r[2])]
        if dom:
            summary.min_dominance_margin = min(dom)
            summary.max_dominance_margin = max(dom)
    for trial_seed, _, _, schur_ok, dominance_ok in results:
        if schur_ok and dominance_ok:
            continue
        summary.schur_violations += not schur_ok
        summary.dominance_violations += not dominance_ok
        summary.violations.append(
            matrix_to_json(
                random_psd_unit_diagonal(n, trial_seed),
                seed=trial_seed,
                schur_ok=schur_ok,
                dominance_ok=dominance_ok,
            )
        )
    if timed:
        summary.wall_time_s = time.perf_counter() - start
    return summary
