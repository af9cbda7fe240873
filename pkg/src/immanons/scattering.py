"""Transition probabilities of partially distinguishable immanons.

``n`` particles enter ``n`` external modes, one per mode, carrying internal
states with Gram matrix ``S``.  The network maps ``|j> -> sum_k M[j, k] |k>``
on the external label and leaves the internal label alone.

The closed form evaluated here is

    P(s) = 1 / (chi(e) prod_k s_k!) * sum_eta chi(eta) prod_j S[j, eta_j]
           * perm(B_eta),   B_eta[j, k] = conj(M[j, k]) M[eta_j, k]

on the column-expanded matrix (column ``k`` repeated ``s_k`` times), i.e.
the sum over the second permutation is carried out as a permanent.
"""

from __future__ import annotations

import csv
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np

from .errors import DomainError, RangeError
from .immanant import as_matrix, column_permuted_immanants, normalized_immanant, permanent
from .partitions import Partition, as_partition, enumerate_partitions, hook_dimension, permutation_table
from .states import SingleParticleSpace, apply_one_body, immanon_state, mode_occupation_distribution

MAX_SCATTERING_N = 6
MAX_DISTINGUISHABLE_N = 20
MAX_SWEEP_N = 6


def validate_distinguishability(S) -> np.ndarray:
    """Return ``S`` as an array after checking hermiticity, PSD and unit diagonal."""
    S = as_matrix(S)
    if np.max(np.abs(S - S.conj().T)) > 1e-12:
        raise DomainError("distinguishability matrix is not hermitian")
    if np.max(np.abs(np.diag(S) - 1.0)) > 1e-12:
        raise DomainError("distinguishability matrix diagonal is not 1")
    if np.linalg.eigvalsh(S).min() < -1e-10:
        raise DomainError("distinguishability matrix is not positive semi-definite")
    return S


def transition_matrix(n: int, x: float) -> np.ndarray:
    """Unit diagonal, every off-diagonal entry equal to ``x``."""
    if not 0.0 <= x <= 1.0:
        raise RangeError(f"x must lie in [0, 1], got {x}")
    if n < 1:
        raise DomainError("n must be positive")
    S = np.full((n, n), x, dtype=np.complex128)
    np.fill_diagonal(S, 1.0)
    return S


def balanced_coupler() -> np.ndarray:
    return np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / math.sqrt(2.0)


def occupation_vectors(n: int, modes: int | None = None) -> list[tuple[int, ...]]:
    """All ways to place ``n`` particles in ``modes`` modes, reverse-lex order."""
    modes = n if modes is None else modes
    out = []
    for bars in itertools.combinations(range(n + modes - 1), modes - 1):
        edges = (-1,) + bars + (n + modes - 1,)
        out.append(tuple(b - a - 1 for a, b in zip(edges, edges[1:])))
    return sorted(out, reverse=True)


def _check_occupation(s: Sequence[int], n: int) -> tuple[int, ...]:
    s = tuple(int(k) for k in s)
    if len(s) != n or any(k < 0 for k in s) or sum(s) != n:
        raise DomainError(f"occupation {s} is not a distribution of {n} particles over {n} modes")
    return s


def expand_columns(M, s: Sequence[int]) -> np.ndarray:
    """Repeat column ``k`` of ``M`` ``s_k`` times, blocks in ascending ``k``."""
    M = as_matrix(M)
    s = _check_occupation(s, M.shape[0])
    return M[:, np.repeat(np.arange(M.shape[0]), s)]


def _multiplicity_factor(s: Sequence[int]) -> int:
    return math.prod(math.factorial(k) for k in s)


def _checked_inputs(lam, M, S, bound: int) -> tuple[Partition, np.ndarray, np.ndarray]:
    lam = as_partition(lam)
    M = as_matrix(M)
    S = validate_distinguishability(S)
    n = lam.size
    if M.shape[0] != n or S.shape[0] != n:
        raise DomainError(f"dimensions differ: lambda {n}, M {M.shape[0]}, S {S.shape[0]}")
    if n > bound:
        raise RangeError(f"supported up to n = {bound}")
    return lam, M, S


def _double_sum(lam: Partition, M: np.ndarray, S: np.ndarray) -> complex:
    n = lam.size
    table = permutation_table(n)
    rows = np.arange(n)
    conj_M = M.conj()
    total = 0j
    for eta, chi in zip(table.perms, table.characters(lam)):
        if chi == 0:
            continue
        weight = np.prod(S[rows, eta])
        if weight == 0:
            continue
        total += chi * weight * permanent(conj_M * M[eta, :])
    return total / hook_dimension(lam)


def _as_probability(value: complex) -> float:
    scale = max(1.0, abs(value))
    if abs(value.imag) > 1e-10 * scale:
        raise ArithmeticError(f"probability has imaginary residue {value.imag:.3e}")
    return max(0.0, float(value.real))


def arrangement_probability(lam, M, S, s: Sequence[int]) -> float:
    """Probability of the output occupation ``s``."""
    lam, M, S = _checked_inputs(lam, M, S, MAX_SCATTERING_N)
    s = _check_occupation(s, lam.size)
    value = _double_sum(lam, expand_columns(M, s), S) / _multiplicity_factor(s)
    return _as_probability(value)


def coincidence_probability(lam, M, S) -> float:
    """Probability of finding exactly one particle in every output mode."""
    return arrangement_probability(lam, M, S, (1,) * as_partition(lam).size)


def indistinguishable_probability(lam, M, s: Sequence[int]) -> float:
    """``sum_rho |imm_lam(M_rho)|^2 / (n! prod s_k!)`` for ``S`` = all ones."""
    lam = as_partition(lam)
    M = as_matrix(M)
    n = lam.size
    if M.shape[0] != n:
        raise DomainError(f"dimensions differ: lambda {n}, M {M.shape[0]}")
    if n > MAX_SCATTERING_N:
        raise RangeError(f"supported up to n = {MAX_SCATTERING_N}")
    s = _check_occupation(s, n)
    values = column_permuted_immanants(lam, expand_columns(M, s))
    return float(np.sum(np.abs(values) ** 2)) / (math.factorial(n) * _multiplicity_factor(s))


def distinguishable_probability(M, s: Sequence[int]) -> float:
    """``perm(|M_s|^2) / prod s_k!``; independent of the species."""
    M = as_matrix(M)
    if M.shape[0] > MAX_DISTINGUISHABLE_N:
        raise RangeError(f"supported up to n = {MAX_DISTINGUISHABLE_N}")
    s = _check_occupation(s, M.shape[0])
    weights = np.abs(expand_columns(M, s)) ** 2
    return permanent(weights).real / _multiplicity_factor(s)


def bunching_factor(lam, S) -> float:
    """``imm_lam(S) / chi_lam(e)``: bunching relative to distinguishable particles."""
    lam = as_partition(lam)
    S = validate_distinguishability(S)
    if S.shape[0] != lam.size:
        raise DomainError(f"dimensions differ: lambda {lam.size}, S {S.shape[0]}")
    return _as_probability(normalized_immanant(lam, S))


def bunching_probability(lam, M, S) -> float:
    """Probability that every particle leaves through the first mode."""
    n = as_partition(lam).size
    bunch = (n,) + (0,) * (n - 1)
    return bunching_factor(lam, S) * distinguishable_probability(M, bunch)


@dataclass(frozen=True)
class SweepRow:
    lam: Partition
    x: float
    bunching_factor: float


def _sweep_curve(args: tuple[Partition, tuple[float, ...]]) -> list[SweepRow]:
    lam, grid = args
    return [SweepRow(lam, x, bunching_factor(lam, transition_matrix(lam.size, x))) for x in grid]


def transition_sweep(n: int, x_grid: Iterable[float], jobs: int = 1) -> list[SweepRow]:
    """Bunching factor of every species on the transition matrix over ``x_grid``.

    Rows are grouped by partition in canonical order, then by grid order.
    """
    if n > MAX_SWEEP_N:
        raise RangeError(f"sweeps are supported up to n = {MAX_SWEEP_N}")
    grid = tuple(float(x) for x in x_grid)
    for x in grid:
        if not 0.0 <= x <= 1.0:
            raise RangeError(f"grid value {x} outside [0, 1]")
    tasks = [(lam, grid) for lam in enumerate_partitions(n)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            curves = list(pool.map(_sweep_curve, tasks))
    else:
        curves = [_sweep_curve(t) for t in tasks]
    return [row for curve in curves for row in curve]


def write_sweep_csv(rows: Iterable[SweepRow], fh: TextIO) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["lambda", "x", "bunching_factor"])
    for row in rows:
        writer.writerow([row.lam.label, repr(row.x), f"{row.bunching_factor:.12g}"])


def read_sweep_csv(fh: TextIO) -> list[SweepRow]:
    reader = csv.DictReader(fh)
    return [SweepRow(Partition.parse(r["lambda"]), float(r["x"]), float(r["bunching_factor"])) for r in reader]


# -- brute-force route through explicit many-body states -------------------


def internal_states_from_gram(S) -> np.ndarray:
    """Rows ``phi_j`` with ``<phi_j|phi_k> = S[j, k]``.

    Uses a Cholesky factor when ``S`` is positive definite and an
    eigen-decomposition square root otherwise (e.g. the all-ones matrix).
    """
    S = validate_distinguishability(S)
    try:
        root = np.linalg.cholesky(S)
    except np.linalg.LinAlgError:
        w, v = np.linalg.eigh(S)
        root = v * np.sqrt(np.clip(w, 0.0, None))
    phi = root.conj()
    return phi / np.linalg.norm(phi, axis=1, keepdims=True)


def dense_arrangement_probabilities(lam, M, S) -> dict[tuple[int, ...], float]:
    """Output distribution from an explicit state-vector simulation.

    Builds the symmetrized input state, applies the single-particle map to
    every particle and reads out the external-mode occupations.  Cost grows
    as ``(n**2)**n``; intended as an independent check for small ``n``.
    """
    lam, M, S = _checked_inputs(lam, M, S, 4)
    n = lam.size
    space = SingleParticleSpace(n, n)
    phi = internal_states_from_gram(S)
    seed = [space.vector(j, phi[j]) for j in range(n)]
    state = immanon_state(lam, seed, space)
    evolved = apply_one_body(np.kron(M.T, np.eye(n)), state)
    return mode_occupation_distribution(evolved)
