"""Dense n-particle state vectors and the operators acting on them.

A :class:`DenseState` stores ``d**n`` amplitudes for ``n`` particles, each
living in a ``d = d_ext * d_int`` dimensional single-particle space.  The
single-particle basis index is ``mode * d_int + internal``.  The flat
amplitude index is little-endian in particle number: particle ``q``
contributes ``i_q * d**q``.

Permutation convention: ``Q_sigma`` puts the factor of particle
``sigma(j)`` into slot ``j``, i.e. ``Q_sigma |psi_1..psi_n> =
|psi_sigma(1)..psi_sigma(n)>``.  On tensors this is
``tensor.transpose(sigma)`` and the operators compose as
``Q_sigma Q_tau = Q_{tau o sigma}``.  Characters are class functions with
``chi(sigma) = chi(sigma^-1)``, so the symmetrizers do not depend on this
choice; only :func:`permutation_operator` exposes it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

from .errors import DomainError, RangeError
from .immanant import normalized_immanant
from .partitions import (
    Partition,
    _zero_based,
    as_partition,
    hook_dimension,
    majorizes,
    permutation_table,
)

MAX_STATE_DIM = 10**7
MAX_SYMMETRIZER_N = 6
VANISHING = 1e-12


@dataclass(frozen=True)
class SingleParticleSpace:
    d_ext: int
    d_int: int = 1

    def __post_init__(self):
        if self.d_ext < 1 or self.d_int < 1:
            raise DomainError(f"dimensions must be positive: d_ext={self.d_ext}, d_int={self.d_int}")

    @property
    def dim(self) -> int:
        return self.d_ext * self.d_int

    def vector(self, mode: int, internal=None) -> np.ndarray:
        """Single-particle vector ``|mode> (x) internal``."""
        ext = np.zeros(self.d_ext, dtype=np.complex128)
        ext[mode] = 1.0
        if internal is None:
            internal = np.eye(self.d_int, dtype=np.complex128)[0]
        internal = np.asarray(internal, dtype=np.complex128)
        if internal.shape != (self.d_int,):
            raise DomainError(f"internal vector must have length {self.d_int}")
        return np.kron(ext, internal)


class DenseState:
    """Immutable amplitude vector of ``n`` particles."""

    __slots__ = ("n", "space", "amplitudes")

    def __init__(self, n: int, space: SingleParticleSpace, amplitudes):
        amps = np.array(amplitudes, dtype=np.complex128).reshape(-1)
        size = space.dim**n
        if size > MAX_STATE_DIM:
            raise RangeError(f"state dimension {size} exceeds {MAX_STATE_DIM}")
        if amps.shape != (size,):
            raise DomainError(f"expected {size} amplitudes, got {amps.size}")
        if not np.all(np.isfinite(amps)):
            raise DomainError("non-finite amplitudes")
        amps.setflags(write=False)
        self.n = n
        self.space = space
        self.amplitudes = amps

    @classmethod
    def product(cls, vectors: Sequence, space: SingleParticleSpace | None = None) -> "DenseState":
        """Product state with ``vectors[q]`` in particle slot ``q``."""
        vecs = [np.asarray(v, dtype=np.complex128) for v in vectors]
        if not vecs:
            raise DomainError("need at least one particle")
        space = space or SingleParticleSpace(len(vecs[0]))
        if any(v.shape != (space.dim,) for v in vecs):
            raise DomainError(f"single-particle vectors must have length {space.dim}")
        return cls.from_tensor(reduce(np.multiply.outer, vecs), space)

    @classmethod
    def basis(cls, indices: Sequence[int], space: SingleParticleSpace) -> "DenseState":
        eye = np.eye(space.dim, dtype=np.complex128)
        return cls.product([eye[i] for i in indices], space)

    @classmethod
    def from_tensor(cls, tensor: np.ndarray, space: SingleParticleSpace) -> "DenseState":
        n = tensor.ndim
        return cls(n, space, np.ascontiguousarray(tensor.transpose(range(n - 1, -1, -1))).reshape(-1))

    def tensor(self) -> np.ndarray:
        """View with axis ``q`` belonging to particle ``q``."""
        return self.amplitudes.reshape((self.space.dim,) * self.n).transpose(range(self.n - 1, -1, -1))

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def inner(self, other: "DenseState") -> complex:
        """``<self|other>``."""
        self._check_compatible(other)
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def _check_compatible(self, other: "DenseState") -> None:
        if self.n != other.n or self.space != other.space:
            raise DomainError("states live in different Hilbert spaces")

    def __add__(self, other: "DenseState") -> "DenseState":
        self._check_compatible(other)
        return DenseState(self.n, self.space, self.amplitudes + other.amplitudes)

    def __sub__(self, other: "DenseState") -> "DenseState":
        self._check_compatible(other)
        return DenseState(self.n, self.space, self.amplitudes - other.amplitudes)

    def scaled(self, factor: complex) -> "DenseState":
        return DenseState(self.n, self.space, factor * self.amplitudes)

    def normalized(self) -> "DenseState":
        nrm = self.norm()
        if nrm == 0.0:
            raise DomainError("cannot normalize the zero vector")
        return self.scaled(1.0 / nrm)

    def digits(self, index: int) -> list[int]:
        d = self.space.dim
        return [(index // d**q) % d for q in range(self.n)]

    def dump(self, threshold: float = 1e-14) -> list[dict]:
        """Debug listing of the amplitudes above ``threshold`` in modulus."""
        out = []
        for idx in np.flatnonzero(np.abs(self.amplitudes) > threshold):
            a = self.amplitudes[idx]
            out.append({"digits": self.digits(int(idx)), "re": float(a.real), "im": float(a.imag)})
        return out

    def __repr__(self) -> str:
        return f"DenseState(n={self.n}, d_ext={self.space.d_ext}, d_int={self.space.d_int}, norm={self.norm():.6g})"


def _check_n(lam: Partition, n: int) -> None:
    if lam.size != n:
        raise DomainError(f"partition of {lam.size} applied to {n} particles")
    if n > MAX_SYMMETRIZER_N:
        raise RangeError(f"dense symmetrization is supported up to n = {MAX_SYMMETRIZER_N}")


def _weighted_permutation_sum(lam: Partition, state: DenseState, scale: float) -> DenseState:
    """``scale * sum_sigma chi_lam(sigma) Q_sigma |state>``."""
    table = permutation_table(state.n)
    chars = table.characters(lam)
    t = state.tensor()
    out = np.zeros_like(t)
    for perm, chi in zip(table.perms, chars):
        if chi:
            out += chi * t.transpose(perm)
    return DenseState.from_tensor(scale * out, state.space)


def permutation_operator(sigma: Sequence[int], state: DenseState) -> DenseState:
    """Apply ``Q_sigma``; slot ``j`` receives the factor of particle ``sigma(j)``."""
    perm = _zero_based(sigma)
    if len(perm) != state.n:
        raise DomainError(f"permutation of {len(perm)} elements applied to {state.n} particles")
    return DenseState.from_tensor(state.tensor().transpose(perm), state.space)


def symmetrizer(lam, state: DenseState) -> DenseState:
    """Projector ``chi(e)/n! * sum_sigma chi(sigma) Q_sigma`` onto species ``lam``."""
    lam = as_partition(lam)
    _check_n(lam, state.n)
    return _weighted_permutation_sum(lam, state, hook_dimension(lam) / math.factorial(state.n))


def _seed_vectors(seed: Sequence, n: int | None = None) -> list[np.ndarray]:
    vecs = [np.asarray(v, dtype=np.complex128) for v in seed]
    if n is not None and len(vecs) != n:
        raise DomainError(f"seed has {len(vecs)} vectors, expected {n}")
    for v in vecs:
        if abs(np.linalg.norm(v) - 1.0) > 1e-10:
            raise DomainError("seed vectors must be normalized")
    return vecs


def immanon_state(lam, seed: Sequence, space: SingleParticleSpace | None = None) -> DenseState:
    """``1/sqrt(n!) * sum_sigma chi(sigma) (x)_j |seed[sigma(j)]>_j``.

    Equal to ``sqrt(n!)/chi(e) * P_lam |seed>``; unit norm when the seed
    vectors are orthonormal.
    """
    lam = as_partition(lam)
    vecs = _seed_vectors(seed, lam.size)
    _check_n(lam, len(vecs))
    product = DenseState.product(vecs, space)
    return _weighted_permutation_sum(lam, product, 1.0 / math.sqrt(math.factorial(lam.size)))


def overlap(lam, phi_seed: Sequence, psi_seed: Sequence) -> complex:
    """``<Phi_lam|Psi_lam>`` from the single-particle overlaps alone.

    Equals ``imm_lam(M) / chi_lam(e)`` with ``M[j, k] = <phi_j|psi_k>``.
    """
    lam = as_partition(lam)
    phi = _seed_vectors(phi_seed)
    psi = _seed_vectors(psi_seed)
    if len(phi) != len(psi) or len(phi) != lam.size:
        raise DomainError(f"seed lengths {len(phi)}, {len(psi)} do not match partition size {lam.size}")
    M = np.conj(np.array(phi)) @ np.array(psi).T
    return normalized_immanant(lam, M)


@dataclass(frozen=True)
class PauliCheck:
    projection_norm: float
    majorization_allows: bool


def occupation_state(eta, space: SingleParticleSpace | None = None) -> DenseState:
    """``(x)_j |j>^{(x) eta_j}``: ``eta_j`` particles in mode ``j``."""
    eta = as_partition(eta)
    space = space or SingleParticleSpace(len(eta))
    indices = [mode * space.d_int for mode, k in enumerate(eta) for _ in range(k)]
    return DenseState.basis(indices, space)


def partial_pauli_check(lam, eta) -> PauliCheck:
    """Project the occupation pattern ``eta`` onto species ``lam``.

    Raises ``RuntimeError`` if the projection survives although ``eta`` is
    not majorized by ``lam``.
    """
    lam, eta = as_partition(lam), as_partition(eta)
    if lam.size != eta.size:
        raise DomainError(f"size mismatch: {lam.size} vs {eta.size}")
    allows = majorizes(eta, lam)
    norm = symmetrizer(lam, occupation_state(eta)).norm()
    if not allows and norm >= VANISHING:
        raise RuntimeError(f"P_{lam.label} leaves {norm:.3e} of pattern {eta.label} although it is not majorized")
    return PauliCheck(norm, allows)


def seed_dependence_probe(lam, seed: Sequence, sigma: Sequence[int]) -> float:
    """``1 - |<Psi(seed)|Psi(sigma.seed)>| / (norms)``.

    A positive value certifies that reordering the seed changes the state by
    more than a scalar.  Returns ``nan`` when either state vanishes.
    """
    lam = as_partition(lam)
    if lam.is_bosonic() or lam.is_fermionic():
        raise DomainError("probe undefined for one-dimensional representations")
    vecs = _seed_vectors(seed, lam.size)
    perm = _zero_based(sigma)
    if len(perm) != len(vecs):
        raise DomainError("permutation and seed lengths differ")
    a = immanon_state(lam, vecs)
    b = immanon_state(lam, [vecs[p] for p in perm])
    na, nb = a.norm(), b.norm()
    if na < VANISHING or nb < VANISHING:
        return math.nan
    return max(0.0, 1.0 - abs(a.inner(b)) / (na * nb))


def apply_one_body(A, state: DenseState) -> DenseState:
    """Apply ``A (x) A (x) ... (x) A`` without any unitarity requirement."""
    A = np.asarray(A, dtype=np.complex128)
    d = state.space.dim
    if A.shape != (d, d):
        raise DomainError(f"one-body operator must be {d}x{d}")
    t = state.tensor()
    for q in range(state.n):
        t = np.moveaxis(np.tensordot(A, t, axes=([1], [q])), 0, q)
    return DenseState.from_tensor(t, state.space)


def evolve_one_body(U, state: DenseState) -> DenseState:
    U = np.asarray(U, dtype=np.complex128)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise DomainError("U must be square")
    if np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))) > 1e-10:
        raise DomainError("U is not unitary within 1e-10")
    return apply_one_body(U, state)


def occupation_multiplicity(s: Sequence[int]) -> Partition:
    """Sorted non-zero counts of an occupation vector."""
    if any(k < 0 for k in s):
        raise DomainError(f"negative occupation in {tuple(s)}")
    return Partition(sorted((k for k in s if k), reverse=True))


def mode_occupation_distribution(state: DenseState) -> dict[tuple[int, ...], float]:
    """Probability of every external-mode occupation vector.

    Internal labels are summed over.  Probabilities are the squared
    amplitudes as stored; they sum to one for a normalized state.
    """
    probs = np.abs(state.amplitudes) ** 2
    if probs.sum() == 0.0:
        raise DomainError("zero-norm state has no occupation distribution")
    n, d = state.n, state.space.dim
    d_ext, d_int = state.space.d_ext, state.space.d_int
    idx = np.arange(d**n, dtype=np.int64)
    key = np.zeros(d**n, dtype=np.int64)
    for q in range(n):
        mode = ((idx // d**q) % d) // d_int
        key += (n + 1) ** mode
    keys, inverse = np.unique(key, return_inverse=True)
    totals = np.bincount(inverse, weights=probs)
    out = {}
    for k, p in zip(keys.tolist(), totals.tolist()):
        out[tuple((k // (n + 1) ** m) % (n + 1) for m in range(d_ext))] = p
    return dict(sorted(out.items(), reverse=True))
