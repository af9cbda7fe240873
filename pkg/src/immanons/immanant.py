"""Immanants, permanents and determinants of dense complex matrices.

``immanant(lam, M) = sum over sigma in S_n of chi_lam(sigma) * prod_j M[j, sigma(j)]``

The general path multiplies out every permutation product in lexicographic
order (vectorised over blocks of S_n) and contracts the product vector with
the character weights.  All summation happens in a fixed order, so repeated
calls are bitwise reproducible.
"""

from __future__ import annotations

import json
import math
from functools import lru_cache
from pathlib import Path

import numpy as np

from .errors import DomainError, RangeError
from .partitions import (
    Partition,
    as_partition,
    character,
    enumerate_partitions,
    hook_dimension,
    iter_permutation_blocks,
    permutation_table,
)

MAX_IMMANANT_N = 10
MAX_PERMANENT_N = 24
MAX_COLUMN_PERMUTED_N = 7
# columns handled by the precomputed inner Gray-code table in ``permanent``
_RYSER_INNER_BITS = 12


def as_matrix(M) -> np.ndarray:
    """Validate and convert to a square complex128 array."""
    a = np.asarray(M, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DomainError(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DomainError("matrix has non-finite entries")
    return a


def _check_sizes(lam: Partition, M: np.ndarray) -> None:
    if lam.size != M.shape[0]:
        raise DomainError(f"partition of {lam.size} does not match a {M.shape[0]}x{M.shape[0]} matrix")


def _products(M: np.ndarray, perms: np.ndarray) -> np.ndarray:
    rows = np.arange(M.shape[0])
    return M[rows, perms].prod(axis=1)


def _class_weights(lam: Partition) -> np.ndarray:
    return np.array([character(lam, c) for c in enumerate_partitions(lam.size)], dtype=np.float64)


def _general_immanants(partitions: list[Partition], M: np.ndarray) -> np.ndarray:
    n = M.shape[0]
    weights = np.array([_class_weights(lam) for lam in partitions])
    # sum of permutation products per conjugacy class, then one contraction
    per_class = np.zeros(weights.shape[1], dtype=np.complex128)
    for perms, cls in iter_permutation_blocks(n):
        prods = _products(M, perms)
        per_class += np.bincount(cls, weights=prods.real, minlength=len(per_class))
        per_class += 1j * np.bincount(cls, weights=prods.imag, minlength=len(per_class))
    return weights @ per_class


def immanant(lam, M) -> complex:
    """Immanant of ``M`` for the character labelled by ``lam``.

    Dispatches to :func:`permanent` for ``(n)`` and :func:`determinant` for
    ``(1, ..., 1)``; every other shape uses the character-weighted sum over
    S_n, supported up to ``n = 10``.
    """
    lam = as_partition(lam)
    M = as_matrix(M)
    _check_sizes(lam, M)
    if lam.is_bosonic():
        return permanent(M)
    if lam.is_fermionic():
        return determinant(M)
    if M.shape[0] > MAX_IMMANANT_N:
        raise RangeError(f"general immanants are supported up to n = {MAX_IMMANANT_N}")
    return complex(_general_immanants([lam], M)[0])


def immanants(M, partitions=None) -> dict[Partition, complex]:
    """Immanants for several shapes at once, sharing the permutation products.

    Every shape, including ``(n)`` and ``(1, ..., 1)``, goes through the
    general character-weighted sum here.
    """
    M = as_matrix(M)
    n = M.shape[0]
    if n > MAX_IMMANANT_N:
        raise RangeError(f"general immanants are supported up to n = {MAX_IMMANANT_N}")
    parts = [as_partition(p) for p in partitions] if partitions is not None else enumerate_partitions(n)
    for lam in parts:
        _check_sizes(lam, M)
    values = _general_immanants(parts, M)
    return {lam: complex(v) for lam, v in zip(parts, values)}


def normalized_immanant(lam, M) -> complex:
    lam = as_partition(lam)
    return immanant(lam, M) / hook_dimension(lam)


def permanent(M) -> complex:
    """Permanent via Ryser's inclusion-exclusion formula in Gray-code order.

    The low columns are enumerated once into a table of row sums; the high
    columns are walked by an outer Gray code that adds a shared offset to
    the table.  Cost is O(2^n n).
    """
    M = as_matrix(M)
    n = M.shape[0]
    if n > MAX_PERMANENT_N:
        raise RangeError(f"permanent is supported up to n = {MAX_PERMANENT_N}")
    if n == 1:
        return complex(M[0, 0])
    low = min(n, _RYSER_INNER_BITS)
    high = n - low

    table = np.zeros((1 << low, n), dtype=np.complex128)
    parity = np.ones(1 << low)
    rowsum = np.zeros(n, dtype=np.complex128)
    inside = [False] * low
    for t in range(1, 1 << low):
        bit = (t & -t).bit_length() - 1
        if inside[bit]:
            rowsum -= M[:, bit]
        else:
            rowsum += M[:, bit]
        inside[bit] = not inside[bit]
        table[t] = rowsum
        parity[t] = -parity[t - 1]

    total = 0j
    offset = np.zeros(n, dtype=np.complex128)
    inside = [False] * high
    sign = 1.0
    for h in range(1 << high):
        if h:
            bit = (h & -h).bit_length() - 1
            col = M[:, low + bit]
            offset = offset - col if inside[bit] else offset + col
            inside[bit] = not inside[bit]
            sign = -sign
        total += sign * (parity @ np.prod(table + offset, axis=1))
    return complex((-1) ** n * total)


def determinant(M) -> complex:
    # LAPACK LU with partial pivoting
    return complex(np.linalg.det(as_matrix(M)))


def _lex_rank(perms: np.ndarray) -> np.ndarray:
    n = perms.shape[-1]
    rank = np.zeros(perms.shape[:-1], dtype=np.int64)
    for j in range(n - 1):
        smaller = (perms[..., j + 1 :] < perms[..., j : j + 1]).sum(axis=-1)
        rank += smaller * math.factorial(n - 1 - j)
    return rank


@lru_cache(maxsize=None)
def _quotient_classes(n: int) -> np.ndarray:
    """``out[r, p]`` = class index of ``rho_r^{-1} o pi_p`` over the lex table."""
    table = permutation_table(n)
    perms = table.perms.astype(np.intp)
    inverse = np.argsort(perms, axis=1)
    out = np.empty((len(perms), len(perms)), dtype=np.int8)
    step = 256
    for start in range(0, len(perms), step):
        inv = inverse[start : start + step]
        composed = np.take_along_axis(
            np.broadcast_to(inv[:, None, :], (len(inv), len(perms), n)),
            np.broadcast_to(perms[None, :, :], (len(inv), len(perms), n)),
            axis=2,
        )
        out[start : start + step] = table.class_index[_lex_rank(composed)]
    out.setflags(write=False)
    return out


def column_permuted_immanants(lam, M) -> np.ndarray:
    """``imm_lam(M_rho)`` for every rho in S_n, rho in lexicographic order.

    ``M_rho`` has columns permuted by rho: column k of ``M_rho`` is column
    ``rho(k)`` of ``M``.  With ``p_pi`` the product along permutation pi,
    ``imm_lam(M_rho) = sum_pi chi_lam(rho^{-1} pi) p_pi``, so the products
    are computed once and only the character weights change with rho.
    """
    lam = as_partition(lam)
    M = as_matrix(M)
    _check_sizes(lam, M)
    n = M.shape[0]
    if n > MAX_COLUMN_PERMUTED_N:
        raise RangeError(f"column-permuted immanants are supported up to n = {MAX_COLUMN_PERMUTED_N}")
    prods = _products(M, permutation_table(n).perms)
    weights = _class_weights(lam)[_quotient_classes(n)]
    return weights @ prods


# -- matrix JSON format -----------------------------------------------------


def matrix_to_json(M, **extra) -> dict:
    M = as_matrix(M)
    obj = {"n": int(M.shape[0]), "re": M.real.tolist(), "im": M.imag.tolist()}
    obj.update(extra)
    return obj


def matrix_from_json(obj) -> np.ndarray:
    """Parse ``{"n": int, "re": [[...]], "im": [[...]]}``; ``im`` may be omitted."""
    if not isinstance(obj, dict) or "re" not in obj:
        raise DomainError("matrix JSON must be an object with at least an 're' field")
    try:
        re = np.asarray(obj["re"], dtype=np.float64)
        im = np.asarray(obj["im"], dtype=np.float64) if "im" in obj else np.zeros_like(re)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"malformed matrix entries: {exc}") from None
    if re.shape != im.shape:
        raise DomainError(f"'re' and 'im' shapes differ: {re.shape} vs {im.shape}")
    M = as_matrix(re + 1j * im)
    if "n" in obj and obj["n"] != M.shape[0]:
        raise DomainError(f"declared n = {obj['n']} but matrix is {M.shape[0]}x{M.shape[0]}")
    return M


def load_matrix(path) -> np.ndarray:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DomainError(f"{path}: invalid JSON ({exc})") from None
    return matrix_from_json(obj)


def dump_matrix(M, path, **extra) -> None:
    Path(path).write_text(json.dumps(matrix_to_json(M, **extra)))
