"""Rays, bases and ray-basis sets built from ID eigenstructure.

A ray is the list of eigenvalues a joint eigenspace assigns to the closure
of an ID (all products of its rows).  Two rays are orthogonal when they
disagree on a shared observable.  Eigenbases mix into hybrid bases wherever
two IDs share part of their closures, and the whole collection forms an
R-B set whose symbol records ray multiplicities and basis sizes.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

from .ids import IdentityProduct, verify_id
from .pauli import PauliObservable, format_observable, product
from .proofs import KSProof

__all__ = [
    "Basis",
    "RBSet",
    "Ray",
    "RayError",
    "SharedRankError",
    "closure",
    "eigenbasis",
    "explicit_states",
    "generate_rb_set",
    "orthogonal",
    "rb_set_to_json",
]


class RayError(ValueError):
    """Ray or basis construction failure."""


class SharedRankError(RayError):
    """Two closures share too large a subgroup for hybrid search."""

    def __init__(self, s: int, limit: int):
        super().__init__(f"shared closure rank {s} exceeds limit {limit}; "
                         f"2^(2^{s}) hybrid selections are intractable")
        self.s = s
        self.limit = limit


@dataclass(frozen=True)
class Ray:
    """Eigenvalue signature over an ID's closure.

    signature maps each closure word to the eigenvalue of the positive
    observable carrying that word; signs of derived products are folded in.
    """

    signature: tuple[tuple[str, int], ...]
    rank: int
    origin: int

    @property
    def n_qubits(self) -> int:
        return len(self.signature[0][0])

    def eigenvalue(self, word: str) -> int | None:
        for w, value in self.signature:
            if w == word:
                return value
        return None

    def __str__(self) -> str:
        inner = ",".join(f"{w}:{'+' if v > 0 else '-'}"
                         for w, v in self.signature)
        return f"<{inner}>"


@dataclass(frozen=True)
class Basis:
    """Ray indices into an RBSet, pairwise orthogonal, ranks summing 2^N.

    source names the generating IDs: (i,) for an eigenbasis, (i, j) for a
    hybrid mixed from the rays of two intersecting IDs.
    """

    ray_indices: tuple[int, ...]
    kind: str  # "eigenbasis" or "hybrid"
    source: tuple[int, ...] = ()


def orthogonal(a: Ray, b: Ray) -> bool:
    """True when some shared closure word carries opposite eigenvalues."""
    if a.n_qubits != b.n_qubits:
        raise RayError("rays live on different qubit counts")
    values = dict(a.signature)
    return any(w in values and values[w] != v for w, v in b.signature)


# ---------------------------------------------------------------------------
# closures and eigenbases


def _pivot_rows(rows) -> list[int]:
    """Indices of a greedy GF(2)-independent row subset."""
    pivots: list[int] = []
    basis: list[int] = []
    n = rows[0].n_qubits
    for i, row in enumerate(rows):
        v = (row.z << n) | row.x
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
            pivots.append(i)
    return pivots


def closure(idp: IdentityProduct) -> list[tuple[str, int]]:
    """All distinct products of the ID's rows, with accumulated signs.

    One entry per word; the sign comes from the product over the
    generating subset of a fixed independent row set.  Sorted by word.
    """
    pivots = _pivot_rows(idp.rows)
    out = []
    for size in range(1, len(pivots) + 1):
        for combo in itertools.combinations(pivots, size):
            word, phase = product([idp.rows[i] for i in combo])
            out.append((format_observable(word), 1 if phase == 0 else -1))
    return sorted(out)


def eigenbasis(idp: IdentityProduct) -> list[Ray]:
    """Joint eigenrays of an ID: one per sign pattern on independent rows.

    An ID with M' independent rows has 2^M' rays of rank 2^(N-M'), so a
    critical ID M^N gets the 2^(M-1) rays of rank 2^(N-M+1) it should.
    """
    return _eigenbasis(idp, origin=-1)


def _eigenbasis(idp: IdentityProduct, origin: int) -> list[Ray]:
    pivots = _pivot_rows(idp.rows)
    mprime = len(pivots)
    n = idp.n_qubits
    elements = []  # (word, sign, pivot-subset mask)
    for size in range(1, mprime + 1):
        for combo in itertools.combinations(range(mprime), size):
            word, phase = product([idp.rows[pivots[k]] for k in combo])
            mask = sum(1 << k for k in combo)
            elements.append((format_observable(word),
                             1 if phase == 0 else -1, mask))
    rays = []
    rank = 1 << (n - mprime)
    for pattern in range(1 << mprime):
        sig = tuple(sorted(
            (word, sign * (1 - 2 * ((pattern & mask).bit_count() & 1)))
            for word, sign, mask in elements))
        rays.append(Ray(sig, rank, origin))
    return rays


# ---------------------------------------------------------------------------
# R-B sets


@dataclass(frozen=True)
class RBSet:
    """Every eigenbasis of a proof's IDs plus all pairwise hybrid bases."""

    n_qubits: int
    rays: tuple[Ray, ...]
    bases: tuple[Basis, ...]

    def multiplicities(self) -> list[int]:
        counts = [0] * len(self.rays)
        for basis in self.bases:
            for i in basis.ray_indices:
                counts[i] += 1
        return counts

    @property
    def symbol(self) -> str:
        """Expanded R^r_m - B_n symbol; rank superscripts only when mixed."""
        counts = self.multiplicities()
        left_groups: dict[tuple[int, int], int] = {}
        for ray, mult in zip(self.rays, counts):
            key = (ray.rank, mult)
            left_groups[key] = left_groups.get(key, 0) + 1
        uniform_rank = len({rank for rank, _ in left_groups}) == 1 and all(
            rank == 1 for rank, _ in left_groups)
        parts = []
        for rank, mult in sorted(left_groups, key=lambda k: (-k[1], k[0])):
            count = left_groups[(rank, mult)]
            if uniform_rank:
                parts.append(f"{count}_{mult}")
            else:
                parts.append(f"{count}^{rank}_{mult}")
        right_groups: dict[int, int] = {}
        for basis in self.bases:
            size = len(basis.ray_indices)
            right_groups[size] = right_groups.get(size, 0) + 1
        right = " ".join(f"{right_groups[size]}_{size}"
                         for size in sorted(right_groups, reverse=True))
        return f"{' '.join(parts)}-{right}"

    @property
    def compact_symbol(self) -> str:
        """Just R-B, total rays and total bases."""
        return f"{len(self.rays)}-{len(self.bases)}"

    def saturation_holds(self) -> bool:
        """Every orthogonal ray pair shares at least one basis."""
        together = set()
        for basis in self.bases:
            together.update(itertools.combinations(
                sorted(basis.ray_indices), 2))
        for i, j in itertools.combinations(range(len(self.rays)), 2):
            if orthogonal(self.rays[i], self.rays[j]):
                if (i, j) not in together:
                    return False
        return True


def _shared_rank(words: set[str]) -> int:
    basis: list[int] = []
    for word in sorted(words):
        v = 0
        for i, ch in enumerate(word):
            z = 1 if ch in "ZY" else 0
            x = 1 if ch in "XY" else 0
            v |= (z << (2 * i)) | (x << (2 * i + 1))
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    return len(basis)


def _complete_bases(rays: list[Ray], indices: list[int],
                    target: int) -> list[tuple[int, ...]]:
    """All pairwise-orthogonal selections with ranks summing to target."""
    ortho = []
    for a in range(len(indices)):
        mask = 0
        for b in range(len(indices)):
            if a != b and orthogonal(rays[indices[a]], rays[indices[b]]):
                mask |= 1 << b
        ortho.append(mask)
    found = []

    def extend(next_pos: int, allowed: int, chosen: list[int], total: int):
        if total == target:
            found.append(tuple(indices[k] for k in chosen))
            return
        for k in range(next_pos, len(indices)):
            if not (allowed >> k) & 1:
                continue
            rank = rays[indices[k]].rank
            if total + rank > target:
                continue
            chosen.append(k)
            extend(k + 1, allowed & ortho[k], chosen, total + rank)
            chosen.pop()

    extend(0, (1 << len(indices)) - 1, [], 0)
    return found


def generate_rb_set(source, max_shared_rank: int = 4) -> RBSet:
    """Eigenbases of all IDs plus every two-ID hybrid basis.

    source is a KSProof or any sequence of IDs (letter grids accepted);
    line systems that are not proofs, like the full 2-qubit doily, build
    the same way.  Hybrids are found by backtracking completion over the
    rays of each intersecting ID pair; their count per pair must match
    2^(2^s)-2 for a shared closure subgroup of rank s, which is asserted.
    """
    if hasattr(source, "ids"):
        ids = tuple(source.ids)
    else:
        ids = tuple(idp if isinstance(idp, IdentityProduct)
                    else verify_id(idp) for idp in source)
    n = ids[0].n_qubits
    rays: list[Ray] = []
    index: dict[tuple, int] = {}
    eigen_indices: list[list[int]] = []
    closure_words: list[set[str]] = []
    for i, idp in enumerate(ids):
        own = []
        for ray in _eigenbasis(idp, origin=i):
            if ray.signature not in index:
                index[ray.signature] = len(rays)
                rays.append(ray)
            own.append(index[ray.signature])
        eigen_indices.append(own)
        closure_words.append({w for w, _ in rays[own[0]].signature})

    bases = [Basis(tuple(own), "eigenbasis", (i,))
             for i, own in enumerate(eigen_indices)]
    seen = {frozenset(b.ray_indices) for b in bases}
    for i, j in itertools.combinations(range(len(ids)), 2):
        shared = closure_words[i] & closure_words[j]
        if not shared:
            continue
        s = _shared_rank(shared)
        if s > max_shared_rank:
            raise SharedRankError(s, max_shared_rank)
        pool = sorted(set(eigen_indices[i]) | set(eigen_indices[j]))
        pure = {frozenset(eigen_indices[i]), frozenset(eigen_indices[j])}
        hybrids = [sel for sel in _complete_bases(rays, pool, 1 << n)
                   if frozenset(sel) not in pure]
        if len(hybrids) != (1 << (1 << s)) - 2:
            raise RayError(
                f"ID pair ({i},{j}) with shared rank {s} yielded "
                f"{len(hybrids)} hybrids instead of {(1 << (1 << s)) - 2}")
        for sel in hybrids:
            key = frozenset(sel)
            if key not in seen:
                seen.add(key)
                bases.append(Basis(sel, "hybrid", (i, j)))
    return RBSet(n, tuple(rays), tuple(bases))


def rb_set_to_json(rbs: RBSet) -> str:
    payload = {
        "n_qubits": rbs.n_qubits,
        "symbol": rbs.symbol,
        "rays": [{"rank": ray.rank, "origin": ray.origin,
                  "signature": dict(ray.signature)} for ray in rbs.rays],
        "bases": [{"kind": basis.kind, "source": list(basis.source),
                   "rays": list(basis.ray_indices)}
                  for basis in rbs.bases],
    }
    return json.dumps(payload, indent=2, sort_keys=True)


# ---------------------------------------------------------------------------
# explicit eigenstates


_PAULI_MATS = {
    "I": np.eye(2, dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
}


def _word_matrix(word: str) -> np.ndarray:
    mat = _PAULI_MATS[word[0]]
    for ch in word[1:]:
        mat = np.kron(mat, _PAULI_MATS[ch])
    return mat


def ray_state(ray: Ray, n_qubits: int) -> np.ndarray:
    """Unit state vector of a rank-1 ray, from its signature projector."""
    if ray.rank != 1:
        raise RayError("explicit vectors exist only for rank-1 rays")
    dim = 1 << n_qubits
    proj = np.eye(dim, dtype=complex)
    for word, value in ray.signature:
        proj = proj @ (np.eye(dim) + value * _word_matrix(word)) / 2
    col = int(np.argmax(np.linalg.norm(proj, axis=0)))
    vec = proj[:, col]
    norm = np.linalg.norm(vec)
    if norm < 1e-8:
        raise RayError("signature projector vanished")
    vec = vec / norm
    lead = vec[np.argmax(np.abs(vec) > 1e-10)]
    return vec * (abs(lead) / lead)


def explicit_states(idp: IdentityProduct) -> list[np.ndarray]:
    """Numeric joint eigenvectors for a full-rank ID (M = N+1).

    Splits the identity with (I + eig*O)/2 projectors per independent row,
    which is exact up to rounding and never hits degeneracy trouble.
    """
    n = idp.n_qubits
    if idp.m != n + 1:
        raise RayError("explicit states need M = N+1")
    if n > 6:
        raise RayError("explicit states limited to N <= 6")
    dim = 1 << n
    mats = {format_observable(row): _word_matrix(format_observable(row))
            for row in idp.rows}
    states = []
    for ray in eigenbasis(idp):
        proj = np.eye(dim, dtype=complex)
        for row in idp.rows:
            word = format_observable(row)
            value = ray.eigenvalue(word)
            proj = proj @ (np.eye(dim) + value * mats[word]) / 2
        col = int(np.argmax(np.linalg.norm(proj, axis=0)))
        vec = proj[:, col]
        norm = np.linalg.norm(vec)
        if norm < 1e-8:
            raise RayError("projector vanished; ID is not a valid ID")
        vec = vec / norm
        lead = vec[np.argmax(np.abs(vec) > 1e-10)]
        vec = vec * (abs(lead) / lead)
        for row in idp.rows:
            word = format_observable(row)
            expected = ray.eigenvalue(word)
            if np.max(np.abs(mats[word] @ vec - expected * vec)) > 1e-10:
                raise RayError(f"eigenvalue check failed on {word}")
        states.append(vec)
    return states
