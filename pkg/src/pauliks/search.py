"""Colorability, parity-proof search and criticality over R-B sets.

One tree search instantiated three ways.  Colorability branches on the
basis with the most rays already forced to 0 and tries each remaining ray
as the 1.  Parity proofs come from two independent routes: GF(2) null
space enumeration of the ray-basis incidence (exhaustive) and a growth
search that keeps adding bases through odd-multiplicity rays (budget
friendly, used for size-targeted scans).  O_2-I sets with single-shared
observables get the closed-form 2^O hybrid-selection construction.
"""

from __future__ import annotations

import functools
import itertools
import json
import time
from dataclasses import dataclass

from .rays import RBSet, orthogonal

__all__ = [
    "BudgetExceededError",
    "ColoringVerdict",
    "FastPathError",
    "ParityProof",
    "ParitySearch",
    "SearchError",
    "basis_colorable",
    "classify_proofs",
    "fast_path_parity",
    "find_parity_proofs",
    "is_basis_critical",
    "is_ray_critical",
    "make_parity_proof",
    "proofs_to_jsonl",
    "ray_colorable",
]


class SearchError(ValueError):
    """Malformed search input."""


class BudgetExceededError(RuntimeError):
    def __init__(self, explored: int):
        super().__init__(f"search budget exhausted after {explored} nodes")
        self.explored = explored


class FastPathError(SearchError):
    """R-B set does not meet the 2^O construction preconditions."""


# ---------------------------------------------------------------------------
# colorability


@dataclass(frozen=True)
class ColoringVerdict:
    status: str  # "COLORABLE" or "UNCOLORABLE"
    witnesses: tuple[tuple[int, ...], ...]
    explored: int

    @property
    def colorable(self) -> bool:
        return self.status == "COLORABLE"


def _as_basis_masks(bases, n_rays=None):
    """Accept an RBSet or an iterable of ray index tuples."""
    if isinstance(bases, RBSet):
        masks = [sum(1 << i for i in b.ray_indices) for b in bases.bases]
        return masks, len(bases.rays), bases
    tuples = [tuple(b) for b in bases]
    if not tuples:
        raise SearchError("no bases given")
    size = max((max(b) for b in tuples if b), default=-1) + 1
    if n_rays is not None:
        size = max(size, n_rays)
    return [sum(1 << i for i in b) for b in tuples], size, None


class _SearchDone(Exception):
    """Internal signal: first witness found, caller only wanted existence."""


def _color_search(masks, n_rays, zero_links, node_budget, stop_first=False):
    """Exhaustive 0/1 assignment search; returns all witnesses.

    zero_links[r] is the ray mask forced to 0 whenever r is assigned 1.
    With stop_first the search aborts after the first witness.
    """
    witnesses = []
    explored = 0

    def recurse(ones: int, zeros: int):
        nonlocal explored
        explored += 1
        if node_budget is not None and explored > node_budget:
            raise BudgetExceededError(explored)
        best = -1
        best_zeros = -1
        for idx, mask in enumerate(masks):
            if mask & ones:
                continue
            open_rays = mask & ~zeros
            if not open_rays:
                return  # basis fully zeroed, dead branch
            z = (mask & zeros).bit_count()
            if z > best_zeros:
                best_zeros = z
                best = idx
        if best < 0:
            witnesses.append(tuple(
                i for i in range(n_rays) if (ones >> i) & 1))
            if stop_first:
                raise _SearchDone
            return
        mask = masks[best]
        open_rays = mask & ~zeros
        while open_rays:
            r = (open_rays & -open_rays).bit_length() - 1
            open_rays &= open_rays - 1
            forced = zero_links[r]
            if forced & ones:
                continue
            recurse(ones | (1 << r), zeros | forced)

    try:
        recurse(0, 0)
    except _SearchDone:
        pass
    return witnesses, explored


def _basis_links(masks, size):
    links = [0] * size
    for mask in masks:
        rest = mask
        while rest:
            r = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            links[r] |= mask & ~(1 << r)
    return links


def _has_coloring(masks, size, node_budget=None) -> bool:
    links = _basis_links(masks, size)
    witnesses, _ = _color_search(masks, size, links, node_budget,
                                 stop_first=True)
    return bool(witnesses)


def basis_colorable(bases, n_rays: int | None = None,
                    node_budget: int | None = None) -> ColoringVerdict:
    """Truth assignments with exactly one 1 per basis.

    Rays count as orthogonal only when they share a listed basis.
    """
    masks, size, _ = _as_basis_masks(bases, n_rays)
    links = _basis_links(masks, size)
    witnesses, explored = _color_search(masks, size, links, node_budget)
    status = "COLORABLE" if witnesses else "UNCOLORABLE"
    return ColoringVerdict(status, tuple(sorted(witnesses)), explored)


def ray_colorable(bases, orthogonal_pairs=None, n_rays: int | None = None,
                  node_budget: int | None = None) -> ColoringVerdict:
    """Like basis_colorable but zeros propagate across every orthogonal
    pair, not just within bases."""
    masks, size, rbset = _as_basis_masks(bases, n_rays)
    links = _basis_links(masks, size)
    if orthogonal_pairs is None:
        if rbset is None:
            raise SearchError("orthogonal_pairs required without an RBSet")
        orthogonal_pairs = [
            (i, j) for i, j in itertools.combinations(range(size), 2)
            if orthogonal(rbset.rays[i], rbset.rays[j])]
    for i, j in orthogonal_pairs:
        links[i] |= 1 << j
        links[j] |= 1 << i
    witnesses, explored = _color_search(masks, size, links, node_budget)
    status = "COLORABLE" if witnesses else "UNCOLORABLE"
    return ColoringVerdict(status, tuple(sorted(witnesses)), explored)


# ---------------------------------------------------------------------------
# parity proofs


@dataclass(frozen=True)
class ParityProof:
    basis_indices: tuple[int, ...]
    multiplicities: tuple[tuple[int, int], ...]  # (ray index, count)
    symbol: str
    expanded_symbol: str
    critical: bool


def _restricted_multiplicities(rbs: RBSet, bases):
    counts: dict[int, int] = {}
    for b in bases:
        for i in rbs.bases[b].ray_indices:
            counts[i] = counts.get(i, 0) + 1
    return counts


def make_parity_proof(rbs: RBSet, bases, critical: bool | None = None
                      ) -> ParityProof:
    """Validate a basis subset as a parity proof and build its symbols."""
    bases = tuple(sorted(bases))
    if len(bases) % 2 == 0:
        raise SearchError(f"{len(bases)} bases; a parity proof needs an "
                          f"odd count")
    counts = _restricted_multiplicities(rbs, bases)
    odd = [i for i, c in counts.items() if c % 2]
    if odd:
        raise SearchError(f"ray {odd[0]} appears {counts[odd[0]]} times")
    left_groups: dict[tuple[int, int], int] = {}
    for i, c in counts.items():
        key = (rbs.rays[i].rank, c)
        left_groups[key] = left_groups.get(key, 0) + 1
    uniform = all(rank == 1 for rank, _ in left_groups)
    parts = []
    for rank, mult in sorted(left_groups, key=lambda k: (-k[1], k[0])):
        n = left_groups[(rank, mult)]
        parts.append(f"{n}_{mult}" if uniform else f"{n}^{rank}_{mult}")
    sizes: dict[int, int] = {}
    for b in bases:
        size = len(rbs.bases[b].ray_indices)
        sizes[size] = sizes.get(size, 0) + 1
    right = " ".join(f"{sizes[s]}_{s}" for s in sorted(sizes, reverse=True))
    if critical is None:
        critical = (_support_null_dimension(rbs, bases) == 1
                    and _deletions_colorable(rbs, bases))
    return ParityProof(bases, tuple(sorted(counts.items())),
                       f"{len(counts)}-{len(bases)}",
                       f"{' '.join(parts)}-{right}", critical)


@functools.lru_cache(maxsize=16)
def _incidence_columns(rbs: RBSet):
    return [sum(1 << i for i in b.ray_indices) for b in rbs.bases]


def _null_space(columns) -> list[int]:
    """Basis-combination masks spanning the kernel of the incidence."""
    pivots: dict[int, tuple[int, int]] = {}
    null_basis = []
    for b, vec in enumerate(columns):
        combo = 1 << b
        while vec:
            msb = vec.bit_length() - 1
            if msb not in pivots:
                pivots[msb] = (vec, combo)
                break
            pv, pc = pivots[msb]
            vec ^= pv
            combo ^= pc
        else:
            null_basis.append(combo)
    return null_basis


def _support_null_dimension(rbs: RBSet, bases) -> int:
    """Dimension of the incidence kernel restricted to a basis subset.

    Dimension 1 means no smaller parity proof hides inside the support
    (any second kernel vector there would be one).  Necessary for
    basis-criticality but not sufficient: a deletion can leave a set
    that is uncolorable without being a parity proof.
    """
    columns = _incidence_columns(rbs)
    pivots: dict[int, int] = {}
    dim = 0
    for b in bases:
        vec = columns[b]
        while vec:
            msb = vec.bit_length() - 1
            if msb not in pivots:
                pivots[msb] = vec
                break
            vec ^= pivots[msb]
        else:
            dim += 1
    return dim


def _deletions_colorable(rbs: RBSet, bases) -> bool:
    """True when every single-basis deletion admits a coloring."""
    size = len(rbs.rays)
    columns = _incidence_columns(rbs)
    masks = [columns[b] for b in bases]
    for drop in range(len(masks)):
        kept = masks[:drop] + masks[drop + 1:]
        if _has_coloring(kept, size):
            continue
        return False
    return True


@dataclass(frozen=True)
class ParitySearch:
    proofs: tuple[ParityProof, ...]
    partial: bool
    method: str
    explored: int


def _nullspace_proofs(rbs: RBSet, min_bases, max_bases, max_count,
                      critical_only):
    null_basis = _null_space(_incidence_columns(rbs))
    dim = len(null_basis)
    if dim > 24:
        raise SearchError(f"null space dimension {dim} too large to "
                          f"enumerate; use the tree method")
    proofs = []
    partial = False
    combo = 0
    for selector in range(1, 1 << dim):
        # Gray-code walk: one basis vector flips per step
        combo ^= null_basis[(selector & -selector).bit_length() - 1]
        size = combo.bit_count()
        if size % 2 == 0:
            continue
        if min_bases is not None and size < min_bases:
            continue
        if max_bases is not None and size > max_bases:
            continue
        bases = tuple(i for i in range(len(rbs.bases)) if (combo >> i) & 1)
        proof = make_parity_proof(rbs, bases)
        if critical_only and not proof.critical:
            continue
        proofs.append(proof)
        if max_count is not None and len(proofs) >= max_count:
            partial = True
            break
    return proofs, partial, 1 << dim


def _tree_proofs(rbs: RBSet, min_bases, max_bases, max_count, time_budget,
                 critical_only):
    """Growth search: repeatedly cover the odd ray seen most often.

    Complete for critical proofs within the size window when the budget
    holds out: a critical proof has no even-parity proper subset, so from
    any of its bases the odd-ray chain reaches the whole proof.
    """
    columns = _incidence_columns(rbs)
    by_ray: dict[int, list[int]] = {}
    for b, col in enumerate(columns):
        rest = col
        while rest:
            r = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            by_ray.setdefault(r, []).append(b)
    deadline = None if time_budget is None else time.monotonic() + time_budget
    cap = max_bases if max_bases is not None else len(rbs.bases)
    seen: set[frozenset] = set()
    found: dict[tuple, ParityProof] = {}
    explored = 0
    partial = False

    def grow(chosen: frozenset, counts: dict[int, int]):
        nonlocal explored, partial
        if partial:
            return
        explored += 1
        if deadline is not None and time.monotonic() > deadline:
            partial = True
            return
        odd = [(c, -r) for r, c in counts.items() if c % 2]
        if not odd:
            if len(chosen) % 2 == 1 and (min_bases is None
                                         or len(chosen) >= min_bases):
                key = tuple(sorted(chosen))
                if key not in found:
                    proof = make_parity_proof(rbs, key)
                    if not critical_only or proof.critical:
                        found[key] = proof
                        if max_count is not None and len(found) >= max_count:
                            partial = True
            return
        if len(chosen) >= cap:
            return
        _, neg_r = max(odd)
        for b in by_ray[-neg_r]:
            if b in chosen:
                continue
            nxt = chosen | {b}
            if nxt in seen:
                continue
            seen.add(nxt)
            counts2 = dict(counts)
            rest = columns[b]
            while rest:
                r = (rest & -rest).bit_length() - 1
                rest &= rest - 1
                counts2[r] = counts2.get(r, 0) + 1
            grow(nxt, counts2)

    for root in range(len(rbs.bases)):
        counts = {}
        rest = columns[root]
        while rest:
            r = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            counts[r] = 1
        grow(frozenset([root]), counts)
        if partial:
            break
    return list(found.values()), partial, explored


def find_parity_proofs(rbs: RBSet, *, min_bases=None, max_bases=None,
                       max_count=None, time_budget=None, method="auto",
                       critical_only=True) -> ParitySearch:
    """All parity proofs of an R-B set, critical ones by default.

    method "nullspace" enumerates the GF(2) kernel of the incidence and is
    exhaustive; "tree" grows basis sets through odd rays under budgets;
    "auto" picks nullspace when the kernel is small enough.
    """
    if method == "auto":
        dim = len(_null_space(_incidence_columns(rbs)))
        method = "nullspace" if dim <= 24 else "tree"
    if method == "nullspace":
        proofs, partial, explored = _nullspace_proofs(
            rbs, min_bases, max_bases, max_count, critical_only)
    elif method == "tree":
        proofs, partial, explored = _tree_proofs(
            rbs, min_bases, max_bases, max_count, time_budget, critical_only)
    else:
        raise SearchError(f"unknown method {method!r}")
    proofs.sort(key=lambda p: (len(p.basis_indices), p.basis_indices))
    return ParitySearch(tuple(proofs), partial, method, explored)


def _fast_path_pairs(rbs: RBSet):
    eigen_for_origin: dict[int, int] = {}
    pair_groups: dict[tuple, list[int]] = {}
    for idx, basis in enumerate(rbs.bases):
        if basis.kind == "eigenbasis":
            origin = rbs.rays[basis.ray_indices[0]].origin
            eigen_for_origin[origin] = idx
        else:
            pair_groups.setdefault(basis.source, []).append(idx)
    pairs = sorted(pair_groups)
    for key in pairs:
        if len(pair_groups[key]) != 2:
            raise FastPathError(
                f"ID pair {key} has {len(pair_groups[key])} hybrid bases; "
                f"the 2^O construction needs complementary pairs")
    return eigen_for_origin, pair_groups, pairs


def fast_path_count(rbs: RBSet) -> int:
    """Number of proofs the 2^O construction yields, without building them."""
    _, _, pairs = _fast_path_pairs(rbs)
    return 1 << len(pairs)


def fast_path_parity(rbs: RBSet, critical: bool | None = None,
                     limit: int | None = None) -> list[ParityProof]:
    """The 2^O construction for sets whose ID pairs share one observable.

    Every complementary hybrid pair contributes one chosen basis; each ID
    whose rays come out odd contributes its eigenbasis.  Proofs are
    returned in selection order, so selection k and its bitwise complement
    2^O-1-k are complementary constructions.  critical is forwarded to
    make_parity_proof; pass False to skip the per-proof criticality check
    when enumerating large selections, or set limit to stop early.
    """
    eigen_for_origin, pair_groups, pairs = _fast_path_pairs(rbs)
    columns = _incidence_columns(rbs)
    proofs = []
    total = 1 << len(pairs)
    if limit is not None:
        total = min(total, limit)
    for selector in range(total):
        chosen = [pair_groups[pairs[k]][(selector >> k) & 1]
                  for k in range(len(pairs))]
        parity = 0
        for b in chosen:
            parity ^= columns[b]
        for origin in sorted(eigen_for_origin):
            eigen = eigen_for_origin[origin]
            probe = columns[eigen]
            first = probe & -probe
            if parity & first:
                chosen.append(eigen)
                parity ^= probe
        if parity:
            raise FastPathError("selection left odd rays the eigenbases "
                                "cannot fix; shared structure is not O_2")
        proofs.append(make_parity_proof(rbs, chosen, critical=critical))
    return proofs


# ---------------------------------------------------------------------------
# criticality and bookkeeping


def is_basis_critical(rbs_or_bases, proof=None,
                      node_budget: int | None = None) -> bool:
    """True when deleting any one basis leaves a colorable set."""
    if proof is not None:
        masks, n_rays, _ = _as_basis_masks(rbs_or_bases)
        indices = list(proof.basis_indices if isinstance(proof, ParityProof)
                       else proof)
        subset = [masks[i] for i in indices]
    else:
        subset, n_rays, _ = _as_basis_masks(rbs_or_bases)
    if _has_coloring(subset, n_rays, node_budget):
        raise SearchError("criticality is defined for uncolorable sets")
    for drop in range(len(subset)):
        kept = [m for i, m in enumerate(subset) if i != drop]
        if not _has_coloring(kept, n_rays, node_budget):
            return False
    return True


def _mask_rays(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        out.append((mask & -mask).bit_length() - 1)
        mask &= mask - 1
    return tuple(out)


def is_ray_critical(bases, orthogonal_pairs=None, n_rays: int | None = None,
                    node_budget: int | None = None) -> bool:
    """True when deleting any one ray leaves a colorable set.

    Deleting a ray removes every basis containing it; zeros still flow
    across all listed orthogonal pairs among the remaining rays.
    """
    masks, size, rbset = _as_basis_masks(bases, n_rays)
    if orthogonal_pairs is None:
        if rbset is None:
            raise SearchError("orthogonal_pairs required without an RBSet")
        orthogonal_pairs = [
            (i, j) for i, j in itertools.combinations(range(size), 2)
            if orthogonal(rbset.rays[i], rbset.rays[j])]
    pairs = list(orthogonal_pairs)
    base_tuples = [_mask_rays(m) for m in masks]
    if ray_colorable(base_tuples, pairs, size, node_budget).colorable:
        raise SearchError("criticality is defined for uncolorable sets")
    rays_used = sorted({r for b in base_tuples for r in b})
    for gone in rays_used:
        kept_bases = [b for b in base_tuples if gone not in b]
        kept_pairs = [(i, j) for i, j in pairs if gone not in (i, j)]
        verdict = ray_colorable(kept_bases, kept_pairs, size, node_budget)
        if not verdict.colorable:
            return False
    return True


def classify_proofs(proofs) -> list[tuple[str, str, int]]:
    """Histogram over (compact symbol, expanded symbol), sorted."""
    counts: dict[tuple[str, str], int] = {}
    for proof in proofs:
        key = (proof.symbol, proof.expanded_symbol)
        counts[key] = counts.get(key, 0) + 1

    def order(item):
        (compact, _), _ = item
        rays, bases = compact.split("-")
        return (int(bases), int(rays), compact)

    return [(compact, expanded, n)
            for (compact, expanded), n in sorted(counts.items(), key=order)]


def proofs_to_jsonl(proofs) -> str:
    lines = []
    for proof in proofs:
        lines.append(json.dumps({
            "bases": list(proof.basis_indices),
            "symbol": proof.symbol,
            "expanded": proof.expanded_symbol,
            "critical": proof.critical,
        }, sort_keys=True))
    return "\n".join(lines) + ("\n" if lines else "")
