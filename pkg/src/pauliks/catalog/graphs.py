"""Graph-state stabilizers and their critical-ID content.

Each connected graph on N vertices defines N commuting generators
A_i = X_i prod_{j in N(i)} Z_j.  The generators together with their total
product form an (N+1)-row ID, and the 2^N-1 nontrivial stabilizer
elements can be scanned exhaustively for critical sub-IDs: a critical ID
with M rows has M-1 independent rows, so M never exceeds N+1 and the scan
over subset sizes 3..N+1 is complete.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce
from operator import xor

from ..ids import IdentityProduct, canonical_grid_key, is_critical_id
from ..ids import verify_id
from ..pauli import PauliObservable, format_observable, product
from .golden import CatalogError


def _check_adjacency(adjacency) -> tuple[tuple[int, ...], ...]:
    rows = tuple(tuple(int(v) for v in row) for row in adjacency)
    n = len(rows)
    if n < 2 or n > 6:
        raise CatalogError("graphs are supported for 2..6 vertices")
    if any(len(row) != n for row in rows):
        raise CatalogError("adjacency matrix must be square")
    for i in range(n):
        if rows[i][i]:
            raise CatalogError("no self-loops")
        for j in range(n):
            if rows[i][j] != rows[j][i] or rows[i][j] not in (0, 1):
                raise CatalogError("adjacency must be symmetric 0/1")
    seen = {0}
    frontier = [0]
    while frontier:
        i = frontier.pop()
        for j in range(n):
            if rows[i][j] and j not in seen:
                seen.add(j)
                frontier.append(j)
    if len(seen) != n:
        raise CatalogError("graph must be connected")
    return rows


def graph_generators(adjacency) -> list[PauliObservable]:
    """The stabilizer generators, X on the vertex and Z on its neighbors."""
    rows = _check_adjacency(adjacency)
    n = len(rows)
    gens = []
    for i in range(n):
        z = 0
        for j in range(n):
            if rows[i][j]:
                z |= 1 << j
        gens.append(PauliObservable(n, z, 1 << i))
    return gens


def graph_state_id(adjacency) -> IdentityProduct:
    """The (N+1)-row ID formed by the generators and their product."""
    gens = graph_generators(adjacency)
    total, _ = product(gens)
    grid = [format_observable(g) for g in gens] + [format_observable(total)]
    return verify_id(grid)


def stabilizer_words(adjacency) -> list[str]:
    """The 2^N-1 nontrivial stabilizer elements, indexed by generator mask."""
    gens = graph_generators(adjacency)
    n = len(gens)
    words = []
    for mask in range(1, 1 << n):
        members = [gens[i] for i in range(n) if mask >> i & 1]
        word, _ = product(members)
        words.append(format_observable(word))
    return words


@dataclass(frozen=True)
class StabilizerScan:
    n_vertices: int
    ids: tuple[IdentityProduct, ...]
    type_counts: dict[str, int]

    def types(self) -> frozenset:
        return frozenset(self.type_counts)


def scan_graph_state(adjacency, max_rows: int | None = None) -> StabilizerScan:
    """Every critical ID among the stabilizer elements, typed canonically.

    The N=6 scan visits C(63,6) row subsets at the top size and takes a
    few minutes; smaller graphs are instant.
    """
    words = stabilizer_words(adjacency)
    n = len(words).bit_length()  # 2^N-1 elements have bit length N
    top = n + 1 if max_rows is None else min(max_rows, n + 1)
    found = []
    counts: dict[str, int] = {}
    masks = list(range(1, len(words) + 1))
    for size in range(3, top + 1):
        for combo in itertools.combinations(masks, size - 1):
            last = reduce(xor, combo)
            if last <= combo[-1]:
                continue
            grid = [words[m - 1] for m in combo] + [words[last - 1]]
            idp = verify_id(grid)
            if not is_critical_id(idp):
                continue
            found.append(idp)
            key = canonical_grid_key(grid)
            counts[key] = counts.get(key, 0) + 1
    return StabilizerScan(n, tuple(found), counts)


_FOUR_VERTEX_EDGES = {
    "path": ((0, 1), (1, 2), (2, 3)),
    "star": ((0, 1), (0, 2), (0, 3)),
    "triangle_pendant": ((0, 1), (1, 2), (2, 0), (0, 3)),
    "cycle": ((0, 1), (1, 2), (2, 3), (3, 0)),
    "diamond": ((0, 1), (1, 2), (2, 0), (0, 3), (1, 3)),
    "complete": ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)),
}


def adjacency_from_edges(n: int, edges) -> tuple[tuple[int, ...], ...]:
    rows = [[0] * n for _ in range(n)]
    for i, j in edges:
        rows[i][j] = rows[j][i] = 1
    return tuple(tuple(r) for r in rows)


def connected_four_vertex_graphs() -> dict[str, tuple[tuple[int, ...], ...]]:
    """The six connected 4-vertex graphs up to isomorphism."""
    return {name: adjacency_from_edges(4, edges)
            for name, edges in _FOUR_VERTEX_EDGES.items()}


def entanglement_partition(graphs=None) -> list[list[str]]:
    """Group graphs by the canonical types of their critical-ID content."""
    if graphs is None:
        graphs = connected_four_vertex_graphs()
    by_content: dict[frozenset, list[str]] = {}
    for name in sorted(graphs):
        scan = scan_graph_state(graphs[name])
        by_content.setdefault(scan.types(), []).append(name)
    return sorted(by_content.values(), key=lambda c: (len(c), c))
