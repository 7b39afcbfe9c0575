"""Pentagon inequalities: conflict pentagons, coverage scans, product rings.

A pentagon is 5 rank-1 rays forming an orthogonal ring (each ray
orthogonal to its two neighbors).  No noncontextual assignment marks more
than 2 of the 5 projectors true, so <Sigma> <= 2 classically, while the
top eigenvalue of Sigma can reach sqrt(5).  Rings whose Sigma exceeds 2
are conflict pentagons.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


class PentagonError(ValueError):
    pass


SQRT5 = math.sqrt(5.0)
_RING_TOL = 1e-7


# ---------------------------------------------------------------------------
# input normalization


def _as_unit_vector(ray, dims=(3, 4)):
    """A unit vector from a RealRay4-like object, vector, or projector."""
    if hasattr(ray, "components") and hasattr(ray, "unit"):
        return np.array(ray.unit(), dtype=float)
    arr = np.asarray(ray)
    if arr.ndim == 2:
        if arr.shape[0] != arr.shape[1]:
            raise PentagonError("projector input must be square")
        vals, vecs = np.linalg.eigh(arr)
        big = np.nonzero(vals > 0.5)[0]
        if len(big) != 1:
            raise PentagonError(f"rank-{len(big)} projector; rays are rank 1")
        arr = vecs[:, big[0]]
    if arr.ndim != 1 or arr.size not in dims:
        raise PentagonError(f"rays must live in d of {dims}, got {arr.shape}")
    norm = float(np.linalg.norm(arr))
    if abs(norm - 1.0) > 1e-6:
        raise PentagonError(f"ray not normalized (|v| = {norm:.6f})")
    return arr / norm


def _gram_orthogonality(vectors, tol):
    mat = np.array(vectors)
    gram = np.abs(np.conj(mat) @ mat.T)
    pairs = []
    for i, j in itertools.combinations(range(len(vectors)), 2):
        if gram[i, j] <= tol:
            pairs.append((i, j))
    return pairs


# ---------------------------------------------------------------------------
# pentagon operators


@dataclass(frozen=True, eq=False)
class PentagonOperator:
    """Five rays in ring order with the top eigenvalue of their Sigma."""

    indices: tuple[int, int, int, int, int]
    vectors: tuple
    sigma_max: float

    def sigma(self) -> np.ndarray:
        mat = np.array(self.vectors)
        return np.conj(mat).T @ mat

    def key(self) -> tuple[int, ...]:
        return tuple(sorted(self.indices))

    def class_value(self) -> float:
        return round(self.sigma_max, 4)


def sigma_max_eig(rays, check_ring: bool = True) -> float:
    """Largest eigenvalue of the projector sum of 5 normalized rays."""
    vectors = [_as_unit_vector(r) for r in rays]
    if len(vectors) != 5:
        raise PentagonError("a pentagon has exactly 5 rays")
    if check_ring:
        for i in range(5):
            overlap = abs(np.vdot(vectors[i], vectors[(i + 1) % 5]))
            if overlap > _RING_TOL:
                raise PentagonError(
                    f"rays {i} and {(i + 1) % 5} are not orthogonal "
                    f"(|<i|i+1>| = {overlap:.3e}); not an orthogonal ring")
    mat = np.array(vectors)
    top = float(np.linalg.eigvalsh(np.conj(mat).T @ mat)[-1])
    if top > SQRT5 + 1e-9:
        raise PentagonError(f"eigenvalue {top} above the sqrt(5) ceiling")
    return top


def _five_cycles(adjacency: list[int], n: int):
    """One ring order per 5-set that closes a cycle, deduplicated.

    Canonical traversal: smallest ray first, second neighbor below the
    last; chords make the same 5-set close in several orders, so sets are
    deduplicated as they appear.
    """
    neighbors = [[j for j in range(n) if adjacency[i] >> j & 1]
                 for i in range(n)]
    seen = set()
    for v0 in range(n):
        above = adjacency[v0] >> (v0 + 1) << (v0 + 1)
        for v1 in neighbors[v0]:
            if v1 <= v0:
                continue
            for v2 in neighbors[v1]:
                if v2 <= v0 or v2 == v1:
                    continue
                for v3 in neighbors[v2]:
                    if v3 <= v0 or v3 == v1 or v3 == v2:
                        continue
                    closing = adjacency[v3] & above
                    for v4 in neighbors[v3]:
                        if (v4 <= v1 or v4 == v2 or v4 == v3
                                or not closing >> v4 & 1):
                            continue
                        ring = (v0, v1, v2, v3, v4)
                        key = tuple(sorted(ring))
                        if key not in seen:
                            seen.add(key)
                            yield ring


def find_conflict_pentagons(rays, orthogonality=None,
                            tol: float = 1e-9) -> list[PentagonOperator]:
    """All 5-cycles of the orthogonality graph with sigma_max > 2.

    rays are unit vectors (real or complex) or exact golden-ratio rays;
    orthogonality is an iterable of 0-based index pairs, computed from
    inner products when omitted (exactly, for exact rays).  Chorded
    cycles fall to the > 2 filter; each 5-set appears once.
    """
    rays = list(rays)
    exact = [r if hasattr(r, "orthogonal") else None for r in rays]
    vectors = [_as_unit_vector(r, dims=(4,)) for r in rays]
    n = len(vectors)
    if orthogonality is None:
        if all(r is not None for r in exact):
            orthogonality = [(i, j)
                             for i, j in itertools.combinations(range(n), 2)
                             if exact[i].orthogonal(exact[j])]
        else:
            orthogonality = _gram_orthogonality(vectors, tol)
    adjacency = [0] * n
    for i, j in orthogonality:
        adjacency[i] |= 1 << j
        adjacency[j] |= 1 << i
    rings = list(_five_cycles(adjacency, n))
    if not rings:
        return []
    stacked = np.array([[vectors[i] for i in ring] for ring in rings])
    sigmas = np.einsum("rid,rie->rde", np.conj(stacked), stacked)
    tops = np.linalg.eigvalsh(sigmas)[:, -1]
    if float(tops.max()) > SQRT5 + 1e-9:
        raise PentagonError("eigenvalue above the sqrt(5) ceiling")
    found = []
    for ring, top in zip(rings, tops):
        if top <= 2.0 + 1e-9:
            continue
        ring_exact = [exact[i] for i in ring]
        if all(r is not None for r in ring_exact):
            for a, b in zip(ring_exact, ring_exact[1:] + ring_exact[:1]):
                if not a.orthogonal(b):
                    raise PentagonError("ring edge fails exact orthogonality")
        found.append(PentagonOperator(
            indices=ring, vectors=tuple(vectors[i] for i in ring),
            sigma_max=float(top)))
    found.sort(key=lambda p: (-p.sigma_max, p.key()))
    return found


def pentagon_census(pentagons) -> dict[float, int]:
    """Counts by sigma_max rounded to 1e-4, strongest class first."""
    counts: dict[float, int] = {}
    for p in pentagons:
        counts[p.class_value()] = counts.get(p.class_value(), 0) + 1
    return dict(sorted(counts.items(), reverse=True))


# ---------------------------------------------------------------------------
# conflict-cap coverage


class CoverageResult(NamedTuple):
    minimum: float
    argmin: np.ndarray


_MONOMIAL_PAIRS = [(0, 0), (1, 1), (2, 2), (3, 3), (0, 1), (0, 2), (0, 3),
                   (1, 2), (1, 3), (2, 3)]


def _quadratic_forms(pentagons) -> np.ndarray:
    """Sigma of each pentagon as a 10-monomial row over real 4-vectors."""
    forms = np.empty((len(pentagons), 10))
    for k, p in enumerate(pentagons):
        sigma = p.sigma()
        if np.abs(sigma.imag).max() > 1e-12:
            raise PentagonError("real-state coverage needs real operators")
        s = sigma.real
        for c, (i, j) in enumerate(_MONOMIAL_PAIRS):
            forms[k, c] = s[i, j] if i == j else 2.0 * s[i, j]
    # strongest first, so the running max prunes points early
    order = np.argsort([-p.sigma_max for p in pentagons], kind="stable")
    return forms[order]


def _monomials(points: np.ndarray) -> np.ndarray:
    cols = [points[:, i] * points[:, j] if i == j
            else 2.0 * points[:, i] * points[:, j]
            for i, j in _MONOMIAL_PAIRS]
    return np.stack(cols, axis=1)


def state_values(states, pentagons) -> np.ndarray:
    """max over pentagons of <s|Sigma|s> for each state, real or complex."""
    mat = np.array([_as_unit_vector(s, dims=(4,)) for s in states])
    best = np.full(len(mat), -np.inf)
    chunk = 2048
    all_rays = np.array([v for p in pentagons for v in p.vectors])
    for lo in range(0, all_rays.shape[0], 5 * chunk):
        part = all_rays[lo:lo + 5 * chunk]
        amp = np.abs(np.conj(part) @ mat.T) ** 2
        sums = amp.reshape(-1, 5, mat.shape[0]).sum(axis=1)
        best = np.maximum(best, sums.max(axis=0))
    return best


def _mesh_axis(stop: float, step: float) -> np.ndarray:
    return np.arange(0.0, stop, step)


def _eval_batch(points, forms, best, chunk=3600):
    """Per-point max of the forms, pruning points that exceed best.

    Pruned points keep a partial max, which already exceeds best, so the
    batch minimum and its location are unaffected.
    """
    mono = _monomials(points)
    running = (mono @ forms[:chunk].T).max(axis=1)
    alive = np.nonzero(running < best)[0]
    pos = chunk
    while pos < forms.shape[0] and alive.size:
        vals = mono[alive] @ forms[pos:pos + chunk].T
        running[alive] = np.maximum(running[alive], vals.max(axis=1))
        alive = alive[running[alive] < best]
        pos += chunk
    return running


def coverage_scan(rays, pentagons, mesh_step: float = 0.02,
                  refine: bool = False, refine_cells: int = 100,
                  refine_factor: int = 10) -> CoverageResult:
    """Minimum over a real-state mesh of the strongest pentagon response.

    Real rays: the mesh runs over r = (cos(phi) sin(t1) sin(t2),
    sin(phi) sin(t1) sin(t2), cos(t1) sin(t2), cos(t2)) with phi in
    [0, 2pi) and t1, t2 in [0, pi).  Points are dropped once their
    running max exceeds the best minimum so far; the true minimum always
    survives the pruning.  refine reruns a 10x finer local mesh around
    the lowest fully-evaluated cells.

    Complex pentagon operators have no real-state mesh; for those the
    scan evaluates the given rays themselves and reports their minimum.
    """
    pentagons = list(pentagons)
    if not pentagons:
        raise PentagonError("coverage needs at least one pentagon")
    complex_ops = any(np.iscomplexobj(np.asarray(p.vectors)) and
                      np.abs(np.asarray(p.vectors).imag).max() > 1e-12
                      for p in pentagons)
    if complex_ops:
        mat = [_as_unit_vector(r, dims=(4,)) for r in rays]
        values = state_values(mat, pentagons)
        at = int(np.argmin(values))
        return CoverageResult(float(values[at]), mat[at])
    forms = _quadratic_forms(pentagons)
    best = math.inf
    argmin = None
    lowest: list[tuple[float, float, float, float]] = []
    phis = _mesh_axis(2 * math.pi, mesh_step)
    thetas = _mesh_axis(math.pi, mesh_step)
    cos_p, sin_p = np.cos(phis), np.sin(phis)
    cos_t, sin_t = np.cos(thetas), np.sin(thetas)
    pp, tt = np.meshgrid(np.arange(len(phis)), np.arange(len(thetas)),
                         indexing="ij")
    pp, tt = pp.ravel(), tt.ravel()
    plane = np.empty((len(pp), 4))
    batch = 4096
    for k2 in range(len(thetas)):
        # one (phi, t1) slab per t2 value
        plane[:, 0] = cos_p[pp] * sin_t[tt] * sin_t[k2]
        plane[:, 1] = sin_p[pp] * sin_t[tt] * sin_t[k2]
        plane[:, 2] = cos_t[tt] * sin_t[k2]
        plane[:, 3] = cos_t[k2]
        for lo in range(0, plane.shape[0], batch):
            pts = plane[lo:lo + batch]
            running = _eval_batch(pts, forms, best)
            at = int(np.argmin(running))
            value = float(running[at])
            if value < best:
                best = value
                argmin = pts[at].copy()
            if refine:
                for off in np.argsort(running)[:8]:
                    i = lo + int(off)
                    heapq.heappush(lowest, (-float(running[off]),
                                            phis[pp[i]], thetas[tt[i]],
                                            thetas[k2]))
                    if len(lowest) > refine_cells:
                        heapq.heappop(lowest)
    if refine and lowest:
        fine = mesh_step / refine_factor
        offsets = np.arange(-mesh_step, mesh_step + fine / 2, fine)
        for _, phi0, t10, t20 in sorted(lowest, reverse=True):
            pg, t1g, t2g = np.meshgrid(phi0 + offsets, t10 + offsets,
                                       t20 + offsets, indexing="ij")
            pts = np.empty((pg.size, 4))
            pts[:, 0] = (np.cos(pg) * np.sin(t1g) * np.sin(t2g)).ravel()
            pts[:, 1] = (np.sin(pg) * np.sin(t1g) * np.sin(t2g)).ravel()
            pts[:, 2] = (np.cos(t1g) * np.sin(t2g)).ravel()
            pts[:, 3] = np.cos(t2g).ravel()
            running = _eval_batch(pts, forms, best)
            at = int(np.argmin(running))
            if float(running[at]) < best:
                best = float(running[at])
                argmin = pts[at].copy()
    return CoverageResult(best, argmin)


# ---------------------------------------------------------------------------
# Klyachko's d=3 pentagon


def klyachko_pentagon() -> list[np.ndarray]:
    """The real d=3 ring whose Sigma reaches sqrt(5)."""
    cos2 = 1.0 / SQRT5
    ct = math.sqrt(cos2)
    st = math.sqrt(1.0 - cos2)
    rays = []
    for j in range(5):
        phi = 4.0 * math.pi * j / 5.0
        rays.append(np.array([st * math.cos(phi), st * math.sin(phi), ct]))
    return rays


# ---------------------------------------------------------------------------
# product pentagons

PRODUCT_PATTERNS = ("11112", "11122", "11212")


def _pattern_assignments(pattern: str):
    """Per-vertex single-qubit state assignments for an edge pattern.

    Edges i..(i+1 mod 5) are labeled by which qubit carries the
    orthogonality.  On each qubit the labeled edges split into paths;
    each path gets one angle, vertices alternating between the two states
    of its orthogonal pair.  Unpaired vertices sit at |0>.
    """
    if len(pattern) != 5 or set(pattern) - {"1", "2"}:
        raise PentagonError("pattern is 5 edge labels from {1, 2}")
    if len(set(pattern)) == 1:
        raise PentagonError("a d=2 factor cannot carry a full 5-ring")
    assignment = {(v, q): ("zero", 0) for v in range(5) for q in (1, 2)}
    n_params = 0
    for qubit in (1, 2):
        edges = {i for i, lab in enumerate(pattern) if lab == str(qubit)}
        rest = sorted(edges)
        while rest:
            # walk a maximal path of same-qubit edges
            path = [rest.pop(0)]
            grown = True
            while grown:
                grown = False
                for e in list(rest):
                    if (path[-1] + 1) % 5 == e:
                        path.append(e)
                        rest.remove(e)
                        grown = True
                    elif (e + 1) % 5 == path[0]:
                        path.insert(0, e)
                        rest.remove(e)
                        grown = True
            vertices = [path[0]] + [(e + 1) % 5 for e in path]
            for pos, v in enumerate(vertices):
                kind = "a" if pos % 2 == 0 else "b"
                assignment[(v, qubit)] = (kind, n_params)
            n_params += 1
    return assignment, n_params


def product_pentagon_states(pattern: str, thetas) -> list[np.ndarray]:
    """The 5 two-qubit product states of a configured pentagon."""
    assignment, n_params = _pattern_assignments(pattern)
    thetas = list(thetas)
    if len(thetas) != n_params:
        raise PentagonError(f"pattern {pattern} takes {n_params} angles")

    def single(kind, k):
        if kind == "zero":
            return np.array([1.0, 0.0])
        c, s = math.cos(thetas[k]), math.sin(thetas[k])
        return np.array([c, s]) if kind == "a" else np.array([s, -c])

    states = []
    for v in range(5):
        u = single(*assignment[(v, 1)])
        w = single(*assignment[(v, 2)])
        states.append(np.kron(u, w))
    for i in range(5):
        if abs(np.dot(states[i], states[(i + 1) % 5])) > _RING_TOL:
            raise PentagonError("product assignment broke the ring")
    return states


def product_pentagon_value(pattern: str, thetas) -> float:
    """<00|Sigma|00> for one configured product pentagon."""
    states = product_pentagon_states(pattern, thetas)
    return float(sum(s[0] ** 2 for s in states))


def _pattern_value_grid(pattern: str, axes) -> tuple[float, tuple]:
    """Grid max of <00|Sigma|00> with its angle location, vectorized."""
    assignment, n_params = _pattern_assignments(pattern)
    axes = list(axes)
    if len(axes) != n_params:
        raise PentagonError(f"pattern {pattern} takes {n_params} axes")
    grids = np.meshgrid(*axes, indexing="ij", sparse=True)
    total = np.zeros(tuple(len(a) for a in axes))
    for v in range(5):
        term = np.array(1.0)
        for q in (1, 2):
            kind, k = assignment[(v, q)]
            if kind == "a":
                term = term * np.cos(grids[k]) ** 2
            elif kind == "b":
                term = term * np.sin(grids[k]) ** 2
        total = total + term
    at = np.unravel_index(int(np.argmax(total)), total.shape)
    return float(total.max()), tuple(axes[k][i] for k, i in enumerate(at))


def product_pentagon_max(grid_points: int = 21, refine: bool = True) -> float:
    """Global max of <00|Sigma|00> over all product-pentagon shapes.

    Grid search over each configuration's angles with local refinement
    around the best cell; the diagonal orthogonality of two shapes pins
    them at exactly 2, and the third peaks at 2, so entangled rays are
    needed to beat the classical bound.
    """
    best = -math.inf
    for pattern in PRODUCT_PATTERNS:
        _, n_params = _pattern_assignments(pattern)
        axes = [np.linspace(0.0, math.pi, grid_points)] * n_params
        value, peak = _pattern_value_grid(pattern, axes)
        if refine:
            width = math.pi / max(grid_points - 1, 1)
            for _ in range(4):
                axes = [np.linspace(t - width, t + width, grid_points)
                        for t in peak]
                value, peak = _pattern_value_grid(pattern, axes)
                width /= max(grid_points - 1, 1) / 2.0
        best = max(best, value)
    return best
