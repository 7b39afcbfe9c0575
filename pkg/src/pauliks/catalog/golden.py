"""Exact golden-ratio arithmetic and the 600-cell ray system.

The 60 rays of the 600-cell have components in {0, ±1, ±2, ±tau, ±kappa}
where tau is the golden ratio and kappa = tau - 1 its inverse.  Working in
Q(sqrt 5) keeps every orthogonality decision exact; floats appear only when
rendering or handing vectors to the numeric pentagon machinery.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction

from ..rays import Basis, RBSet, Ray


class CatalogError(ValueError):
    """Unknown structure name or corrupted embedded data."""


@dataclass(frozen=True)
class GoldenNumber:
    """a + b*sqrt(5) with rational a and b."""

    a: Fraction
    b: Fraction

    @staticmethod
    def of(a=0, b=0) -> "GoldenNumber":
        return GoldenNumber(Fraction(a), Fraction(b))

    def __add__(self, other: "GoldenNumber") -> "GoldenNumber":
        return GoldenNumber(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "GoldenNumber") -> "GoldenNumber":
        return GoldenNumber(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "GoldenNumber":
        return GoldenNumber(-self.a, -self.b)

    def __mul__(self, other: "GoldenNumber") -> "GoldenNumber":
        return GoldenNumber(self.a * other.a + 5 * self.b * other.b,
                            self.a * other.b + self.b * other.a)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * 5 ** 0.5

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*sqrt5"
        sign = "+" if self.b > 0 else "-"
        return f"{self.a}{sign}{abs(self.b)}*sqrt5"


ZERO = GoldenNumber.of(0)
ONE = GoldenNumber.of(1)
TWO = GoldenNumber.of(2)
TAU = GoldenNumber.of(Fraction(1, 2), Fraction(1, 2))
KAPPA = TAU - ONE  # 1/tau; tau*kappa = 1 and tau*tau = tau + 1

_COMPONENT_TOKENS = {"0": ZERO, "1": ONE, "2": TWO, "t": TAU, "k": KAPPA}


def _component(token: str) -> GoldenNumber:
    if token.startswith("-"):
        return -_COMPONENT_TOKENS[token[1:]]
    return _COMPONENT_TOKENS[token]


@dataclass(frozen=True)
class RealRay4:
    """A projective ray of R^4 with exact golden-field components."""

    index: int
    components: tuple[GoldenNumber, GoldenNumber, GoldenNumber, GoldenNumber]

    def inner(self, other: "RealRay4") -> GoldenNumber:
        total = ZERO
        for x, y in zip(self.components, other.components):
            total = total + x * y
        return total

    def orthogonal(self, other: "RealRay4") -> bool:
        return self.inner(other).is_zero()

    def to_floats(self) -> tuple[float, float, float, float]:
        return tuple(float(c) for c in self.components)

    def unit(self) -> tuple[float, float, float, float]:
        raw = self.to_floats()
        norm = sum(x * x for x in raw) ** 0.5
        return tuple(x / norm for x in raw)

    def __str__(self) -> str:
        return f"({', '.join(str(c) for c in self.components)})"


# The 60 rays, one line per ray in index order 1..60.
_RAY_TABLE = """
2 0 0 0    | 0 2 0 0    | 0 0 2 0    | 0 0 0 2
1 1 1 1    | 1 1 -1 -1  | 1 -1 1 -1  | 1 -1 -1 1
1 -1 -1 -1 | 1 -1 1 1   | 1 1 -1 1   | 1 1 1 -1
k 0 -t -1  | 0 k 1 -t   | t -1 k 0   | 1 t 0 k
t k 0 -1   | 1 0 k t    | k -t -1 0  | 0 1 -t k
1 k t 0    | t 0 -1 k   | 0 t -k -1  | k -1 0 -t
t 0 1 k    | 0 t -k 1   | 1 -k -t 0  | k 1 0 -t
0 k 1 t    | t 1 -k 0   | k 0 t -1   | 1 -t 0 k
t -k 0 -1  | 0 1 -t -k  | 1 0 -k t   | k t 1 0
t 0 -1 -k  | 0 t k -1   | 1 -k t 0   | k 1 0 t
t 1 k 0    | 0 k -1 -t  | 1 -t 0 -k  | k 0 -t 1
0 1 t k    | t -k 0 1   | k t -1 0   | 1 0 k -t
k 0 t 1    | 0 k -1 t   | t -1 -k 0  | 1 t 0 -k
1 0 -k -t  | t k 0 1    | 0 1 t -k   | k -t 1 0
t 0 1 -k   | 1 k -t 0   | k -1 0 t   | 0 t k 1
"""

# The 75 bases as printed: 15 lines of 5 blocks, each block one basis.
# Reading order is preserved; every row and column of blocks tiles the 60
# rays by disjoint 24-cells.
_BASIS_TABLE = """
1 2 3 4     | 31 42 51 16 | 22 60 39 28 | 57 23 27 40 | 44 29 15 52
5 6 7 8     | 38 24 58 25 | 18 47 33 55 | 36 53 20 46 | 59 26 37 21
9 10 11 12  | 56 45 17 35 | 13 32 50 41 | 43 49 30 14 | 34 19 48 54
13 14 15 16 | 43 54 3 28  | 34 12 51 40 | 9 35 39 52  | 56 41 27 4
17 18 19 20 | 50 36 10 37 | 30 59 45 7  | 48 5 32 58  | 11 38 49 33
21 22 23 24 | 8 57 29 47  | 25 44 2 53  | 55 1 42 26  | 46 31 60 6
25 26 27 28 | 55 6 15 40  | 46 24 3 52  | 21 47 51 4  | 8 53 39 16
29 30 31 32 | 2 48 22 49  | 42 11 57 19 | 60 17 44 10 | 23 50 1 45
33 34 35 36 | 20 9 41 59  | 37 56 14 5  | 7 13 54 38  | 58 43 12 18
37 38 39 40 | 7 18 27 52  | 58 36 15 4  | 33 59 3 16  | 20 5 51 28
41 42 43 44 | 14 60 34 1  | 54 23 9 31  | 12 29 56 22 | 35 2 13 57
45 46 47 48 | 32 21 53 11 | 49 8 26 17  | 19 25 6 50  | 10 55 24 30
49 50 51 52 | 19 30 39 4  | 10 48 27 16 | 45 11 15 28 | 32 17 3 40
53 54 55 56 | 26 12 46 13 | 6 35 21 43  | 24 41 8 34  | 47 14 25 9
57 58 59 60 | 44 33 5 23  | 1 20 38 29  | 31 37 18 2  | 22 7 36 42
"""


def _parse_rays() -> tuple[RealRay4, ...]:
    rays = []
    cells = [cell.strip() for line in _RAY_TABLE.strip().splitlines()
             for cell in line.split("|")]
    for i, cell in enumerate(cells, start=1):
        comps = tuple(_component(tok) for tok in cell.split())
        if len(comps) != 4:
            raise CatalogError(f"ray {i} has {len(comps)} components")
        rays.append(RealRay4(i, comps))
    return tuple(rays)


def _parse_bases() -> tuple[tuple[int, int, int, int], ...]:
    bases = []
    for line in _BASIS_TABLE.strip().splitlines():
        for block in line.split("|"):
            quad = tuple(int(tok) for tok in block.split())
            if len(quad) != 4:
                raise CatalogError(f"basis block {block!r} is not 4 rays")
            bases.append(quad)
    return tuple(bases)


@dataclass(frozen=True)
class RaySystem600:
    """The 60 rays and 75 stored bases of the 600-cell (60_5-75_4)."""

    rays: tuple[RealRay4, ...]
    bases: tuple[tuple[int, int, int, int], ...]

    def ray(self, index: int) -> RealRay4:
        # table indices are 1-based
        return self.rays[index - 1]

    def orthogonality_pairs(self) -> list[tuple[int, int]]:
        return [(i, j)
                for i, j in itertools.combinations(range(1, 61), 2)
                if self.ray(i).orthogonal(self.ray(j))]

    def recomputed_bases(self) -> set[tuple[int, int, int, int]]:
        """All orthogonal 4-cliques over the rays, from scratch."""
        adjacent = {i: set() for i in range(1, 61)}
        for i, j in self.orthogonality_pairs():
            adjacent[i].add(j)
            adjacent[j].add(i)
        cliques = set()
        for a in range(1, 61):
            beyond_a = {x for x in adjacent[a] if x > a}
            for b in sorted(beyond_a):
                common_ab = {x for x in beyond_a & adjacent[b] if x > b}
                for c in sorted(common_ab):
                    for d in sorted(common_ab & adjacent[c]):
                        if d > c:
                            cliques.add((a, b, c, d))
        return cliques

    def multiplicities(self) -> dict[int, int]:
        counts = {i: 0 for i in range(1, 61)}
        for quad in self.bases:
            for i in quad:
                counts[i] += 1
        return counts


@functools.lru_cache(maxsize=1)
def cell600() -> RaySystem600:
    """Build and validate the embedded 600-cell tables."""
    system = RaySystem600(_parse_rays(), _parse_bases())
    for quad in system.bases:
        for i, j in itertools.combinations(quad, 2):
            if not system.ray(i).orthogonal(system.ray(j)):
                raise CatalogError(f"stored basis {quad} is not orthogonal "
                                   f"at rays {i},{j}")
    return system


@functools.lru_cache(maxsize=1)
def cell600_rb_set() -> RBSet:
    """The 60-75 system as an incidence-only RBSet for parity searching.

    Signatures are synthetic single-word markers; the rays carry no Pauli
    closure, so only basis-level search and coloring apply.
    """
    system = cell600()
    rays = tuple(Ray(signature=((f"{i:02d}", 1),), rank=1, origin=0)
                 for i in range(1, 61))
    bases = tuple(Basis(ray_indices=tuple(i - 1 for i in quad),
                        kind="eigenbasis", source=(b,))
                  for b, quad in enumerate(system.bases))
    return RBSet(n_qubits=2, rays=rays, bases=bases)
