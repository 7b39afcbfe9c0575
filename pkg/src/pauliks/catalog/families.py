"""Parameterized structure families: wheels, whorls, stars, and kites.

Each builder returns verified engine objects, so a malformed construction
fails at build time rather than in a later search.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

from ..ids import IdentityProduct, verify_id
from ..kernels import Kernel, verify_kernel
from ..proofs import KSProof, generate_proof_from_kernel, verify_ks_proof
from .golden import CatalogError


def _word(n: int, letters: dict[int, str]) -> str:
    return "".join(letters.get(q, "I") for q in range(n))


def _same_letter_pair(n: int, i: int, j: int, letter: str) -> str:
    return _word(n, {i: letter, j: letter})


# ---------------------------------------------------------------------------
# wheels (odd qubit count) and whorls (even qubit count)


def _wheel_spokes(n: int) -> list[list[str]]:
    return [[_same_letter_pair(n, i, (i + 1) % n, letter) for letter in "ZXY"]
            for i in range(n)]


def wheel_kernel(n: int) -> Kernel:
    """n spokes of {ZZ, XX, YY} on adjacent qubit pairs around a ring."""
    if n < 3 or n % 2 == 0:
        raise CatalogError(f"a wheel needs an odd qubit count >= 3, got {n}")
    return verify_kernel(_wheel_spokes(n))


def _circle_sides(rows: list[str], letter: str) -> list[list[str]]:
    """Replace a circle by its ring of 3-observable closure IDs.

    Corner k is the product of the full circle word with rows 0..k-1, so
    consecutive corners differ by row k and {row, corner, next corner} is
    a positive ID.
    """
    n = len(rows[0])
    corners = [_word(n, {q: letter for q in range(n)})]
    for row in rows[:-1]:
        support = {q for q in range(n) if corners[-1][q] != "I"}
        support ^= {q for q in range(n) if row[q] != "I"}
        corners.append(_word(n, {q: letter for q in support}))
    return [[rows[k], corners[k], corners[(k + 1) % len(rows)]]
            for k in range(len(rows))]


def wheel(n: int, expanded_circles: int = 0) -> KSProof:
    """Wheel proof: spokes plus one closure circle per letter.

    expanded_circles in 0..3 replaces that many circles (Z first, then X,
    then Y) with their rings of corner IDs.
    """
    if not 0 <= expanded_circles <= 3:
        raise CatalogError("a wheel has 3 circles; expand 0..3 of them")
    kernel = wheel_kernel(n)
    ids: list[list[str]] = [list(idp.letters()) for idp in kernel.ids]
    for k, letter in enumerate("ZXY"):
        circle = [_same_letter_pair(n, i, (i + 1) % n, letter)
                  for i in range(n)]
        if k < expanded_circles:
            ids.extend(_circle_sides(circle, letter))
        else:
            ids.append(circle)
    return verify_ks_proof(ids)


def whorl_kernel(n: int) -> Kernel:
    """n-1 plain spokes plus one letter-twisted spoke closing the ring."""
    if n < 4 or n % 2:
        raise CatalogError(f"a whorl needs an even qubit count >= 4, got {n}")
    ids = [[_same_letter_pair(n, i, i + 1, letter) for letter in "ZXY"]
           for i in range(n - 1)]
    # the twist swaps Z and X across the seam, flipping the spoke's sign
    ids.append([_word(n, {0: "X", n - 1: "Z"}),
                _word(n, {0: "Z", n - 1: "X"}),
                _word(n, {0: "Y", n - 1: "Y"})])
    return verify_kernel(ids)


def whorl(n: int, expanded_circles: int = 0) -> KSProof:
    """Whorl proof: spokes, the all-Y central circle, and the Moebius ring
    of single-letter decompositions.

    expanded_circles in 0..1 replaces the central circle with its ring of
    single-Y closure IDs.
    """
    if not 0 <= expanded_circles <= 1:
        raise CatalogError("a whorl has one circle; expand 0 or 1 of them")
    kernel = whorl_kernel(n)
    ids: list[list[str]] = [list(idp.letters()) for idp in kernel.ids]
    pairs = [(i, i + 1) for i in range(n - 1)] + [(n - 1, 0)]
    circle = [_same_letter_pair(n, i, j, "Y") for i, j in pairs]
    if expanded_circles:
        for k, (i, j) in enumerate(pairs):
            ids.append([circle[k], _word(n, {i: "Y"}), _word(n, {j: "Y"})])
    else:
        ids.append(circle)
    for i in range(n - 1):
        for letter in "ZX":
            row = _same_letter_pair(n, i, i + 1, letter)
            ids.append([row, _word(n, {i: letter}), _word(n, {i + 1: letter})])
    ids.append([_word(n, {0: "X", n - 1: "Z"}),
                _word(n, {0: "X"}), _word(n, {n - 1: "Z"})])
    ids.append([_word(n, {0: "Z", n - 1: "X"}),
                _word(n, {0: "Z"}), _word(n, {n - 1: "X"})])
    return verify_ks_proof(ids)


# ---------------------------------------------------------------------------
# star kernels: single whole IDs of M = N+1 observables


def star_kernel(n: int) -> Kernel:
    """The single-ID kernel with N+1 observables on N qubits.

    Odd N: Z^N plus the N cyclic shifts of XZX I^(N-3).  Even N has no
    such cyclic form; the pattern seeds X pairs down the diagonal instead.
    """
    if n < 3:
        raise CatalogError(f"star kernels start at 3 qubits, got {n}")
    if n % 2:
        base = "XZX" + "I" * (n - 3)
        rows = ["Z" * n]
        rows += ["".join(base[(i - k) % n] for i in range(n))
                 for k in range(n)]
    else:
        rows = ["Z" * n,
                "XX" + "Z" * (n - 2),
                _word(n, {0: "Z", 1: "X", 2: "X"}),
                _word(n, {0: "X", 1: "Z", 3: "X"})]
        rows += [_word(n, {r - 1: "X", r: "X"}) for r in range(4, n)]
        rows.append(_word(n, {2: "X", n - 1: "X"}))
    return verify_kernel([rows])


# ---------------------------------------------------------------------------
# kites: two long IDs sharing all but two observables


@dataclass(frozen=True)
class KiteStructure:
    """A kite kernel with its tabulated base ID and generated proof."""

    variant: str
    n_qubits: int
    base: IdentityProduct
    partner: IdentityProduct
    kernel: Kernel
    proof: KSProof

    @property
    def m(self) -> int:
        return self.base.m

    def shared_observables(self) -> list[str]:
        return [w for w in self.base.letters() if w in self.partner.letters()]


KITE_VARIANTS = ("odd_Np1", "even_Np1", "even_halfN",
                 "M5N7", "M6N11", "M7N16")

_KITE_EXEMPLARS = {
    # fixed-size varieties: (rows, bold row pair, qubit count)
    "M5N7": (["ZZZZZII", "XXZXXZZ", "YIXZZXX", "IYIXIZX", "IIXIXXZ"],
             (0, 1), 7),
    "M6N11": (["IIZZZZZZZZZ", "ZIZZZXXIXXI", "IZXXIZZZIII",
               "XIXIXXIXZXX", "IXIXIIXIIZZ", "YYIIXIIXXIX"],
              (1, 3), 11),
    "M7N16": (["ZZZZZZZZIIIIIIII", "XXXXIIIIZZZZIIII", "YIIIXXXIXIIIZZII",
               "IYIIYIIIIXXXXIZI", "IIIIIYIXYYIIIIXZ", "IIYIIIIYIIYIYXIX",
               "IIIYIIYIIIIYIYYY"],
              (0, 1), 16),
}


def _kite_rows(variant: str, size: int | None) -> tuple[list[str],
                                                        tuple[int, int]]:
    if variant in _KITE_EXEMPLARS:
        rows, bold, n = _KITE_EXEMPLARS[variant]
        if size is not None and size != n:
            raise CatalogError(f"{variant} is fixed at {n} qubits")
        return list(rows), bold
    if size is None:
        raise CatalogError(f"variant {variant} needs a qubit count")
    n = size
    if variant == "odd_Np1":
        if n < 3 or n % 2 == 0:
            raise CatalogError(f"odd_Np1 needs odd size >= 3, got {n}")
        rows = [_word(n, {i: "Z", n - 1: "Z"}) for i in range(n - 1)]
        rows.append("X" * n)
        rows.append(_word(n, {**{q: "Y" for q in range(n - 1)}, n - 1: "X"}))
        return rows, (0, n - 1)
    if variant == "even_Np1":
        if n < 4 or n % 2:
            raise CatalogError(f"even_Np1 needs even size >= 4, got {n}")
        rows = ["Z" * n, "YY" + "Z" * (n - 2)]
        rows += [_word(n, {r - 2: "X", r: "X"}) for r in range(2, n)]
        rows.append(_word(n, {n - 2: "X", n - 1: "X"}))
        return rows, (0, 2)
    if variant == "even_halfN":
        if n < 4 or n % 2:
            raise CatalogError(f"even_halfN needs even size >= 4, got {n}")
        m = n // 2 + 2
        placed: list[dict[int, str]] = [dict() for _ in range(m)]
        placed[0].update({0: "Z", 1: "Z", 2: "Z"})
        for r in range(1, m - 1):
            placed[r].update({2 * r - 2: "Y", 2 * r - 1: "Y"})
        for r in range(1, m - 3):
            placed[r].update({2 * r + 1: "Z", 2 * r + 2: "Z"})
        placed[m - 3][n - 1] = "Z"
        placed[2][0] = "X"
        for r in range(1, m - 3):
            placed[m - 1 - r].update({n - 2 * r - 3: "X", n - 2 * r - 2: "X"})
        placed[m - 1].update({n - 3: "X", n - 2: "X", n - 1: "X"})
        return [_word(n, p) for p in placed], (0, 2)
    raise CatalogError(f"unknown kite variant {variant!r}; "
                       f"choose one of {KITE_VARIANTS}")


def kite_family(variant: str, size: int | None = None) -> KiteStructure:
    """A kite kernel: the tabulated ID and its letter-transposed twin.

    The twin swaps the two marked letters within one Odd column, which
    flips the product sign, so the pair is a kernel sharing M-2
    observables.
    """
    rows, (r1, r2) = _kite_rows(variant, size)
    twin = list(rows)
    a, b = twin[r1], twin[r2]
    twin[r1] = b[0] + a[1:]
    twin[r2] = a[0] + b[1:]
    base = verify_id(rows)
    partner = verify_id(twin)
    kernel = verify_kernel([rows, twin])
    proof = generate_proof_from_kernel(kernel)
    return KiteStructure(variant, base.n_qubits, base, partner, kernel,
                         proof)


# ---------------------------------------------------------------------------
# the nine-basis kite proof, at signature level


_NINE_BASE_RAYS: tuple[tuple[tuple[str, int], ...], ...] = (
    (("A", 1), ("B", 1), ("G", 1)),
    (("A", 1), ("B", -1), ("G", -1)),
    (("A", -1), ("B", 1), ("G", -1)),
    (("A", 1), ("C", 1), ("F", 1)),
    (("A", -1), ("C", 1), ("F", -1)),
    (("A", -1), ("C", -1), ("F", 1)),
    (("B", 1), ("D", 1), ("E", 1)),
    (("B", -1), ("D", 1), ("E", -1)),
    (("B", -1), ("D", -1), ("E", 1)),
    (("C", 1), ("D", -1), ("H", -1)),
    (("C", -1), ("D", 1), ("H", -1)),
    (("C", -1), ("D", -1), ("H", 1)),
    (("E", 1), ("F", -1), ("I", -1)),
    (("E", -1), ("F", 1), ("I", -1)),
    (("E", -1), ("F", -1), ("I", 1)),
    (("G", 1), ("H", 1), ("I", -1)),
    (("G", 1), ("H", -1), ("I", 1)),
    (("G", -1), ("H", 1), ("I", 1)),
)

# base-ray index groups; constant for every M
_NINE_BASES = ((1, 2, 5, 6), (1, 3, 8, 9), (4, 5, 11, 12), (7, 8, 10, 12),
               (2, 3, 16, 17), (4, 6, 13, 15), (7, 9, 14, 15),
               (10, 11, 16, 18), (13, 14, 17, 18))

_TAIL_LABELS = "IJKLMN"


@dataclass(frozen=True)
class NineBasisProof:
    """An R_2-9 parity proof inside a kite's ray set, signature level.

    Rays are eigenvalue signatures over abstract observable labels; the
    head labels A..D are the four short-ID completions, E/F and G/H the
    unique tail observables of the positive and negative long ID, and
    I, J, ... the shared tail.  Ranks follow the hosting kite: head rays
    have rank 2^(N-2), tail rays 2^(N-M+1).
    """

    m: int
    n_qubits: int
    rays: tuple[tuple[tuple[str, int], ...], ...]
    bases: tuple[tuple[int, ...], ...]

    @property
    def tail_labels(self) -> str:
        return _TAIL_LABELS[:self.m - 2]

    def is_tail(self, ray_index: int) -> bool:
        # tail rays carry the shared observables, heads never do
        labels = {w for w, _ in self.rays[ray_index]}
        return "I" in labels

    def rank(self, ray_index: int) -> int:
        if self.is_tail(ray_index):
            return 2 ** (self.n_qubits - self.m + 1)
        return 2 ** (self.n_qubits - 2)

    def id_sets(self) -> tuple[frozenset[str], ...]:
        tail = set(self.tail_labels)
        return (frozenset("ABG"), frozenset("ACF"), frozenset("BDE"),
                frozenset("CDH"), frozenset({"E", "F"} | tail),
                frozenset({"G", "H"} | tail))

    @property
    def compact_symbol(self) -> str:
        return f"{len(self.rays)}-{len(self.bases)}"

    @property
    def symbol(self) -> str:
        return f"{len(self.rays)}_2-{len(self.bases)}"

    @property
    def expanded_symbol(self) -> str:
        groups: dict[int, int] = {}
        for i in range(len(self.rays)):
            groups[self.rank(i)] = groups.get(self.rank(i), 0) + 1
        left = " ".join(f"{groups[rank]}^{rank}_2" for rank in sorted(groups))
        sizes: dict[int, int] = {}
        for basis in self.bases:
            size = len(basis)
            sizes[size] = sizes.get(size, 0) + 1
        right = " ".join(f"{sizes[s]}_{s}" for s in sorted(sizes,
                                                           reverse=True))
        return f"{left}-{right}"

    def verify(self) -> bool:
        """Orthogonality, rank completeness, and the parity property."""
        counts = [0] * len(self.rays)
        for basis in self.bases:
            total = 0
            for i in basis:
                counts[i] += 1
                total += self.rank(i)
            if total != 2 ** self.n_qubits:
                raise CatalogError(f"basis ranks sum to {total}")
            for i, j in itertools.combinations(basis, 2):
                vals = dict(self.rays[i])
                if not any(w in vals and vals[w] != v
                           for w, v in self.rays[j]):
                    raise CatalogError(f"rays {i},{j} share a basis but "
                                       f"no opposing eigenvalue")
        if any(c != 2 for c in counts):
            raise CatalogError("a nine-basis proof uses every ray twice")
        return len(self.bases) % 2 == 1

    def reflections(self) -> list[frozenset[str]]:
        """Observable subsets meeting every ID evenly: the flip symmetries."""
        labels = sorted({w for ray in self.rays for w, _ in ray})
        ids = self.id_sets()
        out = []
        for bits in range(1 << len(labels)):
            subset = {labels[k] for k in range(len(labels)) if bits >> k & 1}
            if all(len(subset & group) % 2 == 0 for group in ids):
                out.append(frozenset(subset))
        return out

    def replicas(self) -> set[frozenset]:
        """Distinct ray sets under eigenvalue reflection; 16 for every M."""
        seen = set()
        for subset in self.reflections():
            flipped = frozenset(
                tuple((w, -v if w in subset else v) for w, v in ray)
                for ray in self.rays)
            seen.add(flipped)
        return seen


def kite_nine_basis_proof(m: int, n_qubits: int | None = None
                          ) -> NineBasisProof:
    """The 9-basis parity proof of an M-observable kite.

    Starts from the M=3 ray table and splits every tail ray once per
    additional shared observable: the two children take opposite
    eigenvalues on the previously last observable, and the new
    observable's eigenvalue keeps the ray's product equal to its ID sign
    (negative for the G/H tail, positive for E/F).
    """
    if m < 3 or m > 2 + len(_TAIL_LABELS):
        raise CatalogError(f"nine-basis proofs cover M=3..8, got {m}")
    if n_qubits is None:
        n_qubits = m - 1
    if n_qubits < m - 1:
        raise CatalogError(f"a kite with M={m} needs at least {m - 1} qubits")
    rays = [dict(sig) for sig in _NINE_BASE_RAYS]
    groups: list[list[int]] = [[i] for i in range(len(rays))]
    last = "I"
    for new in _TAIL_LABELS[1:m - 2]:
        for g, members in enumerate(groups[12:], start=12):
            children: list[int] = []
            for idx in members:
                ray = rays[idx]
                target = -1 if "G" in ray else 1
                rest = 1
                for w, v in ray.items():
                    if w != last:
                        rest *= v
                for last_value in (1, -1):
                    child = dict(ray)
                    child[last] = last_value
                    child[new] = target * rest * last_value
                    children.append(len(rays))
                    rays.append(child)
            groups[g] = children
        last = new
    # drop parent rays that were split, renumbering densely
    alive = sorted(i for members in groups for i in members)
    position = {i: k for k, i in enumerate(alive)}
    final_rays = tuple(tuple(sorted(rays[i].items())) for i in alive)
    bases = tuple(tuple(sorted(position[i] for k in basis
                               for i in groups[k - 1]))
                  for basis in _NINE_BASES)
    proof = NineBasisProof(m, n_qubits, final_rays, bases)
    proof.verify()
    return proof


@functools.lru_cache(maxsize=8)
def cached_kite(variant: str, size: int | None = None) -> KiteStructure:
    return kite_family(variant, size)
