"""Kernels and composite kernel structures.

A kernel is a multiset of identity products in which an odd number of
members are negative while, qubit by qubit, each letter Z, X, Y appears an
even number of times across the whole set.  Assigning a fixed truth value
+-1 to every single-qubit observable then forces a noncontextual product
of +1 against a quantum prediction of -1: the strong form of the
Kochen-Specker argument, and the seed from which full observable-based
proofs are grown.

A composite kernel structure (CKS) is the combinatorial skeleton of a
multi-ID kernel: an O/I matrix recording only which qubits each ID is Odd
on.  Rows are IDs, columns are qubits.  Each column needs an even number
of O entries so the Odd single-qubit products cancel pairwise.
"""

from __future__ import annotations

import itertools
import multiprocessing
import time
from dataclasses import dataclass

from .ids import IDError, IdentityProduct, format_id_block, \
    parse_id_blocks, permute_id, verify_id

__all__ = [
    "CKSEnumeration",
    "CKSError",
    "CompositeKernelStructure",
    "EvenNegativeCountError",
    "Kernel",
    "KernelError",
    "LetterParityError",
    "OddnessMismatchError",
    "assemble_kernel",
    "cks_from_masks",
    "critical_link_groups",
    "criticality_network",
    "enumerate_cks",
    "format_cks",
    "format_kernel",
    "is_critical_cks",
    "is_critical_kernel",
    "parse_cks",
    "parse_kernel",
    "verify_kernel",
]


class KernelError(ValueError):
    """A set of IDs that fails one of the kernel conditions."""


class EvenNegativeCountError(KernelError):
    def __init__(self, count: int):
        super().__init__(
            f"kernel needs an odd number of negative IDs, got {count}")
        self.count = count


class LetterParityError(KernelError):
    def __init__(self, qubit: int, letter: str, count: int):
        super().__init__(f"letter {letter} appears {count} times on qubit "
                         f"{qubit}; an even count is required")
        self.qubit = qubit
        self.letter = letter


class OddnessMismatchError(KernelError):
    def __init__(self, row: int, detail: str):
        super().__init__(f"assignment for structure row {row}: {detail}")
        self.row = row


@dataclass(frozen=True)
class Kernel:
    """IDs with odd negative count and even per-qubit letter counts."""

    ids: tuple[IdentityProduct, ...]

    @property
    def n_qubits(self) -> int:
        return self.ids[0].n_qubits

    @property
    def kind(self) -> str:
        return "single-ID" if len(self.ids) == 1 else "composite"

    def strong_ks_pair(self) -> tuple[int, int]:
        """(quantum, noncontextual) product of all member IDs."""
        return (-1, +1)

    def observable_multiplicities(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for idp in self.ids:
            for word in idp.letters():
                counts[word] = counts.get(word, 0) + 1
        return counts

    def odd_observables(self) -> list[str]:
        """Members appearing an odd number of times, in reading order."""
        counts = self.observable_multiplicities()
        seen = []
        for idp in self.ids:
            for word in idp.letters():
                if counts[word] % 2 and word not in seen:
                    seen.append(word)
        return seen

    def oddness_profiles(self) -> tuple[str, ...]:
        return tuple(idp.oddness_profile() for idp in self.ids)

    def cks(self) -> "CompositeKernelStructure | None":
        """The O/I skeleton over this kernel's Odd qubits.

        None for a kernel with no Odd qubit (a single whole ID).
        """
        profiles = self.oddness_profiles()
        odd_qubits = [q for q in range(self.n_qubits)
                      if any(p[q] == "O" for p in profiles)]
        if not odd_qubits:
            return None
        rows = tuple("".join("O" if p[q] == "O" else "I" for q in odd_qubits)
                     for p in profiles)
        return CompositeKernelStructure(rows)

    def __str__(self) -> str:
        return " + ".join(str(idp) for idp in self.ids)


def verify_kernel(ids) -> Kernel:
    """Type a list of IDs (or letter grids) as a Kernel.

    Raises EvenNegativeCountError or LetterParityError naming the failed
    condition.
    """
    typed = tuple(idp if isinstance(idp, IdentityProduct) else verify_id(idp)
                  for idp in ids)
    if not typed:
        raise KernelError("a kernel needs at least one ID")
    n = typed[0].n_qubits
    if any(idp.n_qubits != n for idp in typed):
        raise KernelError("IDs have mismatched qubit counts")
    negatives = sum(1 for idp in typed if idp.sign < 0)
    if negatives % 2 == 0:
        raise EvenNegativeCountError(negatives)
    for q in range(n):
        for letter in "ZXY":
            count = sum(1 for idp in typed for r in idp.rows
                        if r.letter(q) == letter)
            if count % 2:
                raise LetterParityError(q, letter, count)
    return Kernel(typed)


# ---------------------------------------------------------------------------
# composite kernel structures


class CKSError(ValueError):
    """A malformed O/I structure."""


@dataclass(frozen=True)
class CompositeKernelStructure:
    """O/I incidence rows: which qubits each of a kernel's IDs is Odd on."""

    rows: tuple[str, ...]

    def __post_init__(self):
        rows = tuple(self.rows)
        object.__setattr__(self, "rows", rows)
        if not rows:
            raise CKSError("a structure needs at least one row")
        n = len(rows[0])
        for r in rows:
            if len(r) != n:
                raise CKSError("rows have mismatched lengths")
            if set(r) - {"O", "I"}:
                raise CKSError(f"bad characters in row {r!r}")
            count = r.count("O")
            if count == 0 or count % 2:
                raise CKSError(
                    f"row {r} needs an even, nonzero number of O entries")
        for q in range(n):
            if sum(1 for r in rows if r[q] == "O") % 2:
                raise CKSError(f"column {q} has an odd number of O entries")

    @property
    def n_qubits(self) -> int:
        return len(self.rows[0])

    @property
    def n_ids(self) -> int:
        return len(self.rows)

    def row_masks(self) -> tuple[int, ...]:
        return tuple(sum(1 << q for q, ch in enumerate(r) if ch == "O")
                     for r in self.rows)

    def o_columns(self, i: int) -> tuple[int, ...]:
        return tuple(q for q, ch in enumerate(self.rows[i]) if ch == "O")

    def __str__(self) -> str:
        return "\n".join(self.rows)


def _mask_row(mask: int, n: int) -> str:
    return "".join("O" if mask >> q & 1 else "I" for q in range(n))


def cks_from_masks(masks, n: int) -> CompositeKernelStructure:
    return CompositeKernelStructure(tuple(_mask_row(m, n) for m in masks))


def parse_cks(text: str) -> CompositeKernelStructure:
    rows = tuple(line.strip() for line in text.strip().splitlines()
                 if line.strip())
    return CompositeKernelStructure(rows)


def format_cks(cks: CompositeKernelStructure) -> str:
    return "\n".join(cks.rows) + "\n"


def is_critical_cks(cks: CompositeKernelStructure) -> bool:
    """True iff no deletion of rows and/or qubits leaves a smaller CKS.

    A row stands for an ID whose Odd qubits leave only as a unit, so a
    legal deletion keeps a sub-multiset of rows plus every qubit they
    touch, and the remainder is valid iff the kept rows still cancel
    column by column.  Hence: critical iff the rows touch every qubit and
    no proper nonempty subset of rows has zero column-wise XOR.
    """
    masks = cks.row_masks()
    cover = 0
    for m in masks:
        cover |= m
    if cover != (1 << cks.n_qubits) - 1:
        return False
    for size in range(1, len(masks)):
        for combo in itertools.combinations(masks, size):
            acc = 0
            for m in combo:
                acc ^= m
            if acc == 0:
                return False
    return True


# ---------------------------------------------------------------------------
# CKS enumeration
#
# Critical structures on n qubits are exactly the minimal GF(2)-dependent
# multisets of even-weight row masks that cover all n columns: the column
# parity rule says the full multiset XORs to zero, and is_critical_cks
# above rejects any structure with a vanishing proper subset.  Minimal
# dependent multisets are either a repeated row {v, v} (covering only when
# v is all-O) or a set of distinct rows obtained by closing an independent
# set with its own XOR.  Each such set is generated exactly once from its
# prefix of all-but-the-largest element.


def _even_rows(n: int) -> list[int]:
    return [v for v in range(3, 1 << n)
            if v.bit_count() >= 2 and v.bit_count() % 2 == 0]


def _cks_invariant(masks: tuple[int, ...], n: int):
    k = len(masks)
    weights = sorted(m.bit_count() for m in masks)
    colcounts = sorted(sum(m >> q & 1 for m in masks) for q in range(n))
    overlaps = sorted((masks[i] & masks[j]).bit_count()
                      for i in range(k) for j in range(i + 1, k))
    return (k, tuple(weights), tuple(colcounts), tuple(overlaps))


def _row_fingerprints(masks: tuple[int, ...], n: int):
    colcounts = [sum(m >> q & 1 for m in masks) for q in range(n)]
    out = []
    for i, m in enumerate(masks):
        cols = tuple(sorted(colcounts[q] for q in range(n) if m >> q & 1))
        overlaps = tuple(sorted((m & other).bit_count()
                                for j, other in enumerate(masks) if j != i))
        out.append((m.bit_count(), cols, overlaps))
    return out


def _circuits_isomorphic(a: tuple[int, ...], b: tuple[int, ...],
                         n: int) -> bool:
    """Row/column-permutation equivalence of two covering circuits."""
    if len(a) != len(b):
        return False
    if all(m.bit_count() == 2 for m in a):
        # weight-2 circuits covering n qubits are single n-cycles
        return all(m.bit_count() == 2 for m in b)
    fa = _row_fingerprints(a, n)
    fb = _row_fingerprints(b, n)
    if sorted(fa) != sorted(fb):
        return False
    # search row bijections within fingerprint classes, then compare the
    # column multisets they induce
    classes: dict[object, tuple[list[int], list[int]]] = {}
    for i, f in enumerate(fa):
        classes.setdefault(f, ([], []))[0].append(i)
    for j, f in enumerate(fb):
        if f not in classes:
            return False
        classes[f][1].append(j)
    b_columns = sorted(sum((b[j] >> q & 1) << j for j in range(len(b)))
                       for q in range(n))
    groups = list(classes.values())
    if any(len(ai) != len(bj) for ai, bj in groups):
        return False
    for choice in itertools.product(
            *[itertools.permutations(bj) for _, bj in groups]):
        target = [0] * len(a)
        for (ai, _), perm in zip(groups, choice):
            for i, j in zip(ai, perm):
                target[i] = j
        cols = sorted(sum((a[i] >> q & 1) << target[i]
                          for i in range(len(a))) for q in range(n))
        if cols == b_columns:
            return True
    return False


class _CircuitCollector:
    def __init__(self, n: int):
        self.n = n
        self.raw = 0
        self.buckets: dict[object, list[tuple[int, ...]]] = {}

    def add(self, masks: tuple[int, ...]):
        self.raw += 1
        inv = _cks_invariant(masks, self.n)
        bucket = self.buckets.setdefault(inv, [])
        for rep in bucket:
            if _circuits_isomorphic(masks, rep, self.n):
                return
        bucket.append(masks)

    def merge(self, raw: int, buckets):
        self.raw += raw
        for inv, reps in buckets:
            mine = self.buckets.setdefault(inv, [])
            for rep in reps:
                if not any(_circuits_isomorphic(rep, have, self.n)
                           for have in mine):
                    mine.append(rep)


def _covering_circuits(n: int, first_indices, node_budget, deadline):
    """DFS over independent prefixes; returns (collector, nodes, truncated)."""
    elements = _even_rows(n)
    full = (1 << n) - 1
    collector = _CircuitCollector(n)
    nodes = 0
    truncated = False
    max_prefix = n - 1  # circuits never exceed rank+1 = n rows

    def walk(idx0: int, chosen: list[int], span: frozenset, xor: int,
             cover: int):
        nonlocal nodes, truncated
        if truncated:
            return
        for idx in range(idx0, len(elements)):
            v = elements[idx]
            if v in span:
                continue
            nodes += 1
            if node_budget is not None and nodes > node_budget:
                truncated = True
                return
            if deadline is not None and nodes % 4096 == 0 \
                    and time.monotonic() > deadline:
                truncated = True
                return
            chosen.append(v)
            w = xor ^ v
            if len(chosen) >= 2 and w > v and (cover | v | w) == full:
                collector.add(tuple(chosen) + (w,))
            if len(chosen) < max_prefix:
                walk(idx + 1, chosen,
                     span | {s ^ v for s in span} | {v}, w, cover | v)
            chosen.pop()
            if truncated:
                return

    for idx in first_indices:
        v = elements[idx]
        nodes += 1
        if node_budget is not None and nodes > node_budget:
            truncated = True
            break
        walk(idx + 1, [v], frozenset((v,)), v, v)
        if truncated:
            break
    return collector, nodes, truncated


def _cks_worker(args):
    n, first_indices, node_budget, time_budget = args
    deadline = time.monotonic() + time_budget if time_budget else None
    collector, nodes, truncated = _covering_circuits(
        n, first_indices, node_budget, deadline)
    return collector.raw, list(collector.buckets.items()), nodes, truncated


@dataclass
class CKSEnumeration:
    structures: list[CompositeKernelStructure]
    raw_count: int
    truncated: bool
    nodes: int


def _canonical_cks_rows(masks: tuple[int, ...], n: int) -> tuple[str, ...]:
    """Deterministic representative: minimal sorted rows over qubit perms."""
    best = None
    for perm in itertools.permutations(range(n)):
        remapped = tuple(sorted(
            sum(((m >> perm[t]) & 1) << t for t in range(n)) for m in masks))
        if best is None or remapped < best:
            best = remapped
    return tuple(_mask_row(m, n) for m in best)


def enumerate_cks(n: int, *, node_budget: int | None = None,
                  time_budget: float | None = None,
                  workers: int = 1) -> CKSEnumeration:
    """All critical composite kernel structures on exactly n Odd qubits.

    Structures are unique up to row and qubit permutation and returned in
    a deterministic canonical form.  raw_count is the number of covering
    circuits seen before permutation dedup.
    """
    if n < 2:
        raise CKSError("a structure needs at least 2 qubits")
    elements = _even_rows(n)
    indices = list(range(len(elements)))
    master = _CircuitCollector(n)
    nodes = 0
    truncated = False
    if workers > 1 and len(indices) > 1:
        groups = [indices[i::workers] for i in range(workers)]
        per_budget = node_budget // workers if node_budget else None
        with multiprocessing.Pool(workers) as pool:
            for raw, buckets, wnodes, wtrunc in pool.map(
                    _cks_worker,
                    [(n, g, per_budget, time_budget) for g in groups if g]):
                master.merge(raw, buckets)
                nodes += wnodes
                truncated = truncated or wtrunc
    else:
        deadline = time.monotonic() + time_budget if time_budget else None
        master, nodes, truncated = _covering_circuits(
            n, indices, node_budget, deadline)
    if n % 2 == 0:
        # the repeated all-O row pair is the one parallel circuit that
        # covers every qubit; it only exists when n is even
        full = (1 << n) - 1
        master.add((full, full))
    reps = [rep for bucket in master.buckets.values() for rep in bucket]
    structures = [CompositeKernelStructure(_canonical_cks_rows(rep, n))
                  for rep in reps]
    structures.sort(key=lambda c: (c.n_ids, c.rows))
    return CKSEnumeration(structures, master.raw, truncated, nodes)


# ---------------------------------------------------------------------------
# assembling kernels onto structures


def assemble_kernel(cks: CompositeKernelStructure, assignments) -> Kernel:
    """Place IDs onto a CKS and sign-fix to an odd negative count.

    assignments holds one (id, placement) pair per structure row, where
    placement maps the ID's own qubit index to a kernel qubit index.  Odd
    qubits must land exactly on the row's O columns; Even and Trivial
    qubits may sit on that row's I columns or on fresh qubits at indices
    beyond the structure's width.
    """
    if len(assignments) != cks.n_ids:
        raise KernelError(f"structure has {cks.n_ids} rows, "
                          f"got {len(assignments)} assignments")
    placements = []
    width = cks.n_qubits
    for row, (idp, placement) in enumerate(assignments):
        placement = dict(placement)
        if sorted(placement) != list(range(idp.n_qubits)):
            raise OddnessMismatchError(row, "placement must map every qubit")
        if len(set(placement.values())) != idp.n_qubits:
            raise OddnessMismatchError(row, "placement must be injective")
        profile = idp.oddness_profile()
        odd_targets = {placement[q] for q in range(idp.n_qubits)
                       if profile[q] == "O"}
        slots = set(cks.o_columns(row))
        if odd_targets != slots:
            raise OddnessMismatchError(
                row, f"Odd qubits land on {sorted(odd_targets)}, "
                     f"row wants {sorted(slots)}")
        width = max(width, max(placement.values()) + 1)
        placements.append((idp, placement))
    embedded = []
    for idp, placement in placements:
        grid = []
        for r in idp.rows:
            chars = ["I"] * width
            for q in range(idp.n_qubits):
                chars[placement[q]] = r.letter(q)
            grid.append("".join(chars))
        embedded.append(verify_id(grid))
    negatives = sum(1 for idp in embedded if idp.sign < 0)
    if negatives % 2 == 0:
        flippable = [i for i, idp in enumerate(embedded) if idp.is_partial()]
        if not flippable:
            raise KernelError("sign fixing needs a partial ID")
        # deterministic choice: lexicographically last ID, first Odd qubit
        target = max(flippable,
                     key=lambda i: tuple(sorted(embedded[i].letters())))
        idp = embedded[target]
        qubit = idp.oddness_profile().index("O")
        flipped = permute_id(idp, letter_perms={qubit: {"Z": "X", "X": "Z",
                                                        "Y": "Y"}})
        embedded[target] = flipped
    return verify_kernel(embedded)


# ---------------------------------------------------------------------------
# kernel criticality


def _restrict_id(idp: IdentityProduct, kept_qubits) -> IdentityProduct | None:
    """The ID induced on a qubit subset, or None.

    Rows that collapse to the identity drop out; what remains must be a
    valid ID on its own (distinct, commuting, product +-I).
    """
    rows = []
    for r in idp.rows:
        letters = "".join(r.letter(q) for q in kept_qubits)
        if letters.strip("I"):
            rows.append(letters)
    if len(rows) < 2:
        return None
    try:
        return verify_id(rows)
    except IDError:
        return None


def _is_kernel_modulo_signs(idps) -> bool:
    """Kernel conditions with partial-ID signs treated as adjustable.

    Transposing the letters of one Odd SQP flips that ID's sign without
    moving its Odd qubits, so any remainder containing a partial ID can
    reach an odd negative count.  Whole IDs have fixed signs.
    """
    if not idps:
        return False
    n = idps[0].n_qubits
    profiles = [idp.oddness_profile() for idp in idps]
    for q in range(n):
        if sum(1 for p in profiles if p[q] == "O") % 2:
            return False
    if any(idp.is_partial() for idp in idps):
        return True
    return sum(1 for idp in idps if idp.sign < 0) % 2 == 1


def is_critical_kernel(kernel: Kernel) -> bool:
    """Brute force over deletions of whole IDs and/or qubits."""
    ids = kernel.ids
    n = kernel.n_qubits
    k = len(ids)
    for keep_count in range(1, n + 1):
        for kept_qubits in itertools.combinations(range(n), keep_count):
            whole = keep_count == n
            restricted = [_restrict_id(idp, kept_qubits) for idp in ids]
            usable = [i for i, r in enumerate(restricted) if r is not None]
            for size in range(1, len(usable) + 1):
                if whole and size == k:
                    continue  # nothing deleted
                for combo in itertools.combinations(usable, size):
                    if _is_kernel_modulo_signs(
                            [restricted[i] for i in combo]):
                        return False
    return True


def critical_link_groups(idp: IdentityProduct) -> list[tuple[int, ...]]:
    """Groups of qubits that can only be deleted from the ID together.

    Supports the compositions kernels are assembled from: a critical ID,
    or critical IDs side by side padded with Trivial SQPs.  A block splits
    off when the remaining qubits still induce a valid ID.
    """
    def decompose(qubits: tuple[int, ...]) -> list[tuple[int, ...]]:
        if len(qubits) <= 1:
            return [qubits]
        for size in range(1, len(qubits)):
            for block in itertools.combinations(qubits, size):
                rest = tuple(q for q in qubits if q not in block)
                if _restrict_id(idp, rest) is None:
                    continue
                if len(block) == 1 or _restrict_id(idp, block) is not None:
                    return decompose(block) + decompose(rest)
        return [qubits]

    return decompose(tuple(range(idp.n_qubits)))


def criticality_network(kernel: Kernel, critical_link_map=None) -> bool:
    """Connectivity check for composite-kernel criticality (advisory).

    critical_link_map[i] lists the qubit groups of ID i that only leave
    together (including the Even/Trivial columns welded to each group).
    Cells connect along a column when both SQPs are Odd and along a row
    within one linked group; the kernel passes when one component reaches
    every ID and every qubit.  is_critical_kernel is the source of truth.
    """
    ids = kernel.ids
    n = kernel.n_qubits
    if critical_link_map is None:
        critical_link_map = [critical_link_groups(idp) for idp in ids]
    profiles = [idp.oddness_profile() for idp in ids]
    cells = [(i, q) for i, groups in enumerate(critical_link_map)
             for qubits in groups for q in qubits]
    visited = set()
    for start in cells:
        if start in visited:
            continue
        seen = {start}
        frontier = [start]
        while frontier:
            i, q = frontier.pop()
            for qubits in critical_link_map[i]:
                if q in qubits:
                    for q2 in qubits:
                        if (i, q2) not in seen:
                            seen.add((i, q2))
                            frontier.append((i, q2))
            if profiles[i][q] == "O":
                for j in range(len(ids)):
                    if j != i and profiles[j][q] == "O" \
                            and (j, q) not in seen:
                        seen.add((j, q))
                        frontier.append((j, q))
        visited |= seen
        if {i for i, _ in seen} == set(range(len(ids))) \
                and {q for _, q in seen} == set(range(n)):
            return True
    return False


# ---------------------------------------------------------------------------
# text formats


def format_kernel(kernel: Kernel) -> str:
    head = f"KERNEL {len(kernel.ids)} {kernel.n_qubits}"
    return "\n".join([head] + [format_id_block(idp)
                               for idp in kernel.ids]) + "\n"


def parse_kernel(text: str) -> Kernel:
    lines = text.strip().splitlines()
    if not lines or not lines[0].startswith("KERNEL"):
        raise KernelError("missing KERNEL header")
    fields = lines[0].split()
    if len(fields) != 3:
        raise KernelError("KERNEL header needs an ID count and qubit count")
    count = int(fields[1])
    ids = parse_id_blocks("\n".join(lines[1:]))
    if len(ids) != count:
        raise KernelError(f"header promises {count} IDs, found {len(ids)}")
    return verify_kernel(ids)
