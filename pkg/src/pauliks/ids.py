"""Single-qubit products (SQPs) and identity products (IDs).

An identity product is a set of M mutually commuting N-qubit observables
whose overall product is +I or -I.  Viewed as an M x N letter grid, each
column is an SQP: the ordered list of single-qubit letters one qubit
contributes.  A column belongs to an ID only if each of Z, X, Y occurs an
even number of times in it (class Even, or Trivial when at most one
distinct non-identity letter appears) or each occurs an odd number of
times (class Odd, single-qubit product +-i).  The ID's oddness O counts
the Odd columns; it is always even, and the sign of the ID is the product
of the column phases.

Two IDs are the same unique structure when one maps to the other by
reordering rows, reordering columns, and independently applying any of
the 6 letter permutations of {Z, X, Y} to individual columns.  The
canonical key computed here decides that equivalence exactly.
"""

from __future__ import annotations

import itertools
import json
import time
from dataclasses import dataclass, field
from enum import Enum

from .pauli import (
    LETTER_ORDER,
    PauliObservable,
    commutes,
    format_observable,
    letter_product_phase,
    parse_observable,
    product,
)


class SQPClass(Enum):
    ODD = "Odd"
    EVEN = "Even"
    TRIVIAL = "Trivial"


class IDError(ValueError):
    """A letter grid that is not an identity product."""


class NonCommutingError(IDError):
    def __init__(self, i: int, j: int):
        self.rows = (i, j)
        super().__init__(f"NON_COMMUTING: rows {i} and {j} anticommute")


class ProductNotIdentityError(IDError):
    def __init__(self, word: str):
        self.word = word
        super().__init__(f"PRODUCT_NOT_IDENTITY: overall product is {word}")


def classify_sqp(letters) -> tuple[SQPClass, int]:
    """Classify a column of letters and give its product phase (exponent of i).

    Raises IDError for mixed-parity columns, which cannot occur in any ID.
    """
    letters = tuple(letters)
    if not letters:
        raise ValueError("empty SQP")
    counts = {"Z": 0, "X": 0, "Y": 0}
    for ch in letters:
        if ch != "I":
            counts[ch] += 1
    parities = {counts["Z"] % 2, counts["X"] % 2, counts["Y"] % 2}
    _, phase = letter_product_phase(letters)
    if parities == {1}:
        return SQPClass.ODD, phase
    if parities == {0}:
        distinct = sum(1 for v in counts.values() if v > 0)
        if distinct <= 1:
            return SQPClass.TRIVIAL, phase
        return SQPClass.EVEN, phase
    raise IDError(f"column {''.join(letters)} has mixed letter parity")


def canonical_sqp(letters) -> tuple[str, ...]:
    """Relabel letters so the distinct non-I letters appear in Z, X, Y order."""
    mapping = {"I": "I"}
    fresh = iter("ZXY")
    out = []
    for ch in letters:
        if ch not in mapping:
            mapping[ch] = next(fresh)
        out.append(mapping[ch])
    return tuple(out)


def enumerate_unique_sqps(m: int) -> list[str]:
    """All unique nontrivial SQPs of M letters, one canonical orientation each.

    Unique means up to the 6 letter permutations; the representative has its
    distinct letters in first-appearance order Z, X, Y.  Sorted by letter
    rank (Z < X < Y < I) for a deterministic census order.
    """
    if m < 3:
        return []
    seen = set()
    for combo in itertools.product("ZXYI", repeat=m):
        rep = canonical_sqp(combo)
        if rep in seen:
            continue
        try:
            cls, _ = classify_sqp(rep)
        except IDError:
            continue
        if cls is SQPClass.TRIVIAL:
            continue
        seen.add(rep)
    return sorted(("".join(s) for s in seen),
                  key=lambda s: tuple(LETTER_ORDER[c] for c in s))


@dataclass(frozen=True)
class IdentityProduct:
    """M mutually commuting N-qubit observables with product sign * I."""

    rows: tuple[PauliObservable, ...]
    sign: int
    oddness: int

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def n_qubits(self) -> int:
        return self.rows[0].n_qubits

    @property
    def symbol(self) -> str:
        sgn = "-" if self.sign < 0 else "+"
        return f"{sgn}ID{self.m}^{self.n_qubits}_{self.oddness}"

    def is_whole(self) -> bool:
        return self.oddness == 0 and self.sign == -1

    def is_null(self) -> bool:
        return self.oddness == 0 and self.sign == +1

    def is_partial(self) -> bool:
        return self.oddness > 0

    def letters(self) -> list[str]:
        return [format_observable(r) for r in self.rows]

    def column(self, q: int) -> tuple[str, ...]:
        return tuple(r.letter(q) for r in self.rows)

    def oddness_profile(self) -> str:
        """One character per qubit: O / E / I for Odd / Even / Trivial."""
        out = []
        for q in range(self.n_qubits):
            cls, _ = classify_sqp(self.column(q))
            out.append({SQPClass.ODD: "O", SQPClass.EVEN: "E",
                        SQPClass.TRIVIAL: "I"}[cls])
        return "".join(out)

    def __str__(self) -> str:
        return f"{self.symbol}[{','.join(self.letters())}]"


def verify_id(grid) -> IdentityProduct:
    """Check a letter grid (or observable list) and type it as an ID.

    Raises NonCommutingError naming the first failing row pair, or
    ProductNotIdentityError when the overall product is not +-I.
    """
    rows = tuple(parse_observable(r) if isinstance(r, str) else r for r in grid)
    if len(rows) < 2:
        raise IDError("an ID needs at least 2 observables")
    n = rows[0].n_qubits
    if any(r.n_qubits != n for r in rows):
        raise IDError("rows have mismatched qubit counts")
    seen = set()
    for idx, r in enumerate(rows):
        if r.is_identity():
            raise IDError(f"row {idx} is the identity observable")
        if (r.z, r.x) in seen:
            raise IDError("duplicate rows")
        seen.add((r.z, r.x))
    for i, j in itertools.combinations(range(len(rows)), 2):
        if not commutes(rows[i], rows[j]):
            raise NonCommutingError(i, j)
    word, phase = product(rows)
    if not word.is_identity() or phase % 2:
        label = {0: "+", 1: "+i", 2: "-", 3: "-i"}[phase]
        raise ProductNotIdentityError(f"{label}{format_observable(word)}")
    sign = 1 if phase == 0 else -1
    oddness = 0
    for q in range(n):
        cls, _ = classify_sqp(tuple(r.letter(q) for r in rows))
        if cls is SQPClass.ODD:
            oddness += 1
    return IdentityProduct(rows, sign, oddness)


def _is_smaller_id(rows: list[PauliObservable]) -> bool:
    """Valid deletion remnant: distinct non-identity commuting rows, product +-I.

    A positive remnant with no Odd column is a Null ID; those carry no
    constraint and do not disqualify criticality.
    """
    seen = set()
    for r in rows:
        if r.is_identity() or (r.z, r.x) in seen:
            return False
        seen.add((r.z, r.x))
    for a, b in itertools.combinations(rows, 2):
        if not commutes(a, b):
            return False
    word, phase = product(rows)
    if not word.is_identity() or phase % 2:
        return False
    if phase == 0:
        n = rows[0].n_qubits
        for q in range(n):
            cls, _ = classify_sqp(tuple(r.letter(q) for r in rows))
            if cls is SQPClass.ODD:
                return True  # positive Partial: a real ID after re-signing
        return False  # Null
    return True


def is_critical_id(idp: IdentityProduct) -> bool:
    """True iff no deletion of rows and/or columns leaves a smaller ID."""
    m, n = idp.m, idp.n_qubits
    all_qubits = tuple(range(n))
    for keep_rows in _proper_nonempty_subsets(m):
        rows = [idp.rows[i] for i in keep_rows]
        if _is_smaller_id(rows):
            return False
    # column deletions (with any row subset, including all rows)
    for keep_cols_size in range(1, n):
        for keep_cols in itertools.combinations(all_qubits, keep_cols_size):
            restricted = [r.restrict(keep_cols) for r in idp.rows]
            for rcount in range(1, m + 1):
                for keep_rows in itertools.combinations(range(m), rcount):
                    rows = [restricted[i] for i in keep_rows]
                    if _is_smaller_id(rows):
                        return False
    return True


def _proper_nonempty_subsets(m: int):
    for size in range(1, m):
        yield from itertools.combinations(range(m), size)


def permute_id(idp: IdentityProduct, qubit_perm=None, letter_perms=None) -> IdentityProduct:
    """Apply a qubit reordering and per-column letter permutations.

    qubit_perm maps new position -> old qubit.  letter_perms maps qubit
    (pre-permutation index) -> dict over {Z, X, Y}.  The result is re-verified;
    only Odd-SQP permutations can flip the sign.
    """
    n = idp.n_qubits
    qubit_perm = tuple(qubit_perm) if qubit_perm is not None else tuple(range(n))
    letter_perms = letter_perms or {}
    new_rows = []
    for r in idp.rows:
        chars = []
        for new_pos in range(n):
            q = qubit_perm[new_pos]
            ch = r.letter(q)
            perm = letter_perms.get(q)
            if perm and ch != "I":
                ch = perm[ch]
            chars.append(ch)
        new_rows.append("".join(chars))
    return verify_id(new_rows)


# ---------------------------------------------------------------------------
# canonical keys


_LETTER_PERMS = [dict(zip("ZXY", p)) for p in itertools.permutations("ZXY")]


def _column_variants(col: tuple[str, ...]) -> list[tuple[str, ...]]:
    """The distinct images of a column under the 6 letter permutations."""
    out = set()
    for perm in _LETTER_PERMS:
        out.add(tuple(perm[c] if c != "I" else "I" for c in col))
    return sorted(out, key=lambda v: tuple(LETTER_ORDER[c] for c in v))


def canonicalize_id(idp: IdentityProduct) -> str:
    """Canonical key, constant exactly on orbits of row order, column order,
    and independent per-column letter permutations.

    The key is the lexicographically minimal column-major letter string
    (letter order Z < X < Y < I), found by branch-and-bound over column
    sequences while rows are kept as an ordered partition refined column by
    column; within a tie block the rows sort by the letters of the newly
    placed column.
    """
    grid = idp.letters()
    return canonical_grid_key(grid)


def canonical_grid_key(grid: list[str]) -> str:
    m = len(grid)
    n = len(grid[0])
    cols = [tuple(row[q] for row in grid) for q in range(n)]
    variants = [_column_variants(c) for c in cols]

    best: list[str] = [""]  # best complete key so far, as single string

    def block_string(col: tuple[str, ...], blocks: list[list[int]]) -> str:
        parts = []
        for blk in blocks:
            parts.extend(sorted((col[i] for i in blk),
                                key=lambda c: LETTER_ORDER[c]))
        return "".join(parts)

    def refine(col: tuple[str, ...], blocks: list[list[int]]) -> list[list[int]]:
        out = []
        for blk in blocks:
            groups: dict[str, list[int]] = {}
            for i in blk:
                groups.setdefault(col[i], []).append(i)
            for ch in sorted(groups, key=lambda c: LETTER_ORDER[c]):
                out.append(groups[ch])
        return out

    def search(used: int, blocks: list[list[int]], prefix: str):
        if len(prefix) == m * n:
            if not best[0] or prefix < best[0]:
                best[0] = prefix
            return
        # candidate (column, variant) choices ranked by their block string
        ranked = []
        for ci in range(n):
            if used >> ci & 1:
                continue
            for var in variants[ci]:
                ranked.append((block_string(var, blocks), ci, var))
        ranked.sort(key=lambda t: t[0])
        seen_here = set()
        for s, ci, var in ranked:
            cand = prefix + s
            if best[0] and cand > best[0][: len(cand)]:
                break  # ranked order: everything after is worse too
            refined = refine(var, blocks)
            sub = (s, ci, tuple(map(tuple, refined)))
            if sub in seen_here:
                continue  # same column, same row partition: identical subtree
            seen_here.add(sub)
            search(used | (1 << ci), refined, cand)

    search(0, [list(range(m))], "")
    return best[0]


def canonical_grid(idp: IdentityProduct) -> list[str]:
    """A canonical representative grid (rows of the key, row-major)."""
    key = canonicalize_id(idp)
    m, n = idp.m, idp.n_qubits
    return ["".join(key[q * m + i] for q in range(n)) for i in range(m)]


# ---------------------------------------------------------------------------
# exhaustive enumeration


@dataclass
class EnumerationResult:
    ids: list  # unique IdentityProducts (canonical representatives)
    raw_count: int = 0
    raw_critical_count: int = 0
    truncated: bool = False
    nodes: int = 0
    keys: dict = field(default_factory=dict)


def _sqp_pair_pattern(col: str) -> int:
    """Bitmask over row pairs (i<j) that anticommute within this column."""
    m = len(col)
    mask = 0
    bit = 0
    for i in range(m):
        for j in range(i + 1, m):
            if col[i] != "I" and col[j] != "I" and col[i] != col[j]:
                mask |= 1 << bit
            bit += 1
    return mask


def enumerate_ids(m: int, n: int, oddness: int | None = None,
                  sign: int | None = None, whole_only: bool = False,
                  critical_only: bool = False,
                  node_budget: int | None = None,
                  time_budget: float | None = None) -> EnumerationResult:
    """Exhaustively enumerate IDs of M observables on N qubits.

    Columns are drawn from the unique nontrivial SQPs for M, each used at
    most once (two copies of an Even SQP could be deleted, and two copies of
    an Odd SQP reduce the set to the 2-qubit ID; the lone exception, the
    2-qubit ID itself, is emitted specially).  A combination of columns is an
    ID exactly when every anticommuting row pair is paired an even number of
    times across the columns, i.e. the pair patterns XOR to zero.

    Null IDs (positive with no Odd columns) are excluded.  The result lists
    one canonical representative per unique ID; raw counts tally the emitted
    column combinations before uniqueness.
    """
    if whole_only:
        oddness, sign = 0, -1
    sqps = enumerate_unique_sqps(m)
    patterns = [_sqp_pair_pattern(s) for s in sqps]
    by_pattern: dict[int, list[int]] = {}
    for i, p in enumerate(patterns):
        by_pattern.setdefault(p, []).append(i)

    result = EnumerationResult(ids=[])
    deadline = time.monotonic() + time_budget if time_budget else None
    uniq: dict[str, IdentityProduct] = {}

    def emit(col_indices: tuple[int, ...]):
        grid = ["".join(sqps[ci][r] for ci in col_indices) for r in range(m)]
        try:
            idp = verify_id(grid)
        except IDError:
            return
        if idp.is_null():
            return
        if oddness is not None and idp.oddness != oddness:
            return
        if sign is not None and idp.sign != sign:
            return
        crit = None
        if critical_only:
            crit = is_critical_id(idp)
            if not crit:
                return
        result.raw_count += 1
        if crit is None:
            crit = is_critical_id(idp)
        if crit:
            result.raw_critical_count += 1
        key = canonicalize_id(idp)
        if key not in uniq:
            uniq[key] = idp
            result.keys[key] = idp

    if m == 3 and n == 2:
        emit((0, 0))  # the doubled Odd column: the unique 2-qubit ID

    count = len(sqps)

    def over_budget() -> bool:
        if node_budget is not None and result.nodes > node_budget:
            return True
        if deadline is not None and time.monotonic() > deadline:
            return True
        return False

    def walk(start: int, chosen: tuple[int, ...], acc: int):
        result.nodes += 1
        if over_budget():
            result.truncated = True
            return
        remaining = n - len(chosen)
        if remaining == 0:
            if acc == 0:
                emit(chosen)
            return
        if remaining == 1:
            for ci in by_pattern.get(acc, ()):
                if ci >= start:
                    emit(chosen + (ci,))
            return
        for ci in range(start, count - remaining + 1):
            walk(ci + 1, chosen + (ci,), acc ^ patterns[ci])
            if result.truncated:
                return

    walk(0, (), 0)
    result.ids = list(uniq.values())
    return result


# ---------------------------------------------------------------------------
# text and JSON formats


def format_id_block(idp: IdentityProduct) -> str:
    """Text block: header `ID M N O sign`, then M letter rows."""
    head = f"ID {idp.m} {idp.n_qubits} {idp.oddness} {idp.sign:+d}"
    return "\n".join([head] + idp.letters())


def parse_id_blocks(text: str) -> list[IdentityProduct]:
    """Parse a concatenation of ID text blocks, verifying each."""
    out = []
    lines = [ln.strip() for ln in text.splitlines()]
    i = 0
    while i < len(lines):
        if not lines[i]:
            i += 1
            continue
        parts = lines[i].split()
        if parts[0] != "ID" or len(parts) != 5:
            raise ValueError(f"bad ID header at line {i + 1}: {lines[i]!r}")
        m = int(parts[1])
        rows = lines[i + 1: i + 1 + m]
        idp = verify_id(rows)
        if (idp.n_qubits != int(parts[2]) or idp.oddness != int(parts[3])
                or idp.sign != int(parts[4])):
            raise ValueError(f"ID header disagrees with rows at line {i + 1}")
        out.append(idp)
        i += 1 + m
    return out


def id_to_json(idp: IdentityProduct) -> dict:
    return {
        "m": idp.m,
        "n_qubits": idp.n_qubits,
        "oddness": idp.oddness,
        "sign": idp.sign,
        "rows": idp.letters(),
    }


def id_from_json(data) -> IdentityProduct:
    if isinstance(data, str):
        data = json.loads(data)
    return verify_id(data["rows"])
