"""Named fixed structures and the registry behind `catalog emit`.

Squares and stars are embedded as letter grids; the saw and pinwheel
kernels are assembled from their O/I skeletons; the three 5-qubit whole
IDs are recovered by exhaustive search instead of being stored, then told
apart by the symbols of their generated proofs.
"""

from __future__ import annotations

import functools
import itertools

from ..ids import IdentityProduct, enumerate_ids, verify_id
from ..kernels import Kernel, assemble_kernel, parse_cks, verify_kernel
from ..pauli import commutes, format_observable, multiply, parse_observable
from ..proofs import KSProof, generate_proof_from_kernel, verify_ks_proof
from ..rays import RBSet, generate_rb_set
from .families import star_kernel, wheel, wheel_kernel, whorl, whorl_kernel
from .families import cached_kite
from .golden import CatalogError


# ---------------------------------------------------------------------------
# embedded grids

MERMIN_SQUARE_GRID = (("IZ", "ZI", "ZZ"),
                      ("XI", "IX", "XX"),
                      ("XZ", "ZX", "YY"))

SPECIAL_SQUARE_GRID = (("IZZ", "ZZI", "ZIZ"),
                       ("IYY", "IZX", "IXZ"),
                       ("IXX", "ZIX", "ZXI"))

GHZ_GRID = ("ZZZ", "ZXX", "XZX", "XXZ")

# the two-qubit-entangling partial ID; its Even qubit is the hook the saw
# and pinwheel skeletons hang copies from
PARTIAL_3_GRID = ("ZIZ", "IZZ", "XXX", "YYX")

TRIVIAL_3_GRID = ("ZZI", "XXI", "YYI")


def _square_ids(grid) -> list[IdentityProduct]:
    rows = [verify_id(list(r)) for r in grid]
    cols = [verify_id([r[j] for r in grid]) for j in range(3)]
    return rows + cols


def mermin_square() -> KSProof:
    """The 9_2-6_3 proof: three rows and three columns of the square."""
    return verify_ks_proof(_square_ids(MERMIN_SQUARE_GRID))


def mermin_square_kernel() -> Kernel:
    return verify_kernel([[r[2] for r in MERMIN_SQUARE_GRID],
                          list(MERMIN_SQUARE_GRID[2])])


def special_square() -> KSProof:
    """A 3-qubit square built from one trivial and five entangling IDs."""
    return verify_ks_proof(_square_ids(SPECIAL_SQUARE_GRID))


def special_square_kernel() -> Kernel:
    return verify_kernel([[r[0] for r in SPECIAL_SQUARE_GRID],
                          list(SPECIAL_SQUARE_GRID[1])])


def ghz_kernel() -> Kernel:
    """The negative whole 3-qubit ID4 as a single-ID kernel."""
    return verify_kernel([GHZ_GRID])


_STAR_LINES = (("XII", "IXI", "IIX", "XXX"),
               ("XII", "IYI", "IIY", "XYY"),
               ("YII", "IXI", "IIY", "YXY"),
               ("YII", "IYI", "IIX", "YYX"),
               ("XXX", "XYY", "YXY", "YYX"))


def mermin_star() -> KSProof:
    """The 10_2-5_4 pentagram; its only negative line is the GHZ ID."""
    return verify_ks_proof([verify_id(list(line)) for line in _STAR_LINES])


# ---------------------------------------------------------------------------
# the 2-qubit line system

def two_qubit_lines() -> list[IdentityProduct]:
    """All 15 triples of commuting 2-qubit observables with product +-I."""
    words = [a + b for a in "IZXY" for b in "IZXY" if a + b != "II"]
    lines = set()
    for wa, wb in itertools.combinations(words, 2):
        a, b = parse_observable(wa), parse_observable(wb)
        if not commutes(a, b):
            continue
        c, _ = multiply(a, b)
        if c.z == 0 and c.x == 0:
            continue
        lines.add(tuple(sorted((wa, wb, format_observable(c)))))
    assert len(lines) == 15
    return [verify_id(list(line)) for line in sorted(lines)]


def line_spreads() -> list[tuple[int, ...]]:
    """Index 5-subsets of the 15 lines that partition the 15 observables."""
    lines = two_qubit_lines()
    supports = [frozenset(idp.letters()) for idp in lines]
    spreads = []
    for combo in itertools.combinations(range(15), 5):
        union = set()
        for i in combo:
            union |= supports[i]
        if len(union) == 15:
            spreads.append(combo)
    return spreads


def whorl_2() -> KSProof:
    """The 15_2-10_3 proof: all lines avoiding one spread.

    Dropping any 5 lines that partition the observables leaves each
    observable on exactly 2 of the remaining 10 lines.
    """
    lines = two_qubit_lines()
    spread = set(line_spreads()[0])
    return verify_ks_proof([idp for i, idp in enumerate(lines)
                            if i not in spread])


@functools.lru_cache(maxsize=1)
def pauli60() -> RBSet:
    """The 60_7-105_4 ray/basis set generated by all 15 lines."""
    return generate_rb_set(two_qubit_lines())


# ---------------------------------------------------------------------------
# 4-qubit structures

_FOUR_QUBIT_GRIDS = {
    "id4_4_2": ("ZZZZ", "XXXX", "YIZX", "IYXZ"),
    "id4_4_4": ("ZZZI", "XXIZ", "YIXX", "IYYY"),
    "id5_4_0": ("ZZZZ", "ZZXX", "XXII", "XIZX", "IXXZ"),
    "id5_4_2_a": ("ZZZZ", "XXZZ", "YIXI", "IYIX", "IIXX"),
    "id5_4_2_b": ("ZZZZ", "XIXI", "YIZX", "IXXZ", "IYIX"),
    "id5_4_2_c": ("ZZZI", "XXIZ", "YIXX", "IYXX", "IIZZ"),
    "id5_4_2_d": ("ZZZI", "XXZZ", "YZXX", "IZIX", "IYXZ"),
    "id5_4_2_e": ("ZZZI", "XXIZ", "YZXZ", "IZZX", "IYXX"),
    "id5_4_2_f": ("ZZZI", "ZXXZ", "ZYXX", "XXZZ", "YXIX"),
}


def four_qubit_critical_ids() -> dict[str, IdentityProduct]:
    """The nine smallest entangling 4-qubit critical IDs, keyed M_N_O."""
    return {name: verify_id(list(grid))
            for name, grid in _FOUR_QUBIT_GRIDS.items()}


def star_4_kernel() -> Kernel:
    return star_kernel(4)


def star_4() -> KSProof:
    return generate_proof_from_kernel(star_4_kernel())


def windmill_4_kernel() -> Kernel:
    """A whole ID4 circle around a trivial 2-qubit center ID."""
    return verify_kernel([("ZZZZ", "XXXX", "YIZX", "IYXZ"),
                          ("ZZII", "XXII", "YYII")])


def windmill_4() -> KSProof:
    return generate_proof_from_kernel(windmill_4_kernel())


def saw_4_kernel() -> Kernel:
    """Two partial-ID copies on the 2x2 all-O skeleton."""
    partial = verify_id(list(PARTIAL_3_GRID))
    cks = parse_cks("OO\nOO")
    return assemble_kernel(cks, [(partial, {0: 0, 1: 1, 2: 2}),
                                 (partial, {0: 0, 1: 1, 2: 3})])


def saw_4() -> KSProof:
    return generate_proof_from_kernel(saw_4_kernel())


def pinwheel_6_kernel() -> Kernel:
    """Three partial-ID copies chained in a 3-cycle skeleton."""
    partial = verify_id(list(PARTIAL_3_GRID))
    cks = parse_cks("OOI\nIOO\nOIO")
    return assemble_kernel(cks, [(partial, {0: 0, 1: 1, 2: 3}),
                                 (partial, {0: 1, 1: 2, 2: 4}),
                                 (partial, {0: 2, 1: 0, 2: 5})])


def _row_groups(idp: IdentityProduct):
    zs = [w for w in idp.letters() if set(w) <= {"I", "Z"}]
    xs = [w for w in idp.letters() if set(w) <= {"I", "X"}]
    ys = [w for w in idp.letters() if "Y" in w]
    return zs, xs, ys


def pinwheel_6() -> KSProof:
    """The 16_2-5_4 4_3 proof of the pinwheel kernel.

    The generic portion decomposition is too coarse here: the right
    closure pairs the Z rows inside each copy, then closes the X rows and
    the Y rows against one shared all-X word.
    """
    kernel = pinwheel_6_kernel()
    ids = list(kernel.ids)
    z_products = []
    x_rows, y_rows = [], []
    for idp in kernel.ids:
        zs, xs, ys = _row_groups(idp)
        prod, _ = multiply(parse_observable(zs[0]), parse_observable(zs[1]))
        word = format_observable(prod)
        ids.append(verify_id([zs[0], zs[1], word]))
        z_products.append(word)
        x_rows += xs
        y_rows += ys
    for rows in (x_rows, y_rows):
        prod = functools.reduce(
            lambda acc, w: multiply(acc, parse_observable(w))[0],
            rows[1:], parse_observable(rows[0]))
        ids.append(verify_id(rows + [format_observable(prod)]))
    ids.append(verify_id(z_products))
    return verify_ks_proof(ids)


# ---------------------------------------------------------------------------
# 5-qubit whole IDs, recovered by search

@functools.lru_cache(maxsize=2)
def _whole_negative_ids(n: int) -> tuple[IdentityProduct, ...]:
    result = enumerate_ids(5, n, sign=-1, whole_only=True, critical_only=True)
    return tuple(result.ids)


@functools.lru_cache(maxsize=1)
def _five_qubit_assignments() -> dict[str, Kernel]:
    found = {}
    ids5 = _whole_negative_ids(5)
    if len(ids5) != 1:
        raise CatalogError(f"expected one whole 5x5 ID, found {len(ids5)}")
    found["alt_star_5"] = verify_kernel([ids5[0]])
    by_symbol = {}
    for idp in _whole_negative_ids(6):
        kernel = verify_kernel([idp])
        by_symbol[generate_proof_from_kernel(kernel).symbol] = kernel
    for name, symbol in (("arch_6", "11_2-1_5 2_4 3_3"),
                         ("arrow_6", "13_2-2_5 4_4")):
        if symbol not in by_symbol:
            raise CatalogError(f"no whole 5x6 ID generates a {symbol} proof")
        found[name] = by_symbol[symbol]
    return found


def alt_star_5_kernel() -> Kernel:
    return _five_qubit_assignments()["alt_star_5"]


def alt_star_5() -> KSProof:
    return generate_proof_from_kernel(alt_star_5_kernel())


def arch_6_kernel() -> Kernel:
    return _five_qubit_assignments()["arch_6"]


def arch_6() -> KSProof:
    return generate_proof_from_kernel(arch_6_kernel())


def arrow_6_kernel() -> Kernel:
    return _five_qubit_assignments()["arrow_6"]


def arrow_6() -> KSProof:
    return generate_proof_from_kernel(arrow_6_kernel())


# ---------------------------------------------------------------------------
# registry

_REGISTRY = {
    "mermin_square": mermin_square,
    "mermin_square_kernel": mermin_square_kernel,
    "mermin_star": mermin_star,
    "ghz_kernel": ghz_kernel,
    "special_square": special_square,
    "special_square_kernel": special_square_kernel,
    "whorl_2": whorl_2,
    "wheel_3": lambda: wheel(3),
    "wheel_3_kernel": lambda: wheel_kernel(3),
    "expanded_wheel_3": lambda: wheel(3, expanded_circles=3),
    "wheel_5": lambda: wheel(5),
    "kite_3": lambda: cached_kite("odd_Np1", 3).proof,
    "kite_3_kernel": lambda: cached_kite("odd_Np1", 3).kernel,
    "star_4": star_4,
    "star_4_kernel": star_4_kernel,
    "star_5_kernel": lambda: star_kernel(5),
    "whorl_4": lambda: whorl(4),
    "whorl_4_kernel": lambda: whorl_kernel(4),
    "whorl_6": lambda: whorl(6),
    "windmill_4": windmill_4,
    "windmill_4_kernel": windmill_4_kernel,
    "saw_4": saw_4,
    "saw_4_kernel": saw_4_kernel,
    "pinwheel_6": pinwheel_6,
    "pinwheel_6_kernel": pinwheel_6_kernel,
    "alt_star_5": alt_star_5,
    "alt_star_5_kernel": alt_star_5_kernel,
    "arch_6": arch_6,
    "arch_6_kernel": arch_6_kernel,
    "arrow_6": arrow_6,
    "arrow_6_kernel": arrow_6_kernel,
}


def catalog_names() -> list[str]:
    return sorted(_REGISTRY)


def named(structure_id: str) -> Kernel | KSProof:
    """Build a named structure; raises CatalogError for unknown names."""
    try:
        builder = _REGISTRY[structure_id]
    except KeyError:
        known = ", ".join(catalog_names())
        raise CatalogError(
            f"unknown structure {structure_id!r}; known: {known}") from None
    return builder()
