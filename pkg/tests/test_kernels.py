"""Kernel engine tests: structures, censuses, assembly, criticality."""

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from pauliks.ids import verify_id, permute_id
from pauliks.kernels import (
    CKSError,
    CompositeKernelStructure,
    EvenNegativeCountError,
    KernelError,
    LetterParityError,
    OddnessMismatchError,
    _circuits_isomorphic,
    _cks_invariant,
    assemble_kernel,
    cks_from_masks,
    critical_link_groups,
    criticality_network,
    enumerate_cks,
    format_cks,
    format_kernel,
    is_critical_cks,
    is_critical_kernel,
    parse_cks,
    parse_kernel,
    verify_kernel,
)

RING = ["ZZ", "XX", "YY"]
MS_KERNEL = [["ZZ", "XX", "YY"], ["ZX", "XZ", "YY"]]
GHZ_ID = ["ZZZ", "ZXX", "XZX", "XXZ"]
Q3_PARTIAL = ["ZIZ", "IZZ", "XXX", "YYX"]

# the six 2..4-qubit critical structures and the ten 5-qubit ones
STRUCTS_234 = [
    "OO/OO",
    "OOI/OIO/IOO",
    "OOOO/OOOO",
    "OOOO/OOII/IIOO",
    "OOOO/OOII/OIOI/OIIO",
    "OOII/IOOI/IIOO/OIIO",
]
STRUCTS_5 = [
    "OOOOI/OOOIO/IIIOO",
    "OOOOI/OOOIO/OOIOO/OOIII",
    "OOOOI/OOOIO/OIIOI/OIIIO",
    "OOOOI/OOIII/IIOIO/IIIOO",
    "OOOOI/OOOIO/OOIOO/OIOOO/IOOOO",
    "OOOOI/OOOIO/OOIOO/OIOII/IOOII",
    "OOOOI/OOOIO/OOIII/OIIOI/IOIIO",
    "OOOOI/OOIII/OIOII/OIIIO/IIIOO",
    "OOOOI/OIIIO/IOIIO/IIOIO/IIIOO",
    "OOIII/IOOII/IIOOI/IIIOO/OIIIO",
]


def slashes(text):
    return parse_cks("\n".join(text.split("/")))


def same_structure(a, b):
    am = tuple(sorted(a.row_masks()))
    bm = tuple(sorted(b.row_masks()))
    if a.n_qubits != b.n_qubits:
        return False
    n = a.n_qubits
    return _cks_invariant(am, n) == _cks_invariant(bm, n) \
        and _circuits_isomorphic(am, bm, n)


class TestCKSValidity:
    def test_round_trip(self):
        cks = slashes("OOI/OIO/IOO")
        assert parse_cks(format_cks(cks)) == cks
        assert cks.n_qubits == 3 and cks.n_ids == 3
        assert cks.row_masks() == (0b011, 0b101, 0b110)
        assert cks.o_columns(1) == (0, 2)

    def test_odd_column_rejected(self):
        with pytest.raises(CKSError):
            slashes("OOII/IOOI")   # columns 0 and 3 unpaired

    def test_odd_row_rejected(self):
        with pytest.raises(CKSError):
            CompositeKernelStructure(("OOO", "OOO"))

    def test_empty_row_rejected(self):
        with pytest.raises(CKSError):
            CompositeKernelStructure(("OO", "II", "OO"))

    def test_ragged_and_junk_rejected(self):
        with pytest.raises(CKSError):
            CompositeKernelStructure(("OO", "OOI"))
        with pytest.raises(CKSError):
            CompositeKernelStructure(("OX", "OX"))

    def test_from_masks(self):
        assert cks_from_masks((3, 3), 2).rows == ("OO", "OO")


class TestCKSCriticality:
    @pytest.mark.parametrize("text", STRUCTS_234 + STRUCTS_5)
    def test_published_structures_are_critical(self, text):
        assert is_critical_cks(slashes(text))

    def test_stacked_pairs_not_critical(self):
        # two all-O pairs stacked: either pair deletes away
        assert not is_critical_cks(slashes("OOOO/OOOO/OOOO/OOOO"))

    def test_disjoint_union_not_critical(self):
        assert not is_critical_cks(slashes("OOII/OOII/IIOO/IIOO"))

    def test_redundant_row_pair_not_critical(self):
        assert not is_critical_cks(slashes("OOI/OIO/IOO/OOI/OOI"))


class TestCKSEnumeration:
    def test_counts_2_to_5(self):
        assert [len(enumerate_cks(n).structures)
                for n in (2, 3, 4, 5)] == [1, 1, 4, 10]

    def test_all_reported_critical_and_valid(self):
        for n in (2, 3, 4, 5):
            for s in enumerate_cks(n).structures:
                assert is_critical_cks(s)

    def test_n4_matches_published_list(self):
        mine = enumerate_cks(4).structures
        for text in STRUCTS_234[2:]:
            assert any(same_structure(slashes(text), s) for s in mine)

    def test_n5_matches_published_list(self):
        mine = enumerate_cks(5).structures
        hits = set()
        for text in STRUCTS_5:
            want = slashes(text)
            match = [k for k, s in enumerate(mine)
                     if same_structure(want, s)]
            assert len(match) == 1
            hits.add(match[0])
        assert len(hits) == 10

    def test_n2_and_n3_exact(self):
        assert enumerate_cks(2).structures[0].rows == ("OO", "OO")
        assert enumerate_cks(3).structures[0].rows == ("OOI", "OIO", "IOO")

    def test_raw_count_n5(self):
        # 248 covering circuits before permutation dedup
        assert enumerate_cks(5).raw_count == 248

    def test_node_budget_truncates(self):
        res = enumerate_cks(6, node_budget=100)
        assert res.truncated

    def test_deterministic(self):
        a = enumerate_cks(4)
        b = enumerate_cks(4)
        assert [s.rows for s in a.structures] == [s.rows for s in b.structures]

    def test_orbit_sizes_sum_to_raw_count(self):
        # every labeled structure must fall in exactly one class orbit
        for n in (4, 5):
            res = enumerate_cks(n)
            total = 0
            for s in res.structures:
                masks = sorted(s.row_masks())
                orbit = {tuple(sorted(
                    sum(((m >> i) & 1) << p[i] for i in range(n))
                    for m in masks))
                    for p in itertools.permutations(range(n))}
                total += len(orbit)
            assert total == res.raw_count

    @pytest.mark.slow
    def test_count_6(self):
        # the published count for 6 qubits is 109; exhaustive search over
        # covering circuits (verified against an independent
        # inclusion-exclusion count of 18,679 raw circuits) finds 78
        res = enumerate_cks(6)
        assert res.raw_count == 18679
        assert len(res.structures) == 78
        assert all(is_critical_cks(s) for s in res.structures)

    @pytest.mark.slow
    def test_count_7(self):
        # published: 1521.  This search finds 1526, with the raw count
        # matched by the independent circuit/covering closed form and the
        # orbit sizes of the 1526 classes summing to it exactly, so the
        # class list is complete and duplicate-free
        res = enumerate_cks(7)
        assert res.raw_count == 4858133
        assert len(res.structures) == 1526
        canon = {"/".join(s.rows) for s in res.structures}
        assert len(canon) == 1526


class TestVerifyKernel:
    def test_mermin_square_kernel(self):
        k = verify_kernel(MS_KERNEL)
        assert k.kind == "composite"
        assert k.strong_ks_pair() == (-1, +1)
        assert k.cks().rows == ("OO", "OO")
        assert k.odd_observables() == ["ZZ", "XX", "ZX", "XZ"]

    def test_single_id_kernel(self):
        k = verify_kernel([GHZ_ID])
        assert k.kind == "single-ID"
        assert k.ids[0].sign == -1
        assert k.cks() is None

    def test_single_negative_partial_fails_parity(self):
        with pytest.raises(LetterParityError) as err:
            verify_kernel([RING])
        assert err.value.qubit == 0
        assert err.value.letter in "ZXY"

    def test_even_negative_count_rejected(self):
        with pytest.raises(EvenNegativeCountError) as err:
            verify_kernel([RING, RING])
        assert err.value.count == 2

    def test_positive_pair_rejected(self):
        grid = ["ZIZ", "IXZ", "XZX", "YYX"]   # positive partner alone, twice
        with pytest.raises(EvenNegativeCountError):
            verify_kernel([grid, grid])

    def test_empty_rejected(self):
        with pytest.raises(KernelError):
            verify_kernel([])

    def test_multiplicities(self):
        k = verify_kernel(MS_KERNEL)
        assert k.observable_multiplicities()["YY"] == 2


KITE3 = verify_kernel([Q3_PARTIAL, ["ZIZ", "IXZ", "XZX", "YYX"]])
WHEEL3 = verify_kernel([["ZZI", "XXI", "YYI"],
                        ["IZZ", "IXX", "IYY"],
                        ["ZIZ", "XIX", "YIY"]])


class TestAssembleKernel:
    def test_wheel3(self):
        ring = verify_id(RING)
        k = assemble_kernel(slashes("OOI/IOO/OIO"), [
            (ring, {0: 0, 1: 1}),
            (ring, {0: 1, 1: 2}),
            (ring, {0: 2, 1: 0}),
        ])
        assert [i.letters() for i in k.ids] == \
            [i.letters() for i in WHEEL3.ids]
        assert all(i.sign == -1 for i in k.ids)

    def test_kite3_shares_even_qubit(self):
        idp = verify_id(Q3_PARTIAL)
        k = assemble_kernel(slashes("OO/OO"), [
            (idp, {0: 0, 1: 1, 2: 2}),
            (idp, {0: 0, 1: 1, 2: 2}),
        ])
        assert k.n_qubits == 3
        signs = sorted(i.sign for i in k.ids)
        assert signs == [-1, 1]   # sign fixing flipped one copy

    def test_saw4_fresh_even_qubits(self):
        idp = verify_id(Q3_PARTIAL)
        k = assemble_kernel(slashes("OO/OO"), [
            (idp, {0: 0, 1: 1, 2: 2}),
            (idp, {0: 0, 1: 1, 2: 3}),
        ])
        assert k.n_qubits == 4
        assert sorted(i.sign for i in k.ids) == [-1, 1]
        assert is_critical_kernel(k)

    def test_odd_qubit_on_wrong_column(self):
        idp = verify_id(Q3_PARTIAL)
        with pytest.raises(OddnessMismatchError) as err:
            assemble_kernel(slashes("OO/OO"), [
                (idp, {0: 0, 1: 2, 2: 1}),   # odd qubit 1 lands on I slot
                (idp, {0: 0, 1: 1, 2: 2}),
            ])
        assert err.value.row == 0

    def test_non_injective_placement(self):
        idp = verify_id(Q3_PARTIAL)
        with pytest.raises(OddnessMismatchError):
            assemble_kernel(slashes("OO/OO"), [
                (idp, {0: 0, 1: 1, 2: 1}),
                (idp, {0: 0, 1: 1, 2: 2}),
            ])

    def test_row_count_mismatch(self):
        with pytest.raises(KernelError):
            assemble_kernel(slashes("OO/OO"),
                            [(verify_id(Q3_PARTIAL), {0: 0, 1: 1, 2: 2})])


ID44 = verify_id(["ZZZI", "XXIZ", "YIXX", "IYYY"])
RING_T = verify_id(["ZZZ", "XXZ", "YYI"])   # ring plus a trivial column
UNION_ID = verify_id(["ZZIII", "XXIII", "YYIII",
                      "IIZIZ", "IIIZZ", "IIXXX", "IIYYX"])


def build_crit_struct():
    return assemble_kernel(slashes("OOOO/OOII/IIOO"), [
        (ID44, {0: 0, 1: 1, 2: 2, 3: 3}),
        (RING_T, {0: 0, 1: 1, 2: 2}),
        (RING_T, {0: 2, 1: 3, 2: 0}),
    ])


def build_noncrit_struct():
    return assemble_kernel(slashes("OOOO/OOII/IIOO"), [
        (UNION_ID, {0: 0, 1: 1, 2: 2, 3: 3, 4: 4}),
        (verify_id(RING), {0: 0, 1: 1}),
        (RING_T, {0: 2, 1: 3, 2: 4}),
    ])


class TestKernelCriticality:
    def test_mermin_square_critical(self):
        assert is_critical_kernel(verify_kernel(MS_KERNEL))

    def test_ghz_critical(self):
        assert is_critical_kernel(verify_kernel([GHZ_ID]))

    def test_padded_ghz_not_critical(self):
        padded = verify_kernel([["ZZZI", "ZXXI", "XZXI", "XXZI"]])
        assert not is_critical_kernel(padded)

    def test_kite3_critical(self):
        assert is_critical_kernel(KITE3)

    def test_wheel3_critical(self):
        # no single ID here is critical, yet the kernel is
        assert is_critical_kernel(WHEEL3)

    def test_redundant_ring_pair_not_critical(self):
        extra = ["ZZI", "XXI", "YYI"]
        k = verify_kernel([idp.letters() for idp in WHEEL3.ids]
                          + [extra, extra])
        assert not is_critical_kernel(k)

    def test_crit_struct_example(self):
        k = build_crit_struct()
        assert is_critical_kernel(k)
        assert criticality_network(k)

    def test_noncrit_struct_example(self):
        k = build_noncrit_struct()
        assert not is_critical_kernel(k)
        assert not criticality_network(k)


class TestCriticalityNetwork:
    @pytest.mark.parametrize("kernel,expect", [
        (verify_kernel(MS_KERNEL), True),
        (KITE3, True),
        (WHEEL3, True),
    ])
    def test_agrees_with_brute_force(self, kernel, expect):
        assert criticality_network(kernel) == expect
        assert is_critical_kernel(kernel) == expect

    def test_link_groups_of_union_id(self):
        groups = sorted(critical_link_groups(UNION_ID))
        assert (0, 1) in groups
        assert (2, 3, 4) in groups

    def test_link_groups_of_critical_id(self):
        assert critical_link_groups(ID44) == [(0, 1, 2, 3)]

    def test_explicit_map_matches_default(self):
        k = build_noncrit_struct()
        explicit = [critical_link_groups(idp) for idp in k.ids]
        assert criticality_network(k, explicit) == criticality_network(k)


class TestKernelIO:
    def test_round_trip(self):
        text = format_kernel(WHEEL3)
        again = parse_kernel(text)
        assert [i.letters() for i in again.ids] == \
            [i.letters() for i in WHEEL3.ids]
        assert text.startswith("KERNEL 3 3\n")

    def test_header_required(self):
        with pytest.raises(KernelError):
            parse_kernel("ID 3 2 2 -1\nZZ\nXX\nYY")

    def test_count_checked(self):
        text = format_kernel(WHEEL3).replace("KERNEL 3 3", "KERNEL 2 3")
        with pytest.raises(KernelError):
            parse_kernel(text)


@st.composite
def qubit_perms(draw, n):
    return draw(st.permutations(range(n)))


class TestInvariance:
    @given(perm=st.permutations(range(3)))
    @settings(max_examples=20, deadline=None)
    def test_kernel_valid_under_qubit_perm(self, perm):
        ids = [permute_id(idp, qubit_perm=perm) for idp in WHEEL3.ids]
        k = verify_kernel(ids)
        assert is_critical_kernel(k)

    @given(perm=st.permutations(range(4)))
    @settings(max_examples=15, deadline=None)
    def test_cks_criticality_perm_invariant(self, perm):
        cks = slashes("OOOO/OOII/IIOO")
        permuted = CompositeKernelStructure(
            tuple("".join(r[perm[t]] for t in range(4)) for r in cks.rows))
        assert is_critical_cks(permuted)

    @given(data=st.data())
    @settings(max_examples=15, deadline=None)
    def test_enumerated_structures_survive_row_shuffle(self, data):
        structures = enumerate_cks(4).structures
        s = data.draw(st.sampled_from(structures))
        order = data.draw(st.permutations(range(s.n_ids)))
        shuffled = CompositeKernelStructure(
            tuple(s.rows[i] for i in order))
        assert is_critical_cks(shuffled)
