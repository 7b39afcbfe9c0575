"""Colorability, parity-proof search and criticality checks.

The expected censuses here (512 / 1024 / 32768 / 33152 / 4096 and the
per-symbol breakdowns) were frozen from exhaustive runs of the null-space
enumerator and cross-checked against the independent tree search and the
2^O fast-path construction before being asserted.
"""

import functools
import json

import pytest
from conftest import two_qubit_whorl
from hypothesis import given, settings
from hypothesis import strategies as st

from pauliks.kernels import verify_kernel
from pauliks.proofs import generate_proof_from_kernel, verify_ks_proof
from pauliks.rays import generate_rb_set
from pauliks.search import (
    BudgetExceededError,
    FastPathError,
    SearchError,
    basis_colorable,
    classify_proofs,
    fast_path_parity,
    find_parity_proofs,
    is_basis_critical,
    is_ray_critical,
    make_parity_proof,
    proofs_to_jsonl,
    ray_colorable,
)


@functools.cache
def square_set():
    proof = generate_proof_from_kernel(verify_kernel(
        [["ZZ", "XX", "YY"], ["ZX", "XZ", "YY"]]))
    return generate_rb_set(proof)


@functools.cache
def star_set():
    proof = generate_proof_from_kernel(verify_kernel(
        [["ZZZ", "ZXX", "XZX", "XXZ"]]))
    return generate_rb_set(proof)


@functools.cache
def kite_set():
    proof = generate_proof_from_kernel(verify_kernel(
        [["ZIZ", "IZZ", "XXX", "YYX"], ["ZIZ", "IXZ", "XZX", "YYX"]]))
    return generate_rb_set(proof)


@functools.cache
def whorl_set():
    return generate_rb_set(verify_ks_proof(two_qubit_whorl()))


@functools.cache
def square_census():
    return find_parity_proofs(square_set()).proofs


def smallest_square_proof():
    return next(p for p in square_census() if p.symbol == "18-9")


class TestColorability:
    def test_peres_square_uncolorable(self):
        verdict = basis_colorable(square_set())
        assert verdict.status == "UNCOLORABLE"
        assert not verdict.colorable
        assert verdict.witnesses == ()
        # deterministic branch order; the whole tree is 45 nodes
        assert verdict.explored == 45

    def test_single_basis_has_four_colorings(self):
        verdict = basis_colorable([(0, 1, 2, 3)], n_rays=4)
        assert verdict.colorable
        assert verdict.witnesses == ((0,), (1,), (2,), (3,))

    def test_disjoint_bases_color_independently(self):
        verdict = basis_colorable([(0, 1, 2, 3), (4, 5, 6, 7)], n_rays=8)
        assert len(verdict.witnesses) == 16
        for w in verdict.witnesses:
            assert len(set(w) & {0, 1, 2, 3}) == 1
            assert len(set(w) & {4, 5, 6, 7}) == 1

    def test_smallest_proof_subset_uncolorable(self):
        rbs = square_set()
        subset = [rbs.bases[b].ray_indices
                  for b in smallest_square_proof().basis_indices]
        verdict = basis_colorable(subset, n_rays=len(rbs.rays))
        assert verdict.status == "UNCOLORABLE"

    def test_ray_mode_inherits_basis_uncolorability(self):
        assert ray_colorable(square_set()).status == "UNCOLORABLE"

    def test_orthogonal_quadruple_colorable(self):
        rays = square_set().bases[0].ray_indices
        pairs = [(a, b) for i, a in enumerate(rays) for b in rays[i + 1:]]
        verdict = ray_colorable([rays], pairs, n_rays=24)
        assert verdict.colorable
        assert len(verdict.witnesses) == 4

    def test_node_budget(self):
        with pytest.raises(BudgetExceededError):
            basis_colorable(square_set(), node_budget=10)


class TestSquareCensus:
    def test_five_hundred_twelve_proofs(self):
        assert len(square_census()) == 512

    def test_histogram(self):
        assert classify_proofs(square_census()) == [
            ("18-9", "18_2-9_4", 16),
            ("20-11", "2_4 18_2-11_4", 240),
            ("22-13", "4_4 18_2-13_4", 240),
            ("24-15", "6_4 18_2-15_4", 16),
        ]

    def test_fast_path_reproduces_search(self):
        fast = fast_path_parity(square_set())
        assert len(fast) == 512
        assert sorted(p.basis_indices for p in fast) == sorted(
            p.basis_indices for p in square_census())

    def test_complement_pairing(self):
        # the 24 bases split every proof/complement pair 18-9 <-> 24-15
        # and 20-11 <-> 22-13
        by_bases = {p.basis_indices: p for p in square_census()}
        partner = {"18-9": "24-15", "24-15": "18-9",
                   "20-11": "22-13", "22-13": "20-11"}
        for proof in square_census():
            rest = tuple(b for b in range(24)
                         if b not in proof.basis_indices)
            assert by_bases[rest].symbol == partner[proof.symbol]

    def test_every_proof_is_a_parity_proof(self):
        for proof in square_census():
            assert len(proof.basis_indices) % 2 == 1
            assert all(c % 2 == 0 for _, c in proof.multiplicities)
            assert proof.critical

    def test_no_noncritical_proofs_in_square(self):
        res = find_parity_proofs(square_set(), critical_only=False)
        assert len(res.proofs) == 512
        assert all(p.critical for p in res.proofs)

    def test_tree_method_agrees(self):
        tree = find_parity_proofs(square_set(), method="tree")
        assert [p.basis_indices for p in tree.proofs] == [
            p.basis_indices for p in square_census()]
        assert not tree.partial

    def test_size_window(self):
        res = find_parity_proofs(square_set(), min_bases=9, max_bases=9)
        assert len(res.proofs) == 16
        assert {p.symbol for p in res.proofs} == {"18-9"}
        assert not res.partial

    def test_count_cap_flags_partial(self):
        res = find_parity_proofs(square_set(), max_count=10)
        assert len(res.proofs) == 10
        assert res.partial


class TestStarCensus:
    def test_histogram(self):
        res = find_parity_proofs(star_set())
        assert classify_proofs(res.proofs) == [
            ("36-11", "8_4 28_2-11_8", 320),
            ("38-13", "14_4 24_2-13_8", 640),
            ("40-15", "20_4 20_2-15_8", 64),
        ]

    def test_fast_path_reproduces_search(self):
        res = find_parity_proofs(star_set())
        fast = fast_path_parity(star_set())
        assert sorted(p.basis_indices for p in fast) == sorted(
            p.basis_indices for p in res.proofs)


@pytest.mark.slow
class TestWhorlCensus:
    def test_fast_path_census(self):
        fast = fast_path_parity(whorl_set())
        assert len(fast) == 32768
        hist = {}
        for p in fast:
            hist[p.symbol] = hist.get(p.symbol, 0) + 1
        assert hist == {"30-15": 64, "32-17": 2880, "34-19": 13440,
                        "36-21": 13440, "38-23": 2880, "40-25": 64}
        assert all(p.critical for p in fast)
        # selection k and its bitwise complement are complementary proofs
        pair = {"30-15": "40-25", "32-17": "38-23", "34-19": "36-21"}
        for sym, mate in pair.items():
            assert hist[sym] == hist[mate]

    def test_search_reproduces_fast_path(self):
        res = find_parity_proofs(whorl_set())
        fast = fast_path_parity(whorl_set())
        assert sorted(p.basis_indices for p in fast) == sorted(
            p.basis_indices for p in res.proofs)


@functools.cache
def kite_census():
    return find_parity_proofs(kite_set()).proofs


@pytest.mark.slow
class TestKiteCensus:
    def test_census(self):
        proofs = kite_census()
        assert len(proofs) == 33152
        sizes = {}
        for p in proofs:
            sizes[p.symbol] = sizes.get(p.symbol, 0) + 1
        assert sizes == {
            "24-9": 16, "26-11": 192, "27-11": 768, "28-11": 208,
            "28-13": 4288, "29-13": 7168, "30-13": 1248, "30-15": 12032,
            "31-15": 5376, "32-15": 208, "32-17": 1648,
        }
        smallest = min(proofs, key=lambda p: len(p.basis_indices))
        largest = max(proofs, key=lambda p: len(p.basis_indices))
        assert smallest.symbol == "24-9"
        assert smallest.expanded_symbol == "12^1_2 12^2_2-1_8 4_6 4_4"
        assert largest.symbol == "32-17"
        big = {p.expanded_symbol for p in proofs if p.symbol == "32-17"}
        assert "4^1_6 4^1_4 4^2_4 8^1_2 12^2_2-5_8 4_6 8_4" in big

    def test_minimality_alone_overcounts(self):
        # 2^19 parity proofs in all; 41,472 contain no smaller parity
        # proof; only 33,152 of those are critical, because a basis
        # deletion can leave a non-parity uncolorable set
        from pauliks.search import (_incidence_columns, _null_space,
                                    _support_null_dimension)
        rbs = kite_set()
        null = _null_space(_incidence_columns(rbs))
        assert len(null) == 20
        n_bases = len(rbs.bases)
        minimal = 0
        combo = 0
        for selector in range(1, 1 << 20):
            combo ^= null[(selector & -selector).bit_length() - 1]
            if combo.bit_count() % 2 == 0:
                continue
            subset = tuple(i for i in range(n_bases) if (combo >> i) & 1)
            if _support_null_dimension(rbs, subset) == 1:
                minimal += 1
        assert minimal == 41472
        assert len(kite_census()) == 33152


@pytest.mark.slow
class TestStarFourFastPath:
    def test_census(self):
        proof = generate_proof_from_kernel(verify_kernel(
            [["ZZZZ", "ZZXX", "XXII", "XIZX", "IXXZ"]]))
        rbs = generate_rb_set(proof)
        fast = fast_path_parity(rbs)
        assert len(fast) == 4096
        hist = {}
        for p in fast:
            hist[p.symbol] = hist.get(p.symbol, 0) + 1
        assert hist == {"47-13": 768, "49-15": 2560, "51-17": 768}
        assert all(p.critical for p in fast)


class TestFastPathPreconditions:
    def test_shared_pair_of_observables_rejected(self):
        # the kite's ID4 pair shares two observables: 14 hybrids per
        # pair, not 2, so the one-choice-per-pair construction fails
        with pytest.raises(FastPathError):
            fast_path_parity(kite_set())

    def test_orphaned_hybrid_rejected(self):
        from pauliks.rays import RBSet
        rbs = square_set()
        drop = next(i for i, b in enumerate(rbs.bases)
                    if b.kind == "hybrid")
        broken = RBSet(rbs.n_qubits, rbs.rays,
                       rbs.bases[:drop] + rbs.bases[drop + 1:])
        with pytest.raises(FastPathError):
            fast_path_parity(broken)


class TestCriticality:
    def test_smallest_square_proof_basis_critical(self):
        assert is_basis_critical(square_set(), smallest_square_proof())

    def test_smallest_square_proof_ray_critical(self):
        rbs = square_set()
        subset = [rbs.bases[b].ray_indices
                  for b in smallest_square_proof().basis_indices]
        pairs = [(a, b) for basis in subset
                 for i, a in enumerate(basis) for b in basis[i + 1:]]
        assert is_ray_critical(subset, pairs, n_rays=len(rbs.rays))

    def test_full_square_set_not_critical(self):
        assert not is_basis_critical(square_set())

    def test_deletions_of_critical_proof_colorable(self):
        rbs = square_set()
        subset = [rbs.bases[b].ray_indices
                  for b in smallest_square_proof().basis_indices]
        for drop in range(len(subset)):
            kept = subset[:drop] + subset[drop + 1:]
            assert basis_colorable(kept, n_rays=len(rbs.rays)).colorable

    def test_rejects_colorable_input(self):
        with pytest.raises(SearchError):
            is_basis_critical([(0, 1, 2, 3)])


class TestProofConstruction:
    def test_even_subset_rejected(self):
        with pytest.raises(SearchError):
            make_parity_proof(square_set(), (0, 1))

    def test_odd_multiplicity_rejected(self):
        with pytest.raises(SearchError):
            make_parity_proof(square_set(), (0,))

    def test_explicit_flag_skips_check(self):
        bases = smallest_square_proof().basis_indices
        proof = make_parity_proof(square_set(), bases, critical=False)
        assert not proof.critical

    def test_jsonl_stream(self):
        text = proofs_to_jsonl(square_census()[:4])
        records = [json.loads(line) for line in text.splitlines()]
        assert len(records) == 4
        assert records[0]["symbol"] == "18-9"
        assert set(records[0]) == {"bases", "symbol", "expanded", "critical"}
        assert text == proofs_to_jsonl(square_census()[:4])


class TestInvariance:
    @given(st.permutations(range(8)))
    @settings(max_examples=25, deadline=None)
    def test_basis_order_does_not_change_colorings(self, order):
        rbs = square_set()
        subset = [rbs.bases[b].ray_indices
                  for b in smallest_square_proof().basis_indices[:8]]
        base = basis_colorable(subset, n_rays=len(rbs.rays))
        shuffled = basis_colorable([subset[i] for i in order],
                                   n_rays=len(rbs.rays))
        assert shuffled.status == base.status
        assert set(shuffled.witnesses) == set(base.witnesses)

    @given(st.permutations(range(9)))
    @settings(max_examples=25, deadline=None)
    def test_subset_order_does_not_change_proof(self, order):
        bases = smallest_square_proof().basis_indices
        proof = make_parity_proof(square_set(),
                                  [bases[i] for i in order])
        assert proof == smallest_square_proof()
