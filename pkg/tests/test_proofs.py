"""Observable-based proof verification, generation and diagrams."""

import itertools

import pytest
from conftest import two_qubit_whorl
from hypothesis import given, settings
from hypothesis import strategies as st

from pauliks.ids import enumerate_ids, permute_id, verify_id
from pauliks.kernels import EvenNegativeCountError, KernelError, verify_kernel
from pauliks.proofs import (
    KSProofError,
    OddMultiplicityError,
    alpha_bound,
    export_dot,
    find_embedded_kernels,
    format_proof,
    generate_proof_from_kernel,
    generate_wheel_closure,
    parse_proof,
    proofs_isomorphic,
    verify_ks_proof,
)

MS_IDS = [
    ["ZI", "IX", "ZX"],
    ["IZ", "XI", "XZ"],
    ["ZZ", "XX", "YY"],
    ["ZI", "IZ", "ZZ"],
    ["IX", "XI", "XX"],
    ["ZX", "XZ", "YY"],
]

GHZ_ID = ["ZZZ", "ZXX", "XZX", "XXZ"]

KITE3_KERNEL = [["ZIZ", "IZZ", "XXX", "YYX"],
                ["ZIZ", "IXZ", "XZX", "YYX"]]

WHEEL3_KERNEL = [["ZZI", "XXI", "YYI"],
                 ["IZZ", "IXX", "IYY"],
                 ["ZIZ", "XIX", "YIY"]]

WINDMILL4_KERNEL = [["ZZII", "XXII", "YYII"],
                    ["ZZZZ", "XXXX", "YIZX", "IYXZ"]]

WHORL4_KERNEL = [["ZZII", "XXII", "YYII"],
                 ["IZZI", "IXXI", "IYYI"],
                 ["IIZZ", "IIXX", "IIYY"],
                 ["XIIZ", "ZIIX", "YIIY"]]
WHORL4_CENTER = ["YYII", "IYYI", "IIYY", "YIIY"]

STAR4_ID = ["ZZZZ", "ZZXX", "XXII", "XIZX", "IXXZ"]


class TestVerifyProof:
    def test_mermin_square(self):
        proof = verify_ks_proof(MS_IDS)
        assert proof.symbol == "9_2-6_3"
        assert proof.n_negative == 1
        assert proof.n_qubits == 2
        assert proof.parity_witness() == (-1, +1)

    def test_multiplicities(self):
        proof = verify_ks_proof(MS_IDS)
        counts = proof.observable_multiplicities()
        assert len(counts) == 9
        assert set(counts.values()) == {2}

    def test_two_qubit_whorl(self):
        proof = verify_ks_proof(two_qubit_whorl())
        assert proof.symbol == "15_2-10_3"
        assert proof.n_negative % 2 == 1

    def test_square_minus_one_id(self):
        with pytest.raises(OddMultiplicityError) as err:
            verify_ks_proof(MS_IDS[:-1])
        assert err.value.count == 1
        assert err.value.word in {"ZX", "XZ", "YY"}

    def test_even_negative_count(self):
        # a duplicated positive ID has even multiplicities but no negatives
        with pytest.raises(EvenNegativeCountError):
            verify_ks_proof([MS_IDS[0], MS_IDS[0]])

    def test_empty(self):
        with pytest.raises(KSProofError):
            verify_ks_proof([])

    def test_mixed_widths(self):
        with pytest.raises(KSProofError):
            verify_ks_proof([MS_IDS[0], GHZ_ID, MS_IDS[0], GHZ_ID])


class TestGenerateFromKernel:
    def test_mermin_star(self):
        kernel = verify_kernel([GHZ_ID])
        proof = generate_proof_from_kernel(kernel)
        assert proof.symbol == "10_2-5_4"
        grids = {tuple(idp.letters()) for idp in proof.ids}
        assert ("ZZZ", "ZII", "IZI", "IIZ") in grids
        assert ("XXZ", "XII", "IXI", "IIZ") in grids

    def test_generated_ids_positive(self):
        kernel = verify_kernel([GHZ_ID])
        proof = generate_proof_from_kernel(kernel)
        assert [idp.sign for idp in proof.ids] == [-1, 1, 1, 1, 1]

    def test_kite_3(self):
        kernel = verify_kernel(KITE3_KERNEL)
        proof = generate_proof_from_kernel(kernel)
        assert proof.symbol == "10_2-2_4 4_3"
        # the two X-heavy odd observables share the XIX portion
        grids = {tuple(idp.letters()) for idp in proof.ids}
        assert ("XXX", "XIX", "IXI") in grids
        assert ("XZX", "XIX", "IZI") in grids
        assert ("IZZ", "IZI", "IIZ") in grids
        assert ("IXZ", "IXI", "IIZ") in grids

    def test_windmill_absorbs_ring_rows(self):
        kernel = verify_kernel(WINDMILL4_KERNEL)
        proof = generate_proof_from_kernel(kernel)
        assert proof.symbol == "13_2-5_4 2_3"
        grids = [tuple(idp.letters()) for idp in proof.ids]
        # ZZII is swallowed whole by the decomposition of ZZZZ,
        # so no ID of the form (ZZII, ZIII, IZII) appears
        assert ("ZZZZ", "ZZII", "IIZI", "IIIZ") in grids
        assert ("XXXX", "XXII", "IIXI", "IIIX") in grids
        assert all(g[0] != "ZZII" for g in grids[2:])

    def test_whorl_4_with_center(self):
        kernel = verify_kernel(WHORL4_KERNEL)
        center = verify_id(WHORL4_CENTER)
        proof = generate_proof_from_kernel(kernel, extra_ids=[center])
        assert proof.symbol == "20_2-1_4 12_3"
        assert proof.n_negative == 3

    def test_whorl_4_generic_is_larger(self):
        kernel = verify_kernel(WHORL4_KERNEL)
        proof = generate_proof_from_kernel(kernel)
        assert proof.symbol == "24_2-16_3"

    def test_star_4(self):
        kernel = verify_kernel([STAR4_ID])
        proof = generate_proof_from_kernel(kernel)
        assert proof.symbol == "12_2-1_5 4_4 1_3"


class TestWheelClosure:
    def test_wheel_3(self):
        kernel = verify_kernel(WHEEL3_KERNEL)
        proof = generate_wheel_closure(kernel)
        assert proof.symbol == "9_2-6_3"
        # regrouping introduces no observables beyond the kernel's
        assert set(proof.observables()) == {
            w for grid in WHEEL3_KERNEL for w in grid}

    def test_needs_letter_uniform_rows(self):
        kernel = verify_kernel(KITE3_KERNEL)
        with pytest.raises(KernelError):
            generate_wheel_closure(kernel)

    def test_wheel_5(self):
        rings = []
        for i in range(5):
            grid = []
            for letter in "ZXY":
                row = ["I"] * 5
                row[i] = row[(i + 1) % 5] = letter
                grid.append("".join(row))
            rings.append(grid)
        proof = generate_wheel_closure(verify_kernel(rings))
        assert proof.symbol == "15_2-3_5 5_3"


class TestIsomorphism:
    def test_square_matches_wheel_3(self):
        ms = verify_ks_proof(MS_IDS)
        wheel = generate_wheel_closure(verify_kernel(WHEEL3_KERNEL))
        assert proofs_isomorphic(ms, wheel)

    def test_square_differs_from_star(self):
        ms = verify_ks_proof(MS_IDS)
        star = generate_proof_from_kernel(verify_kernel([GHZ_ID]))
        assert not proofs_isomorphic(ms, star)

    def test_star_4_matches_alternate_star_5(self):
        star4 = generate_proof_from_kernel(verify_kernel([STAR4_ID]))
        whole = enumerate_ids(5, 5, whole_only=True).ids
        assert len(whole) == 1
        star5 = generate_proof_from_kernel(verify_kernel([whole[0]]))
        assert proofs_isomorphic(star4, star5)

    def test_equivalence_relation(self):
        pool = [
            verify_ks_proof(MS_IDS),
            generate_wheel_closure(verify_kernel(WHEEL3_KERNEL)),
            generate_proof_from_kernel(verify_kernel([GHZ_ID])),
            generate_proof_from_kernel(verify_kernel(KITE3_KERNEL)),
        ]
        for p in pool:
            assert proofs_isomorphic(p, p)
        for a, b in itertools.combinations(pool, 2):
            assert proofs_isomorphic(a, b) == proofs_isomorphic(b, a)
        # transitivity across the one isomorphic pair
        assert proofs_isomorphic(pool[0], pool[1])
        for p in pool[2:]:
            assert proofs_isomorphic(pool[0], p) == proofs_isomorphic(
                pool[1], p)


class TestAlphaBound:
    def test_mermin_square(self):
        assert alpha_bound(verify_ks_proof(MS_IDS)) == (6, 4, 4)

    def test_two_qubit_whorl(self):
        assert alpha_bound(verify_ks_proof(two_qubit_whorl())) == (10, 8, 8)

    def test_star_and_kite(self):
        star = generate_proof_from_kernel(verify_kernel([GHZ_ID]))
        assert alpha_bound(star) == (5, 3, 3)
        kite = generate_proof_from_kernel(verify_kernel(KITE3_KERNEL))
        assert alpha_bound(kite) == (6, 4, 4)

    def test_budget(self):
        proof = verify_ks_proof(MS_IDS)
        assert alpha_bound(proof, max_observables=5) == (6, 4, None)

    def test_windmill(self):
        proof = generate_proof_from_kernel(verify_kernel(WINDMILL4_KERNEL))
        assert alpha_bound(proof) == (7, 5, 5)


class TestDiagram:
    def test_square_dot(self):
        dot = export_dot(verify_ks_proof(MS_IDS))
        assert dot.count('";') == 9
        assert dot.count("shape=point") == 6
        assert dot.count("style=bold") == 4  # one ID node plus its 3 edges

    def test_star_dot(self):
        star = generate_proof_from_kernel(verify_kernel([GHZ_ID]))
        dot = export_dot(star)
        assert dot.count('";') == 10
        assert dot.count("shape=point") == 5
        assert dot.count("style=bold") == 5

    def test_deterministic(self):
        a = export_dot(verify_ks_proof(MS_IDS))
        b = export_dot(verify_ks_proof(MS_IDS))
        assert a == b


class TestEmbeddedKernels:
    def test_square_contains_its_kernel(self):
        kernels = find_embedded_kernels(verify_ks_proof(MS_IDS))
        grids = [{tuple(idp.letters()) for idp in k.ids} for k in kernels]
        assert {("ZZ", "XX", "YY"), ("ZX", "XZ", "YY")} in grids

    def test_star_contains_ghz(self):
        star = generate_proof_from_kernel(verify_kernel([GHZ_ID]))
        kernels = find_embedded_kernels(star)
        assert any(len(k.ids) == 1 and k.ids[0].sign < 0 for k in kernels)


class TestProofIO:
    def test_round_trip(self):
        proof = generate_proof_from_kernel(verify_kernel(KITE3_KERNEL))
        again = parse_proof(format_proof(proof))
        assert again.ids == proof.ids

    def test_header_required(self):
        with pytest.raises(KSProofError):
            parse_proof(format_proof(verify_ks_proof(MS_IDS)).replace(
                "PROOF", "KERNEL"))

    def test_count_checked(self):
        text = format_proof(verify_ks_proof(MS_IDS))
        with pytest.raises(KSProofError):
            parse_proof(text.replace("PROOF 6", "PROOF 7"))


class TestInvariance:
    @settings(max_examples=30, deadline=None)
    @given(st.permutations(range(3)), st.randoms(use_true_random=False))
    def test_proof_survives_relabeling(self, perm, rng):
        star = generate_proof_from_kernel(verify_kernel([GHZ_ID]))
        shuffled = list(star.ids)
        rng.shuffle(shuffled)
        moved = verify_ks_proof(
            [permute_id(idp, qubit_perm=list(perm)) for idp in shuffled])
        assert moved.symbol == star.symbol
        assert proofs_isomorphic(moved, star)

    @settings(max_examples=20, deadline=None)
    @given(st.permutations(range(4)))
    def test_generation_commutes_with_relabeling(self, perm):
        kernel = verify_kernel(WINDMILL4_KERNEL)
        moved = verify_kernel(
            [permute_id(idp, qubit_perm=list(perm)) for idp in kernel.ids])
        proof = generate_proof_from_kernel(moved)
        assert proof.symbol == "13_2-5_4 2_3"
