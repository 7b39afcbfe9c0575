"""Core algebra: encoding, commutation, products, phases."""

import pytest
from hypothesis import given, strategies as st

from pauliks.pauli import (
    PauliObservable,
    commutes,
    format_observable,
    identity,
    letter_product_phase,
    multiply,
    parse_observable,
    product,
    single_letter,
)


def obs(text):
    return parse_observable(text)


def test_parse_format_roundtrip():
    for s in ["ZXYI", "IIII", "Z", "YYXZ", "IZXY"]:
        assert format_observable(parse_observable(s)) == s


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_observable("ZXQ")
    with pytest.raises(ValueError):
        parse_observable("")


def test_single_qubit_products():
    # Z*X = iY and the reverse orientation picks up the opposite phase
    word, e = multiply(obs("Z"), obs("X"))
    assert format_observable(word) == "Y" and e == 1
    word, e = multiply(obs("X"), obs("Z"))
    assert format_observable(word) == "Y" and e == 3
    word, e = multiply(obs("Y"), obs("Y"))
    assert format_observable(word) == "I" and e == 0


def test_two_qubit_id_is_negative():
    word, e = product([obs("ZZ"), obs("XX"), obs("YY")])
    assert word.is_identity() and e == 2


def test_ghz_product_is_minus_identity():
    rows = [obs("ZZZ"), obs("ZXX"), obs("XZX"), obs("XXZ")]
    word, e = product(rows)
    assert word.is_identity() and e == 2


def test_letter_product_phases():
    assert letter_product_phase("ZXY") == ("I", 1)
    assert letter_product_phase("ZYX") == ("I", 3)
    assert letter_product_phase("XYZ") == ("I", 1)
    assert letter_product_phase("ZZXX") == ("I", 0)
    assert letter_product_phase(("Z", "X", "Y", "I")) == ("I", 1)


def test_commutation_table():
    assert commutes(obs("ZZ"), obs("XX"))
    assert not commutes(obs("ZI"), obs("XI"))
    assert commutes(obs("ZI"), obs("IZ"))
    assert not commutes(obs("ZZZ"), obs("XXX"))  # odd overlap


def test_support_weight_restrict():
    a = obs("ZIXY")
    assert a.support == 0b1101  # qubits 0, 2, 3
    assert a.weight == 3
    assert format_observable(a.restrict((0, 3))) == "ZY"
    assert identity(4).is_identity()
    assert format_observable(single_letter(3, 1, "X")) == "IXI"


letters = st.sampled_from("IZXY")
words = st.integers(min_value=1, max_value=6).flatmap(
    lambda n: st.lists(letters, min_size=n, max_size=n).map("".join))


@given(words, words)
def test_commutation_is_symmetric(a, b):
    if len(a) != len(b):
        return
    assert commutes(obs(a), obs(b)) == commutes(obs(b), obs(a))


@given(words)
def test_self_product_is_positive_identity(a):
    word, e = multiply(obs(a), obs(a))
    assert word.is_identity() and e == 0


@given(words, words, words)
def test_product_is_associative(a, b, c):
    if not (len(a) == len(b) == len(c)):
        return
    ab, e1 = multiply(obs(a), obs(b))
    left, e2 = multiply(ab, obs(c))
    bc, e3 = multiply(obs(b), obs(c))
    right, e4 = multiply(obs(a), bc)
    assert left == right
    assert (e1 + e2) % 4 == (e3 + e4) % 4


@given(words, words)
def test_commuting_pairs_multiply_order_free(a, b):
    if len(a) != len(b) or not commutes(obs(a), obs(b)):
        return
    w1, e1 = multiply(obs(a), obs(b))
    w2, e2 = multiply(obs(b), obs(a))
    assert w1 == w2 and e1 == e2


@given(words, words)
def test_anticommuting_pairs_differ_by_sign(a, b):
    if len(a) != len(b) or commutes(obs(a), obs(b)):
        return
    w1, e1 = multiply(obs(a), obs(b))
    w2, e2 = multiply(obs(b), obs(a))
    assert w1 == w2 and (e1 - e2) % 4 == 2
