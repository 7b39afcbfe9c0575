"""Shared fixtures: small named structures used across test modules."""

import itertools

from pauliks.pauli import commutes, parse_observable, product


def two_qubit_whorl():
    """Complement of a line spread over the 15 two-qubit observables.

    The 15 maximal commuting triples minus a 5-line partition leave 10
    lines covering every observable exactly twice.
    """
    words = ["".join(p) for p in itertools.product("IZXY", repeat=2)][1:]
    obs = {w: parse_observable(w) for w in words}
    lines = []
    for trio in itertools.combinations(words, 3):
        rows = [obs[w] for w in trio]
        if not all(commutes(a, b)
                   for a, b in itertools.combinations(rows, 2)):
            continue
        word, phase = product(rows)
        if word.is_identity() and phase % 2 == 0:
            lines.append(trio)
    assert len(lines) == 15
    spread = {frozenset(s) for s in [("IZ", "ZI", "ZZ"), ("IX", "XI", "XX"),
                                     ("IY", "YI", "YY"), ("ZX", "XY", "YZ"),
                                     ("XZ", "YX", "ZY")]}
    return [list(l) for l in lines if frozenset(l) not in spread]
