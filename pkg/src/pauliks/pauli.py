"""Exact algebra of N-qubit Pauli observables.

An observable is a tensor word over the single-qubit letters Z, X, Y, I,
stored as a pair of bit masks (z, x) with one bit per qubit:

    (z_i, x_i) = (0,0) -> I,  (1,0) -> Z,  (0,1) -> X,  (1,1) -> Y

Qubit 0 is the leftmost character of the text form.  Phases are carried
separately as an exponent of i, so products are exact: the single-qubit
convention is the standard matrix one, Z*X = iY (cyclically Z->X->Y->Z
gives +i, the reverse order gives -i).
"""

from __future__ import annotations

from dataclasses import dataclass

LETTERS = "IZXY"  # indexed by z + 2x
LETTER_ORDER = {"Z": 0, "X": 1, "Y": 2, "I": 3}  # display/sort order

# letter code: z + 2x  (I=0, Z=1, X=2, Y=3)
_CODE_OF = {"I": 0, "Z": 1, "X": 2, "Y": 3}

# phase exponent of (row letter) * (column letter) as a power of i,
# indexed [a][b] by letter codes; products follow a XOR b for the word part
_PHASE_TABLE = [[0] * 4 for _ in range(4)]
for _a, _b, _e in (("Z", "X", 1), ("X", "Y", 1), ("Y", "Z", 1),
                   ("X", "Z", 3), ("Y", "X", 3), ("Z", "Y", 3)):
    _PHASE_TABLE[_CODE_OF[_a]][_CODE_OF[_b]] = _e


class DimensionError(ValueError):
    """Raised when observables on different qubit counts are combined."""


@dataclass(frozen=True, order=True)
class PauliObservable:
    """An N-qubit Pauli word as a symplectic (z, x) bit pair.

    Immutable and hashable; the letter view is derived on demand.
    """

    n_qubits: int
    z: int
    x: int

    def __post_init__(self):
        if self.n_qubits <= 0:
            raise ValueError("n_qubits must be positive")
        mask = (1 << self.n_qubits) - 1
        if self.z & ~mask or self.x & ~mask:
            raise ValueError("bit mask exceeds qubit count")

    def letter(self, i: int) -> str:
        """Single-qubit letter at qubit i."""
        return LETTERS[((self.z >> i) & 1) + 2 * ((self.x >> i) & 1)]

    @property
    def support(self) -> int:
        """Bit mask of non-identity qubits."""
        return self.z | self.x

    @property
    def weight(self) -> int:
        return self.support.bit_count()

    def is_identity(self) -> bool:
        return self.z == 0 and self.x == 0

    def restrict(self, qubits: tuple[int, ...]) -> "PauliObservable":
        """Project onto the given qubits, in the given order."""
        z = x = 0
        for pos, q in enumerate(qubits):
            z |= ((self.z >> q) & 1) << pos
            x |= ((self.x >> q) & 1) << pos
        return PauliObservable(len(qubits), z, x)

    def __str__(self) -> str:
        return format_observable(self)

    def __repr__(self) -> str:
        return f"PauliObservable({format_observable(self)!r})"


def parse_observable(text: str) -> PauliObservable:
    """Parse a letter string like "ZIX" into an observable.

    Raises ValueError on an empty string or an illegal character.
    """
    if not text:
        raise ValueError("empty observable string")
    z = x = 0
    for i, ch in enumerate(text):
        code = _CODE_OF.get(ch)
        if code is None:
            raise ValueError(f"illegal Pauli letter {ch!r} at position {i}")
        z |= (code & 1) << i
        x |= (code >> 1) << i
    return PauliObservable(len(text), z, x)


def format_observable(obs: PauliObservable) -> str:
    """Render as a letter string, qubit 0 leftmost."""
    return "".join(obs.letter(i) for i in range(obs.n_qubits))


def _check_same_n(a: PauliObservable, b: PauliObservable):
    if a.n_qubits != b.n_qubits:
        raise DimensionError(
            f"observables on {a.n_qubits} and {b.n_qubits} qubits are not composable")


def commutes(a: PauliObservable, b: PauliObservable) -> bool:
    """True iff the symplectic overlap (qubit-wise anticommutation count) is even."""
    _check_same_n(a, b)
    return ((a.z & b.x).bit_count() + (a.x & b.z).bit_count()) % 2 == 0


def multiply(a: PauliObservable, b: PauliObservable) -> tuple[PauliObservable, int]:
    """Matrix product a*b as (word, phase exponent of i mod 4).

    Writing each word as i^{|z&x|} X^x Z^z, the product picks up (-1)^{|z_a & x_b|}
    from commuting Z^{z_a} past X^{x_b}; re-normalizing the result to the same
    form gives the exponent below using popcounts only.
    """
    _check_same_n(a, b)
    z = a.z ^ b.z
    x = a.x ^ b.x
    e = ((a.z & a.x).bit_count() + (b.z & b.x).bit_count()
         + 2 * (a.z & b.x).bit_count() - (z & x).bit_count()) % 4
    return PauliObservable(a.n_qubits, z, x), e


def product(observables) -> tuple[PauliObservable, int]:
    """Ordered product of a nonempty list, with exact accumulated phase.

    Returns (word, exponent) with the overall operator equal to i^exponent * word.
    For a mutually commuting list the exponent is 0 or 2 (a real sign) and does
    not depend on the list order.
    """
    observables = list(observables)
    if not observables:
        raise ValueError("product of empty observable list")
    acc = observables[0]
    e = 0
    for obs in observables[1:]:
        acc, de = multiply(acc, obs)
        e = (e + de) % 4
    return acc, e


def identity(n_qubits: int) -> PauliObservable:
    return PauliObservable(n_qubits, 0, 0)


def single_letter(n_qubits: int, qubit: int, letter: str) -> PauliObservable:
    """The word with one non-identity letter at the given qubit."""
    code = _CODE_OF[letter]
    return PauliObservable(n_qubits, (code & 1) << qubit, (code >> 1) << qubit)


def letter_product_phase(letters) -> tuple[str, int]:
    """Product of single-qubit letters in order: (letter, exponent of i mod 4)."""
    code = 0
    e = 0
    for ch in letters:
        c = _CODE_OF[ch]
        e = (e + _PHASE_TABLE[code][c]) % 4
        code ^= c
    return LETTERS[code], e
