"""Observable-based Kochen-Specker proofs.

A proof is a set of IDs in which every N-qubit observable appears an even
number of times while an odd number of the IDs are negative.  Noncontextual
truth values then force the product of all ID products to be +1 where
quantum mechanics fixes it at -1.  Proofs are drawn as hypergraphs: one
vertex per observable, one line per ID, thick lines for negative IDs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import networkx as nx

from .ids import IdentityProduct, format_id_block, parse_id_blocks, verify_id
from .kernels import EvenNegativeCountError, Kernel, KernelError, verify_kernel
from .pauli import PauliObservable, parse_observable

__all__ = [
    "KSProof",
    "KSProofError",
    "OddMultiplicityError",
    "alpha_bound",
    "export_dot",
    "find_embedded_kernels",
    "format_proof",
    "generate_proof_from_kernel",
    "generate_wheel_closure",
    "parse_proof",
    "proof_graph",
    "proofs_isomorphic",
    "verify_ks_proof",
]


class KSProofError(ValueError):
    """A set of IDs that fails one of the proof conditions."""


class OddMultiplicityError(KSProofError):
    def __init__(self, word: str, count: int):
        super().__init__(f"observable {word} appears {count} times; "
                         f"an even count is required")
        self.word = word
        self.count = count


@dataclass(frozen=True)
class KSProof:
    """IDs with even observable multiplicities and odd negative count."""

    ids: tuple[IdentityProduct, ...]

    @property
    def n_qubits(self) -> int:
        return self.ids[0].n_qubits

    @property
    def n_negative(self) -> int:
        return sum(1 for idp in self.ids if idp.sign < 0)

    def observable_multiplicities(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for idp in self.ids:
            for word in idp.letters():
                counts[word] = counts.get(word, 0) + 1
        return counts

    def observables(self) -> list[str]:
        """Distinct observables in first-appearance order."""
        seen = []
        for idp in self.ids:
            for word in idp.letters():
                if word not in seen:
                    seen.append(word)
        return seen

    @property
    def symbol(self) -> str:
        """Multiplicity and size spectra, e.g. ``10_2-2_4 4_3``."""
        mult: dict[int, int] = {}
        for count in self.observable_multiplicities().values():
            mult[count] = mult.get(count, 0) + 1
        sizes: dict[int, int] = {}
        for idp in self.ids:
            sizes[idp.m] = sizes.get(idp.m, 0) + 1
        left = " ".join(f"{mult[x]}_{x}" for x in sorted(mult, reverse=True))
        right = " ".join(f"{sizes[y]}_{y}" for y in sorted(sizes,
                                                           reverse=True))
        return f"{left}-{right}"

    def parity_witness(self) -> tuple[int, int]:
        """(quantum, noncontextual) product over all ID products."""
        return (-1, +1)

    def __str__(self) -> str:
        return self.symbol


def verify_ks_proof(ids) -> KSProof:
    """Type a list of IDs (or letter grids) as an observable-based proof."""
    typed = tuple(idp if isinstance(idp, IdentityProduct) else verify_id(idp)
                  for idp in ids)
    if not typed:
        raise KSProofError("a proof needs at least one ID")
    n = typed[0].n_qubits
    if any(idp.n_qubits != n for idp in typed):
        raise KSProofError("IDs have mismatched qubit counts")
    counts: dict[str, int] = {}
    for idp in typed:
        for word in idp.letters():
            counts[word] = counts.get(word, 0) + 1
    for word, count in counts.items():
        if count % 2:
            raise OddMultiplicityError(word, count)
    negatives = sum(1 for idp in typed if idp.sign < 0)
    if negatives % 2 == 0:
        raise EvenNegativeCountError(negatives)
    return KSProof(typed)


# ---------------------------------------------------------------------------
# generation from kernels


def _support_qubits(obs: PauliObservable) -> list[int]:
    return [q for q in range(obs.n_qubits) if obs.letter(q) != "I"]


def _portion_word(obs: PauliObservable, region: tuple[int, ...]) -> str:
    return "".join(obs.letter(q) if q in region else "I"
                   for q in range(obs.n_qubits))


def generate_proof_from_kernel(kernel: Kernel, extra_ids=()) -> KSProof:
    """Grow a proof from a kernel by qubit decomposition.

    Every observable with odd multiplicity gains a new positive ID built
    from itself plus a decomposition of its support: multi-qubit portions
    shared with another odd observable are kept intact, the rest splits
    into single-letter observables.  extra_ids join the set before
    multiplicities are counted, for constructions that pair off some odd
    observables against a hand-picked ID instead.
    """
    seed = list(kernel.ids) + [idp if isinstance(idp, IdentityProduct)
                               else verify_id(idp) for idp in extra_ids]
    n = kernel.n_qubits
    counts: dict[str, int] = {}
    for idp in seed:
        for word in idp.letters():
            counts[word] = counts.get(word, 0) + 1
    odd_words = [word for word in counts if counts[word] % 2]
    odd_obs = {word: parse_observable(word) for word in odd_words}

    # shared portions: agreement regions of size >= 2 between odd words,
    # greedily locked in from the largest down, disjoint per observable
    candidates = []
    for u, v in itertools.combinations(sorted(odd_words), 2):
        region = tuple(q for q in range(n)
                       if odd_obs[u].letter(q) == odd_obs[v].letter(q) != "I")
        if len(region) >= 2:
            candidates.append((-len(region), u, v, region))
    candidates.sort()
    assigned: dict[str, set] = {word: set() for word in odd_words}
    portions: dict[str, list] = {word: [] for word in odd_words}
    for _, u, v, region in candidates:
        if assigned[u] & set(region) or assigned[v] & set(region):
            continue
        assigned[u].update(region)
        assigned[v].update(region)
        portions[u].append(region)
        portions[v].append(region)

    # a portion covering another odd word whole absorbs it: that word's
    # row joins the partner's ID instead of generating an ID of its own
    absorbed = set()
    for word in odd_words:
        for region in portions[word]:
            partner = _portion_word(odd_obs[word], region)
            if partner in odd_obs and partner != word:
                absorbed.add(partner)

    generated = []
    for word in odd_words:
        if word in absorbed:
            continue
        obs = odd_obs[word]
        rows = [word]
        covered = set()
        for region in portions[word]:
            rows.append(_portion_word(obs, region))
            covered.update(region)
        for q in _support_qubits(obs):
            if q not in covered:
                rows.append(_portion_word(obs, (q,)))
        generated.append(verify_id(rows))
    return verify_ks_proof(seed + generated)


def generate_wheel_closure(kernel: Kernel) -> KSProof:
    """Close a letter-uniform kernel by regrouping one row per letter.

    Works for kernels whose every ID carries exactly one all-Z, one all-X
    and one all-Y observable (the wheel rings): the closure adds three
    positive IDs collecting the same-letter rows, introducing no new
    observables.
    """
    closures = []
    for letter in "ZXY":
        rows = []
        for idp in kernel.ids:
            match = [word for word in idp.letters()
                     if set(word) <= {letter, "I"}]
            if len(match) != 1:
                raise KernelError(
                    f"kernel ID {idp} lacks a unique all-{letter} row")
            rows.append(match[0])
        closures.append(verify_id(rows))
    return verify_ks_proof(list(kernel.ids) + closures)


# ---------------------------------------------------------------------------
# isomorphism and diagrams


def proof_graph(proof: KSProof) -> nx.Graph:
    """Bipartite incidence graph: observable vertices and ID vertices."""
    g = nx.Graph()
    for word in proof.observables():
        g.add_node(("obs", word), kind="obs")
    for i, idp in enumerate(proof.ids):
        g.add_node(("id", i), kind="id", sign=idp.sign)
        for word in idp.letters():
            g.add_edge(("id", i), ("obs", word))
    return g


def proofs_isomorphic(a: KSProof, b: KSProof) -> bool:
    """Structural isomorphism of the incidence graphs, signs ignored."""
    ga, gb = proof_graph(a), proof_graph(b)
    if ga.number_of_nodes() != gb.number_of_nodes():
        return False
    matcher = nx.algorithms.isomorphism.GraphMatcher(
        ga, gb,
        node_match=lambda x, y: x["kind"] == y["kind"])
    return matcher.is_isomorphic()


def export_dot(proof: KSProof) -> str:
    """Deterministic DOT text: IDs as edge nodes, negative IDs bold."""
    lines = ["graph proof {", "  node [shape=circle];"]
    for word in sorted(proof.observables()):
        lines.append(f'  "{word}";')
    for i, idp in enumerate(proof.ids):
        style = "bold" if idp.sign < 0 else "solid"
        lines.append(f'  id{i} [shape=point, style={style}, '
                     f'label="", xlabel="{idp.symbol}"];')
        for word in sorted(idp.letters()):
            lines.append(f'  id{i} -- "{word}" [style={style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# kernels inside proofs, contextuality bound


def find_embedded_kernels(proof: KSProof) -> list[Kernel]:
    """Every ID subset of the proof that satisfies the kernel conditions."""
    out = []
    ids = proof.ids
    for size in range(1, len(ids) + 1):
        for combo in itertools.combinations(range(len(ids)), size):
            try:
                out.append(verify_kernel([ids[i] for i in combo]))
            except KernelError:
                continue
    return out


def alpha_bound(proof: KSProof, max_observables: int = 24):
    """(quantum value, counting bound, brute-force noncontextual max).

    The quantum expectation of the signed sum of ID products is the number
    of IDs; the noncontextual maximum is at most that minus 2.  The third
    element verifies the bound by exhausting all truth assignments, or is
    None when the observable count exceeds max_observables.
    """
    words = proof.observables()
    quantum = len(proof.ids)
    classical = quantum - 2
    if len(words) > max_observables:
        return quantum, classical, None
    index = {word: k for k, word in enumerate(words)}
    masks = [(sum(1 << index[w] for w in idp.letters()), idp.sign)
             for idp in proof.ids]
    best = -quantum
    for assignment in range(1 << len(words)):
        total = 0
        for mask, sign in masks:
            parity = (assignment & mask).bit_count() & 1
            total += sign * (1 - 2 * parity)
        if total > best:
            best = total
            if best == classical:
                break
    return quantum, classical, best


# ---------------------------------------------------------------------------
# text format


def format_proof(proof: KSProof) -> str:
    head = f"PROOF {len(proof.ids)} {proof.n_qubits}"
    return "\n".join([head] + [format_id_block(idp)
                               for idp in proof.ids]) + "\n"


def parse_proof(text: str) -> KSProof:
    lines = text.strip().splitlines()
    if not lines or not lines[0].startswith("PROOF"):
        raise KSProofError("missing PROOF header")
    fields = lines[0].split()
    if len(fields) != 3:
        raise KSProofError("PROOF header needs an ID count and qubit count")
    count = int(fields[1])
    ids = parse_id_blocks("\n".join(lines[1:]))
    if len(ids) != count:
        raise KSProofError(f"header promises {count} IDs, found {len(ids)}")
    return verify_ks_proof(ids)
