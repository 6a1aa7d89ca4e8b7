"""Subshift-of-finite-type combinatorics.

Symbols are 0-based indices; ``labels`` carry the user-facing names and
default to "1", "2", ... so that examples from the classical literature
(alphabets {1,...,N}) read naturally.  A Word is a tuple of symbol indices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import (
    CapacityError,
    DEFAULT_ENUMERATION_BUDGET,
    InputError,
    JunctionForbiddenError,
)

Word = tuple  # tuple of 0-based symbol indices

SUBHORSESHOE = "subhorseshoe"
TRIVIAL = "trivial_periodic"
TRANSIENT = "transient_state"


@dataclass(frozen=True)
class SftSpec:
    """Alphabet plus 0/1 transition matrix b[i][j] (edge i -> j allowed)."""

    r: int
    b: tuple  # tuple of tuples of 0/1
    labels: tuple = ()
    degenerate: bool = False  # allow dead rows/columns

    def __post_init__(self):
        if self.r < 1:
            raise InputError("alphabet_size must be >= 1")
        if len(self.b) != self.r or any(len(row) != self.r for row in self.b):
            raise InputError("transition matrix must be r x r")
        if any(x not in (0, 1) for row in self.b for x in row):
            raise InputError("transition entries must be 0 or 1")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i + 1) for i in range(self.r)))
        if len(self.labels) != self.r:
            raise InputError("labels must match alphabet size")
        if not self.degenerate:
            for i in range(self.r):
                if not any(self.b[i][j] for j in range(self.r)):
                    raise InputError(f"symbol {self.labels[i]} has no outgoing transition")
                if not any(self.b[j][i] for j in range(self.r)):
                    raise InputError(f"symbol {self.labels[i]} has no incoming transition")

    @staticmethod
    def full_shift(r, labels=()):
        return SftSpec(r, tuple(tuple(1 for _ in range(r)) for _ in range(r)), labels)

    @staticmethod
    def from_rows(rows, labels=(), degenerate=False):
        return SftSpec(len(rows), tuple(tuple(row) for row in rows), labels, degenerate)

    def allows(self, i, j):
        return self.b[i][j] == 1

    def successors(self, i):
        return tuple(j for j in range(self.r) if self.b[i][j])

    def word(self, text, sep=None):
        """Parse a word from labels, e.g. word("12") or word("1,2", sep=",")."""
        parts = list(text.split(sep)) if sep else list(text)
        try:
            return tuple(self.labels.index(p) for p in parts)
        except ValueError as e:
            raise InputError(f"unknown symbol in {text!r}") from e

    def format_word(self, w, sep=""):
        return sep.join(self.labels[i] for i in w)

    def is_admissible(self, w):
        return all(self.b[w[i]][w[i + 1]] == 1 for i in range(len(w) - 1))

    def count_words(self, n):
        """Number of admissible words of length n = entry sum of B^(n-1)."""
        if n < 1:
            raise InputError("n must be >= 1")
        vec = [1] * self.r
        for _ in range(n - 1):
            vec = [sum(self.b[i][j] * vec[j] for j in range(self.r)) for i in range(self.r)]
        return sum(vec)

    def to_json(self):
        return json.dumps(
            {"r": self.r, "B": [list(row) for row in self.b], "labels": list(self.labels)},
            sort_keys=True,
        )

    @staticmethod
    def from_json_obj(obj):
        labels = tuple(obj.get("labels") or ())
        return SftSpec(int(obj["r"]), tuple(tuple(int(x) for x in row) for row in obj["B"]), labels)


def admissible_words(spec: SftSpec, n, budget=DEFAULT_ENUMERATION_BUDGET):
    """All admissible words of length n, in lexicographic symbol-index order."""
    if n < 1:
        raise InputError("n must be >= 1")
    count = spec.count_words(n)
    if count > budget:
        raise CapacityError(count, budget, f"admissible words of length {n}")
    out = []
    word = [0] * n

    def extend(k):
        if k == n:
            out.append(tuple(word))
            return
        for j in range(spec.r):
            if k == 0 or spec.b[word[k - 1]][j]:
                word[k] = j
                extend(k + 1)

    extend(0)
    return out


def concat(w1, w2, spec: SftSpec):
    """Concatenate two admissible words; the junction pair must be allowed."""
    if not w1 or not w2:
        return tuple(w1) + tuple(w2)
    if not spec.is_admissible(w1) or not spec.is_admissible(w2):
        raise InputError("words must be admissible")
    if not spec.b[w1[-1]][w2[0]]:
        raise JunctionForbiddenError(spec.labels[w1[-1]], spec.labels[w2[0]])
    return tuple(w1) + tuple(w2)


def strongly_connected_components(n, succ):
    """Tarjan SCC, iterative.  succ(i) yields successors.  Returns list of
    symbol lists in reverse topological order (sinks first)."""
    index = [None] * n
    low = [0] * n
    onstack = [False] * n
    stack = []
    comps = []
    counter = [0]
    for root in range(n):
        if index[root] is not None:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        onstack[root] = True
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if index[w] is None:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    onstack[w] = True
                    work.append((w, iter(succ(w))))
                    advanced = True
                    break
                elif onstack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    onstack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
    return comps


@dataclass(frozen=True)
class Decomposition:
    """SCC decomposition of an SFT with classification and reachability.

    components: tuple of (frozenset of symbols, kind); kinds are
    'subhorseshoe' (irreducible, more than one cycle), 'trivial_periodic'
    (a single cycle) and 'transient_state' (symbol not related to itself).
    reachability holds all ordered pairs (i, j) with component i reaching
    component j through allowed transitions (transitively, i != j).
    ordering is a symbol permutation putting the matrix in block
    upper-triangular form (sources first).
    """

    spec: SftSpec
    components: tuple
    reachability: frozenset
    ordering: tuple

    def kind_of(self, ci):
        return self.components[ci][1]

    def symbols_of(self, ci):
        return self.components[ci][0]

    def component_index_of_symbol(self, s):
        for ci, (syms, _) in enumerate(self.components):
            if s in syms:
                return ci
        raise InputError(f"symbol {s} not in any component")

    def labels_of(self, ci):
        return frozenset(self.spec.labels[s] for s in self.symbols_of(ci))


def irreducible_components(spec: SftSpec) -> Decomposition:
    """SCC decomposition, classification, reachability order, triangular ordering."""
    comps = strongly_connected_components(spec.r, spec.successors)
    # classify
    classified = []
    for comp in comps:
        cs = frozenset(comp)
        internal = [(i, j) for i in comp for j in comp if spec.b[i][j]]
        if not internal:
            kind = TRANSIENT  # singleton without self-loop
        else:
            outdeg = {i: sum(1 for (a, _) in internal if a == i) for i in comp}
            indeg = {j: sum(1 for (_, b2) in internal if b2 == j) for j in comp}
            single_cycle = all(outdeg.get(i, 0) == 1 for i in comp) and all(
                indeg.get(i, 0) == 1 for i in comp
            )
            kind = TRIVIAL if single_cycle else SUBHORSESHOE
        classified.append((cs, kind))
    # Tarjan emits sinks first; reverse for topological (sources first)
    order = list(range(len(classified)))[::-1]
    comp_of = {}
    for ci, (cs, _) in enumerate(classified):
        for s in cs:
            comp_of[s] = ci
    # direct edges between components, then transitive closure
    direct = set()
    for i in range(spec.r):
        for j in spec.successors(i):
            if comp_of[i] != comp_of[j]:
                direct.add((comp_of[i], comp_of[j]))
    reach = set(direct)
    changed = True
    while changed:
        changed = False
        for (a, b2) in list(reach):
            for (c, d) in list(reach):
                if b2 == c and (a, d) not in reach and a != d:
                    reach.add((a, d))
                    changed = True
    components = tuple(classified[ci] for ci in order)
    remap = {old: new for new, old in enumerate(order)}
    reachability = frozenset((remap[a], remap[b2]) for (a, b2) in reach)
    ordering = tuple(s for ci in order for s in sorted(classified[ci][0]))
    return Decomposition(spec, components, reachability, ordering)


def transient_pairs(dec: Decomposition):
    """Ordered pairs (i, j) of distinct non-transient components with i reaching j.

    These index the transient sets: orbits with alpha-limit in component i
    and omega-limit in component j.
    """
    out = []
    for i, (_, ki) in enumerate(dec.components):
        if ki == TRANSIENT:
            continue
        for j, (_, kj) in enumerate(dec.components):
            if i == j or kj == TRANSIENT:
                continue
            if (i, j) in dec.reachability:
                out.append((i, j))
    return out


@dataclass(frozen=True)
class LiftedSft(SftSpec):
    """SFT whose symbols are fixed-length words of a base SFT.

    Bi-infinite sequences of the lift correspond bijectively to base
    sequences; ``words[k]`` is the base word behind lifted symbol k, read as
    positions -past..+future relative to the current coordinate.
    """

    base: SftSpec = None
    words: tuple = ()
    past: int = 0
    future: int = 0

    def decode_symbol(self, k):
        return self.words[k]

    def decode_sequence(self, seq):
        """Base word behind a lifted word (overlap-consistent)."""
        if not seq:
            return ()
        out = list(self.words[seq[0]])
        for k in seq[1:]:
            w = self.words[k]
            if tuple(out[-(len(w) - 1):]) != w[:-1] and len(w) > 1:
                raise InputError("lifted sequence is not overlap-consistent")
            out.append(w[-1])
        return tuple(out)


def window_lift(spec: SftSpec, past, future, budget=DEFAULT_ENUMERATION_BUDGET) -> LiftedSft:
    """Lift to the SFT on admissible words of length past+future+1.

    Transitions encode overlap-by-all-but-one, so the lift is conjugate to
    the base shift (a de Bruijn-style recoding).
    """
    if past < 0 or future < 0:
        raise InputError("past and future must be >= 0")
    L = past + future + 1
    if L == 1:
        return LiftedSft(
            spec.r, spec.b, spec.labels, spec.degenerate,
            base=spec, words=tuple((i,) for i in range(spec.r)), past=0, future=0,
        )
    words = admissible_words(spec, L, budget=budget)
    idx = {w: i for i, w in enumerate(words)}
    n = len(words)
    rows = [[0] * n for _ in range(n)]
    for w, i in idx.items():
        suffix = w[1:]
        for j in range(spec.r):
            if spec.b[w[-1]][j]:
                rows[i][idx[suffix + (j,)]] = 1
    labels = tuple(spec.format_word(w) for w in words)
    return LiftedSft(
        n, tuple(tuple(r_) for r_ in rows), labels, spec.degenerate,
        base=spec, words=tuple(words), past=past, future=future,
    )


def prune_symbols(spec: SftSpec, keep):
    """Restrict to a symbol subset, then iteratively drop symbols with no
    outgoing or no incoming edge (not on any bi-infinite path).

    Returns (subspec or None, kept symbol indices in the original spec).
    The result is flagged degenerate=False only via its own validation; an
    empty result returns (None, ()).
    """
    alive = set(keep)
    changed = True
    while changed and alive:
        changed = False
        for s in list(alive):
            if not any(spec.b[s][t] for t in alive) or not any(spec.b[t][s] for t in alive):
                alive.discard(s)
                changed = True
    if not alive:
        return None, ()
    kept = tuple(sorted(alive))
    rows = tuple(tuple(spec.b[i][j] for j in kept) for i in kept)
    labels = tuple(spec.labels[i] for i in kept)
    sub = SftSpec(len(kept), rows, labels)
    return sub, kept


def restrict(spec: SftSpec, symbols):
    """Plain restriction to a symbol subset without liveness pruning."""
    kept = tuple(sorted(symbols))
    rows = tuple(tuple(spec.b[i][j] for j in kept) for i in kept)
    labels = tuple(spec.labels[i] for i in kept)
    return SftSpec(len(kept), rows, labels, degenerate=True), kept


def periodic_necklaces(spec: SftSpec, max_period, budget=DEFAULT_ENUMERATION_BUDGET):
    """Primitive cyclically-admissible words up to rotation, by length.

    A word w qualifies when all consecutive pairs including the wraparound
    are allowed and w is not a power of a shorter word.  The lexicographically
    least rotation represents the orbit.
    """
    seen = set()
    out = []
    total = 0
    for p in range(1, max_period + 1):
        total += spec.count_words(p)
        if total > budget:
            raise CapacityError(total, budget, "periodic orbit enumeration")
        for w in admissible_words(spec, p, budget=budget):
            if not spec.b[w[-1]][w[0]]:
                continue
            rots = [w[k:] + w[:k] for k in range(p)]
            rep = min(rots)
            if rep in seen:
                continue
            # primitive iff no proper rotation equals the word itself
            if any(rots[k] == w for k in range(1, p)):
                seen.add(rep)
                continue
            seen.add(rep)
            out.append(rep)
    return out
