"""Regular Cantor sets on the line: Markov partitions, certified dimension
bounds, interior-property refinement, interval omission, branch perturbation
and renormalization, thickness, and cylinder sumsets.

A CantorSpec holds the partition intervals (rational endpoints), the
transition combinatorics, per-transition expanding-derivative bounds
(min > 1), and the declared image hull of each branch.  Affine and
Gauss-Cantor specs additionally carry exact cylinder geometry; generic
specs work from the derivative bounds alone.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .errors import (
    CapacityError,
    DEFAULT_ENUMERATION_BUDGET,
    DEFAULT_RENORM_CAP,
    InputError,
    NotMarkovError,
    PreconditionError,
    RenormCapError,
)
from .geometry import AffineGeometry, GaussGeometry, float_down, float_up
from .sft import SftSpec, irreducible_components, TRANSIENT
from .transfer import TransferSystem, from_edges


@dataclass(frozen=True)
class DimBounds:
    """Certified two-sided Hausdorff-dimension bounds from depth-n data."""

    lower: float
    upper: float
    depth: int
    complete: bool = True

    def __post_init__(self):
        if self.lower > self.upper + 1e-12:
            raise InputError(f"invalid bounds: {self.lower} > {self.upper}")

    @property
    def width(self):
        return self.upper - self.lower

    def intersect(self, other):
        return DimBounds(
            max(self.lower, other.lower),
            min(self.upper, other.upper),
            max(self.depth, other.depth),
            self.complete and other.complete,
        )

    def to_json_obj(self):
        return {"lower": self.lower, "upper": self.upper, "depth": self.depth,
                "complete": self.complete}


def _frac(x):
    if isinstance(x, str) and "/" in x:
        n, d = x.split("/")
        return Fraction(int(n), int(d))
    return Fraction(x)


@dataclass
class CantorSpec:
    """Markov partition + combinatorics + branch derivative bounds.

    intervals: ordered disjoint closed intervals (Fraction endpoints);
    sft: transition structure over the same alphabet;
    branch_bounds: {(i, j): (min_deriv, max_deriv)} per allowed transition,
    with 1 < min <= max;
    row_hulls: declared convex hull of each branch image;
    affine: True when every branch is affine onto its hull (min = max);
    geometry: optional exact cylinder provider.

    Treated as immutable; operations return new specs.
    """

    intervals: tuple
    sft: SftSpec
    branch_bounds: dict
    row_hulls: tuple
    affine: bool = False
    geometry: object = None

    def __post_init__(self):
        r = self.sft.r
        if len(self.intervals) != r or len(self.row_hulls) != r:
            raise InputError("intervals and hulls must match the alphabet")
        for k in range(r - 1):
            if not self.intervals[k][1] < self.intervals[k + 1][0]:
                raise InputError("partition intervals must be disjoint and ordered")
        for (lo, hi) in self.intervals:
            if lo > hi:
                raise InputError("interval endpoints out of order")
        for i in range(r):
            targets = self.targets(i)
            if not targets:
                raise InputError(f"branch {self.sft.labels[i]} has no targets")
            hl, hh = self.row_hulls[i]
            for j in targets:
                if not (hl <= self.intervals[j][0] and self.intervals[j][1] <= hh):
                    raise NotMarkovError(
                        f"target {self.sft.labels[j]} escapes the hull of branch {self.sft.labels[i]}"
                    )
            for j in range(r):
                inside = hl <= self.intervals[j][0] and self.intervals[j][1] <= hh
                if inside and not self.sft.b[i][j]:
                    raise NotMarkovError(
                        f"interval {self.sft.labels[j]} lies in the image hull of "
                        f"{self.sft.labels[i]} but the transition is forbidden"
                    )
        for (i, j), (lo, hi) in self.branch_bounds.items():
            if not (1 < lo <= hi):
                raise InputError(f"branch bounds for ({i},{j}) must satisfy 1 < min <= max")
            if not self.sft.b[i][j]:
                raise InputError("bounds given for a forbidden transition")
        for i in range(r):
            for j in self.targets(i):
                if (i, j) not in self.branch_bounds:
                    raise InputError(f"missing branch bounds for transition ({i},{j})")

    # -- basic accessors -------------------------------------------------

    @property
    def r(self):
        return self.sft.r

    def targets(self, i):
        return self.sft.successors(i)

    def degree(self, i):
        return len(self.targets(i))

    def bound(self, i, j):
        return self.branch_bounds[(i, j)]

    def contraction(self, i, j):
        lo, hi = self.branch_bounds[(i, j)]
        return 1 / hi, 1 / lo

    def min_point(self):
        """Leftmost point of the set; exact surd for Gauss-Cantor specs."""
        if hasattr(self.geometry, "digits"):
            from .gauss import digit_tail_range

            ds = self.geometry.digits
            _, tail_max = digit_tail_range(ds)
            return (tail_max + ds[-1]).reciprocal()
        return self.intervals[0][0]

    def max_point(self):
        if hasattr(self.geometry, "digits"):
            from .gauss import digit_tail_range

            ds = self.geometry.digits
            tail_min, _ = digit_tail_range(ds)
            return (tail_min + ds[0]).reciprocal()
        return self.intervals[-1][1]

    def cylinders(self, depth, budget=DEFAULT_ENUMERATION_BUDGET):
        if self.geometry is None:
            raise PreconditionError("spec carries no cylinder geometry")
        return self.geometry.enumerate(depth, budget, self.sft)

    # -- serialization ---------------------------------------------------

    def to_json(self):
        edges = []
        for i in range(self.r):
            for j in self.targets(i):
                lo, hi = self.branch_bounds[(i, j)]
                edges.append([str(lo), str(hi)])
        return json.dumps(
            {
                "intervals": [[str(lo), str(hi)] for (lo, hi) in self.intervals],
                "B": [list(row) for row in self.sft.b],
                "branch_bounds": edges,
                "affine": self.affine,
            },
            sort_keys=True,
        )

    @staticmethod
    def from_json_obj(obj):
        intervals = tuple((_frac(lo), _frac(hi)) for lo, hi in obj["intervals"])
        rows = tuple(tuple(int(x) for x in row) for row in obj["B"])
        if obj.get("affine", False):
            return affine_cantor(intervals, rows)
        sft = SftSpec(len(rows), rows)
        it = iter(obj["branch_bounds"])
        bounds = {}
        for i in range(len(rows)):
            for j in range(len(rows)):
                if rows[i][j]:
                    lo, hi = next(it)
                    bounds[(i, j)] = (_frac(lo), _frac(hi))
        hulls = tuple(
            (min(intervals[j][0] for j in range(len(rows)) if rows[i][j]),
             max(intervals[j][1] for j in range(len(rows)) if rows[i][j]))
            for i in range(len(rows))
        )
        return CantorSpec(intervals, sft, bounds, hulls)


def affine_cantor(intervals, rows, labels=()):
    """Affine spec: each branch maps its interval onto the hull of its
    targets, increasing; derivative = |hull| / |interval| exactly."""
    intervals = tuple((Fraction(lo), Fraction(hi)) for lo, hi in intervals)
    rows = tuple(tuple(int(x) for x in row) for row in rows)
    r = len(intervals)
    sft = SftSpec(r, rows, labels)
    hulls = []
    bounds = {}
    for i in range(r):
        ts = [j for j in range(r) if rows[i][j]]
        if not ts:
            raise InputError("affine branch with no targets")
        hl = intervals[ts[0]][0]
        hh = intervals[ts[-1]][1]
        hulls.append((hl, hh))
        slope = Fraction(hh - hl, intervals[i][1] - intervals[i][0])
        if slope <= 1:
            raise InputError(
                f"branch {i} is not expanding (slope {slope}); shrink its interval"
            )
        for j in ts:
            bounds[(i, j)] = (slope, slope)
    geom = AffineGeometry(intervals, tuple(hulls), rows)
    return CantorSpec(intervals, sft, bounds, tuple(hulls), affine=True, geometry=geom)


def middle_thirds():
    return affine_cantor(
        [(Fraction(0), Fraction(1, 3)), (Fraction(2, 3), Fraction(1))],
        [[1, 1], [1, 1]],
    )


def affine_full_shift_from_rates(rates):
    """Full-shift affine spec in [0, 1] with prescribed contraction rates.

    Intervals are laid out left to right with equal gaps; requires
    sum(rates) < 1.
    """
    rates = [Fraction(x).limit_denominator(10**9) if not isinstance(x, Fraction) else x
             for x in rates]
    total = sum(rates)
    if total >= 1:
        raise InputError("rates must sum to less than 1 for a line layout")
    gap = (1 - total) / (len(rates) - 1) if len(rates) > 1 else Fraction(0)
    intervals = []
    x = Fraction(0)
    for r_ in rates:
        intervals.append((x, x + r_))
        x += r_ + gap
    rows = [[1] * len(rates) for _ in rates]
    return affine_cantor(intervals, rows)


# -- dimension ----------------------------------------------------------


def moran_dimension(rates, tol=1e-13):
    """The unique d >= 0 with sum(rates_j ** d) == 1, by bisection.

    rates are contraction ratios in (0, 1); a single rate gives d = 0.
    """
    rates = [Fraction(x) if isinstance(x, (int, str)) else x for x in rates]
    if not rates:
        raise InputError("empty rate list")
    vals = [float(x) for x in rates]
    if any(not (0 < v < 1) for v in vals):
        raise InputError("rates must lie in (0, 1)")

    def f(d):
        return sum(v**d for v in vals) - 1.0

    if f(0.0) <= 0:
        return 0.0
    lo, hi = 0.0, 1.0
    while f(hi) > 0:
        hi *= 2
        if hi > 64:
            raise InputError("Moran root out of range")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def _edge_weights(spec: CantorSpec, d, word):
    """Contraction enclosure for prepending symbol d to a word-cylinder."""
    if spec.geometry is not None:
        lo, hi = spec.geometry.step_contraction(d, word)
    else:
        lo, hi = spec.contraction(d, word[0])
    return float_down(lo), float_up(hi)


def _component_transfer(spec: CantorSpec, symbols, depth, budget):
    """TransferSystem over depth-n admissible words within a symbol set."""
    syms = sorted(symbols)
    count = 0
    words = []
    stack = [(s,) for s in reversed(syms)]
    while stack:
        w = stack.pop()
        if len(w) == depth:
            words.append(w)
            count += 1
            if count > budget:
                raise CapacityError(count, budget, f"depth-{depth} words")
            continue
        for j in reversed(syms):
            if spec.sft.b[w[-1]][j]:
                stack.append(w + (j,))
    idx = {w: i for i, w in enumerate(words)}
    edges = []
    for w, i in idx.items():
        for d in syms:
            if not spec.sft.b[d][w[0]]:
                continue
            tgt = idx.get((d,) + w[:-1])
            if tgt is None:
                continue
            wlo, whi = _edge_weights(spec, d, w)
            edges.append((i, tgt, wlo, whi))
    return from_edges(len(words), edges), len(words)


def beta_n_bounds(spec: CantorSpec, n, budget=DEFAULT_ENUMERATION_BUDGET, tol=1e-13):
    """Certified dimension bounds from depth-n cylinder data.

    Per irreducible component, the transfer operator with the branch
    contraction frozen at its per-cylinder infimum (resp. supremum) bounds
    the true operator on the positive cone, so its spectral root bounds the
    dimension from above (resp. below); the set dimension is the maximum
    over components.  Affine specs have zero distortion, so both roots agree
    to bisection tolerance at every depth.
    """
    if n < 1:
        raise InputError("depth must be >= 1")
    dec = irreducible_components(spec.sft)
    lower, upper = 0.0, 0.0
    for ci, (syms, kind) in enumerate(dec.components):
        if kind == TRANSIENT:
            continue
        sys_, nwords = _component_transfer(spec, syms, n, budget)
        lo, hi = sys_.certified_bounds(tol=tol)
        lower = max(lower, lo)
        upper = max(upper, hi)
    if upper < lower:
        lower = upper
    return DimBounds(lower, upper, n)


def hausdorff_dim(spec: CantorSpec, tol, budget=DEFAULT_ENUMERATION_BUDGET,
                  max_depth=64):
    """Deepen until upper - lower <= tol; returns the last (intersected)
    bounds, flagged incomplete when the budget stops the refinement."""
    if tol <= 0:
        raise InputError("tol must be positive")
    best = None
    for n in range(1, max_depth + 1):
        if spec.sft.count_words(n) > budget:
            break
        cur = beta_n_bounds(spec, n, budget=budget)
        best = cur if best is None else best.intersect(cur)
        if best.width <= tol:
            return best
    if best is None:
        raise CapacityError(spec.sft.count_words(1), budget, "depth-1 words")
    return replace(best, complete=False)


# -- interior property and refinement ---------------------------------


def has_interior_property(spec: CantorSpec):
    """Index of an interval contained in the interior of every image hull
    that covers it, or None.  Covering includes equality of intervals."""
    for k in range(spec.r):
        lo, hi = spec.intervals[k]
        ok = False
        witness = True
        covered_somewhere = False
        for i in range(spec.r):
            hl, hh = spec.row_hulls[i]
            if hl <= lo and hi <= hh:
                covered_somewhere = True
                if not (hl < lo and hi < hh):
                    witness = False
                    break
        if witness and covered_somewhere:
            return k
    return None


def _leaf_tree_merge(words):
    """Keep only maximal-depth cylinder words (drop strict prefixes)."""
    ws = set(words)
    return {w for w in ws if not any(u != w and u[: len(w)] == w for u in ws)}


def _closure(spec: CantorSpec, leaves_by_symbol, rounds=32):
    """Ensure every leaf's shifted word is tiled by leaves; split as needed."""
    for _ in range(rounds):
        all_leaves = {w for ls in leaves_by_symbol.values() for w in ls}
        to_split = []
        for w in all_leaves:
            if len(w) < 2:
                continue
            sw = w[1:]
            # fine: some leaf equals or extends sw, or sw extends no leaf strictly
            if sw in all_leaves:
                continue
            if any(u[: len(sw)] == sw for u in all_leaves):
                continue
            # sw strictly extends the leaf containing it: that leaf must split
            holder = next((u for u in all_leaves if sw[: len(u)] == u), None)
            if holder is None:
                raise NotMarkovError("shifted leaf escapes the leaf tree")
            to_split.append((holder, sw))
        if not to_split:
            return leaves_by_symbol
        for holder, sw in to_split:
            s0 = holder[0]
            ls = set(leaves_by_symbol[s0])
            if holder not in ls:
                continue
            ls.discard(holder)
            # split holder along the path towards sw
            node = holder
            while node != sw:
                nxt = sw[: len(node) + 1]
                for t in spec.targets(node[-1]):
                    child = node + (t,)
                    if child != nxt:
                        ls.add(child)
                node = nxt
            ls.add(sw)
            leaves_by_symbol[s0] = _leaf_tree_merge(ls)
    raise NotMarkovError("leaf closure did not stabilize")


def _build_refined(spec: CantorSpec, leaves_by_symbol):
    """Assemble the refined CantorSpec from cylinder leaves per symbol."""
    if spec.geometry is None:
        raise PreconditionError("refinement needs cylinder geometry")
    leaves_by_symbol = _closure(spec, {s: set(ls) for s, ls in leaves_by_symbol.items()})
    leaves = [w for s in range(spec.r) for w in leaves_by_symbol[s]]
    geom = spec.geometry
    with_pos = sorted((geom.cyl_interval(w), w) for w in leaves)
    new_intervals = tuple(iv for iv, _ in with_pos)
    new_words = [w for _, w in with_pos]
    idx = {w: k for k, w in enumerate(new_words)}

    def tiles_of(word):
        """Leaves tiling the cylinder of `word` (word is a node of the tree)."""
        out = [u for u in new_words if u[: len(word)] == word]
        if not out and word in idx:
            out = [word]
        return sorted(out, key=lambda u: idx[u])

    n = len(new_words)
    rows = [[0] * n for _ in range(n)]
    bounds = {}
    hulls = [None] * n
    for w in new_words:
        i = idx[w]
        if len(w) >= 2:
            sw = w[1:]
            tgt_leaves = tiles_of(sw) if sw not in idx else [sw]
            hulls[i] = geom.cyl_interval(sw)
            bb = spec.bound(w[0], w[1])
            for u in tgt_leaves:
                rows[i][idx[u]] = 1
                bounds[(i, idx[u])] = bb
        else:
            s = w[0]
            hulls[i] = spec.row_hulls[s]
            for t in spec.targets(s):
                for u in tiles_of((t,)):
                    rows[i][idx[u]] = 1
                    bounds[(i, idx[u])] = spec.bound(s, t)
    if spec.affine:
        return affine_cantor(new_intervals, rows)
    new_sft = SftSpec(n, tuple(tuple(r_) for r_ in rows))
    return CantorSpec(new_intervals, new_sft, bounds, tuple(hulls))


def refine_to_ip(spec: CantorSpec):
    """Refined Markov partition with the interior property, same set.

    With a symbol of degree >= 3, splitting it into its children suffices
    (a middle child is interior).  With every degree equal to 2, the nested
    three-symbol splitting applies; when the three split symbols coincide
    (small alphabets) the finest requested cuts win.  Mixed degrees with
    some degree 1 are outside the construction's hypotheses.
    """
    if has_interior_property(spec) is not None:
        return spec
    degs = [spec.degree(i) for i in range(spec.r)]
    big = next((i for i, d in enumerate(degs) if d >= 3), None)
    if big is not None:
        leaves = {s: {(s,)} for s in range(spec.r)}
        leaves[big] = {(big, b) for b in spec.targets(big)}
        out = _build_refined(spec, leaves)
    elif all(d == 2 for d in degs):
        l1, l2 = spec.targets(0)
        if l2 == 0:
            l1, l2 = l2, l1
        # choose b = the child of l2 whose cylinder (0, l2, b) avoids the
        # outer boundary of I_0, so grandchildren stay interior
        ca, cb = spec.targets(l2)
        geom = spec.geometry
        if geom is None:
            raise PreconditionError("refinement needs cylinder geometry")
        i0 = spec.intervals[0]

        def touches_outer(b):
            lo, hi = geom.cyl_interval((0, l2, b))
            return lo == i0[0] or hi == i0[1]

        if touches_outer(cb) and not touches_outer(ca):
            ca, cb = cb, ca
        a, b = ca, cb
        cc, cd = spec.targets(b)
        requests = [
            (0, {(0, l1), (0, l2, a), (0, l2, b, cc), (0, l2, b, cd)}),
            (l2, {(l2, a), (l2, b, cc), (l2, b, cd)}),
            (b, {(b, cc), (b, cd)}),
        ]
        # accumulate requested cuts per symbol; the finest cuts win when the
        # three split symbols coincide on small alphabets
        acc = {s: {(s,)} for s in range(spec.r)}
        for s, req in requests:
            acc[s] = _leaf_tree_merge((acc[s] - {(s,)}) | req)
        out = _build_refined(spec, acc)
    else:
        raise PreconditionError(
            "refinement needs a symbol of degree >= 3 or all degrees equal to 2"
        )
    if has_interior_property(out) is None:
        raise NotMarkovError("refinement failed to produce an interior interval")
    return out


# -- omission, perturbation, renormalization ---------------------------


def omit_interval(spec: CantorSpec, j):
    """Sub-Cantor-set on the partition minus I_j (Markov validity checked)."""
    if not (0 <= j < spec.r):
        raise InputError("index out of range")
    for i in range(spec.r):
        if i == j or not spec.sft.b[i][j]:
            continue
        ts = spec.targets(i)
        if ts[0] == j or ts[-1] == j:
            raise NotMarkovError(
                f"interval {spec.sft.labels[j]} is extremal in the image of "
                f"{spec.sft.labels[i]}; removing it breaks the hull"
            )
    kept = [k for k in range(spec.r) if k != j]
    rows = [[spec.sft.b[a][b2] for b2 in kept] for a in kept]
    for row in rows:
        if not any(row):
            raise NotMarkovError("a branch would lose all its targets")
    for col in range(len(kept)):
        if not any(rows[rr][col] for rr in range(len(kept))):
            raise NotMarkovError("a symbol would become unreachable")
    labels = tuple(spec.sft.labels[k] for k in kept)
    new_sft = SftSpec(len(kept), tuple(tuple(r_) for r_ in rows), labels)
    intervals = tuple(spec.intervals[k] for k in kept)
    hulls = tuple(spec.row_hulls[k] for k in kept)
    bounds = {}
    for a_new, a_old in enumerate(kept):
        for b_new, b_old in enumerate(kept):
            if spec.sft.b[a_old][b_old]:
                bounds[(a_new, b_new)] = spec.branch_bounds[(a_old, b_old)]
    geom = None
    if isinstance(spec.geometry, AffineGeometry):
        geom = AffineGeometry(intervals, hulls, tuple(tuple(r_) for r_ in rows))
    elif isinstance(spec.geometry, GaussGeometry):
        geom = _PrunedGaussGeometry(spec.geometry, kept)
    return CantorSpec(intervals, new_sft, bounds, hulls, affine=spec.affine, geometry=geom)


class _PrunedGaussGeometry:
    """Gauss geometry restricted to a subset of the original digit symbols.

    Cylinder hulls keep the original tail range, which encloses the pruned
    system's true hulls; all bounds stay certified, just slightly wider.
    """

    def __init__(self, base: GaussGeometry, kept):
        self.base = base
        self.kept = tuple(kept)
        self.digits = tuple(base.digits[k] for k in kept)
        self.tail_min = base.tail_min
        self.tail_max = base.tail_max
        self.t_lo = base.t_lo
        self.t_hi = base.t_hi

    def _to_base(self, word):
        return tuple(self.kept[s] for s in word)

    def cyl_interval(self, word):
        return self.base.cyl_interval(self._to_base(word))

    def step_contraction(self, d_sym, word):
        return self.base.step_contraction(self.kept[d_sym], self._to_base(word))

    def enumerate(self, depth, budget, spec_sft):
        from .gauss import continuants
        from .geometry import Cylinder

        count = spec_sft.count_words(depth)
        if count > budget:
            raise CapacityError(count, budget, f"depth-{depth} cylinders")
        results = []

        def rec(w):
            if len(w) == depth:
                lo, hi = self.cyl_interval(w)
                _, q, _, qq = continuants(tuple(self.base.digits[self.kept[s]] for s in w))
                results.append(Cylinder(w, lo, hi, (q, qq)))
                return
            for s in range(len(self.kept)):
                if w and not spec_sft.b[w[-1]][s]:
                    continue
                rec(w + (s,))

        rec(())
        results.sort(key=lambda c: (c.lo, c.hi))
        return results

    def gap_and_length(self, aux):
        return self.base.gap_and_length(aux)

    def deep_gap_fraction(self):
        return self.base.deep_gap_fraction()


def perturb_lambda(spec: CantorSpec, l, lam):
    """Shrink I_l to [a_l, (1-lam) a_l + lam b_l]; the branch derivative on
    the shrunk interval multiplies by 1/lam, combinatorics unchanged.

    Requires an affine spec and that I_l is never extremal in a covering
    image, so the hulls survive the shrink.
    """
    lam = Fraction(lam)
    if not (0 < lam <= 1):
        raise PreconditionError("lambda must lie in (0, 1]")
    if not spec.affine:
        raise PreconditionError("perturbation is defined for affine specs")
    for i in range(spec.r):
        if not spec.sft.b[i][l]:
            continue
        ts = spec.targets(i)
        if ts[0] == l or ts[-1] == l:
            raise PreconditionError(
                f"interval {spec.sft.labels[l]} is extremal in the image of "
                f"{spec.sft.labels[i]}; it must be interior (IP)"
            )
    if lam == 1:
        return spec
    a_l, b_l = spec.intervals[l]
    new_intervals = list(spec.intervals)
    new_intervals[l] = (a_l, (1 - lam) * a_l + lam * b_l)
    rows = [list(row) for row in spec.sft.b]
    # affine data: hulls unchanged; slope on l multiplies by 1/lam
    bounds = dict(spec.branch_bounds)
    for j in spec.targets(l):
        lo, hi = bounds[(l, j)]
        bounds[(l, j)] = (lo / lam, hi / lam)
    geom = AffineGeometry(tuple(new_intervals), spec.row_hulls, spec.sft.b)
    return CantorSpec(tuple(new_intervals), spec.sft, bounds, spec.row_hulls,
                      affine=True, geometry=geom)


def renorm_chains(spec: CantorSpec, cap=DEFAULT_RENORM_CAP):
    """Per symbol, the forced word until the branch covers >= 2 intervals.

    m_j = len(chain_j); symbols of degree >= 2 have chain (j,), m = 1.
    """
    chains = []
    for j in range(spec.r):
        word = [j]
        seen = {j}
        cur = j
        while spec.degree(cur) == 1:
            cur = spec.targets(cur)[0]
            if cur in seen:
                raise PreconditionError(
                    f"symbol {spec.sft.labels[j]} lies on a degree-1 cycle; "
                    "the renormalization exponent does not exist"
                )
            if len(word) >= cap:
                raise RenormCapError(spec.sft.labels[j], cap)
            word.append(cur)
            seen.add(cur)
        chains.append(tuple(word))
    return chains


def renormalize_T(spec: CantorSpec, cap=DEFAULT_RENORM_CAP, certify_depth=6):
    """Replace each branch by its composite until it covers two intervals.

    The new spec has the same partition and the same Cantor set; the set
    equality is certified combinatorially: admissible words of the original
    parse uniquely into the forced chains, giving the cylinder-cover
    correspondence at every depth up to `certify_depth`.
    """
    chains = renorm_chains(spec, cap)
    if all(len(c) == 1 for c in chains):
        return spec
    rows = []
    hulls = []
    bounds = {}
    for j in range(spec.r):
        chain = chains[j]
        end = chain[-1]
        rows.append(list(spec.sft.b[end]))
        hulls.append(spec.row_hulls[end])
        acc_lo, acc_hi = Fraction(1), Fraction(1)
        for k in range(len(chain) - 1):
            lo, hi = spec.bound(chain[k], chain[k + 1])
            acc_lo *= lo
            acc_hi *= hi
        for t in spec.targets(end):
            lo, hi = spec.bound(end, t)
            bounds[(j, t)] = (acc_lo * lo, acc_hi * hi)
    new_sft = SftSpec(spec.r, tuple(tuple(r_) for r_ in rows), spec.sft.labels)
    geom = None
    affine = spec.affine
    if spec.affine:
        geom = AffineGeometry(spec.intervals, tuple(hulls), tuple(tuple(r_) for r_ in rows))
    out = CantorSpec(spec.intervals, new_sft, bounds, tuple(hulls),
                     affine=affine, geometry=geom)
    _certify_renorm(spec, out, chains, certify_depth)
    return out


def _certify_renorm(spec, out, chains, depth):
    """Original words parse greedily into chains; check both containments
    of the depth-k cylinder covers for k <= depth."""
    from .sft import admissible_words

    max_len = max(len(c) for c in chains)
    for k in range(1, depth + 1):
        need = k * max_len
        if spec.sft.count_words(need) > 200000:
            need = k  # fall back to a cheap prefix check on large alphabets
        for w in admissible_words(spec.sft, need, budget=300000):
            pos = 0
            blocks = 0
            while pos < len(w):
                c = chains[w[pos]]
                if tuple(w[pos: pos + len(c)]) != c[: len(w) - pos]:
                    raise NotMarkovError("renormalization parse failed")
                pos += len(c)
                blocks += 1
            # enough blocks implies containment in a depth-`blocks` new cylinder
        # new words expand to admissible original words
        for w in admissible_words(out.sft, k, budget=300000):
            expanded = []
            for s in w:
                expanded.extend(chains[s])
            if not spec.sft.is_admissible(tuple(expanded)):
                raise NotMarkovError("expanded renormalized word is inadmissible")
