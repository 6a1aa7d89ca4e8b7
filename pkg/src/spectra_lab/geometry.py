"""Exact cylinder geometry for the two concrete model families.

A geometry object answers, with outward-rounded rational arithmetic:
  * cyl_interval(word): enclosure of the depth-n cylinder's convex hull
    (restricted to the Cantor set's own extremes, so partition endpoints
    are attained by points of the set);
  * step_contraction(d, word): enclosure of |h_d'| on that cylinder, where
    h_d is the inverse branch landing in symbol d (used as transfer-matrix
    weights);
  * gap_and_length(aux): per-cylinder (max next-level internal gap, cylinder
    length) and deep_gap_fraction(): a global bound on (any gap strictly
    inside a cylinder) / (cylinder length) — both feed the thickness walk.

Affine specs get exact values; Gauss-Cantor specs get continuant-based
enclosures.  Branch-bound-only specs have no geometry and fall back to
per-transition derivative bounds where possible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import CapacityError, InputError
from .gauss import continuants, digit_tail_range

_PREC = 10**30


def float_down(x):
    f = float(x)
    if Fraction(f) > Fraction(x):
        f = math.nextafter(f, -math.inf)
    return math.nextafter(f, -math.inf)


def float_up(x):
    f = float(x)
    if Fraction(f) < Fraction(x):
        f = math.nextafter(f, math.inf)
    return math.nextafter(f, math.inf)


@dataclass
class Cylinder:
    word: tuple
    lo: Fraction
    hi: Fraction
    aux: tuple  # geometry-specific data for gap profiles


class AffineGeometry:
    """Branches are affine and increasing from I_i onto the declared hull."""

    def __init__(self, intervals, row_hulls, rows):
        self.intervals = tuple(intervals)
        self.hulls = tuple(row_hulls)
        self.rows = tuple(tuple(r) for r in rows)
        self.slopes = []
        for i, (lo, hi) in enumerate(self.intervals):
            hl, hh = self.hulls[i]
            if hi == lo:
                raise InputError("degenerate interval in affine spec")
            self.slopes.append(Fraction(hh - hl, hi - lo))
        n = len(self.intervals)
        # per symbol: max gap between consecutive target intervals and child
        # lengths, both as fractions of the hull span
        self._gapfrac = []
        self._childfrac = []
        for i in range(n):
            targets = [j for j in range(n) if self.rows[i][j]]
            hl, hh = self.hulls[i]
            span = hh - hl
            gaps, childs = [], []
            prev_hi = None
            for j in targets:
                jlo, jhi = self.intervals[j]
                childs.append((j, Fraction(jhi - jlo, span)))
                if prev_hi is not None:
                    gaps.append(Fraction(jlo - prev_hi, span))
                prev_hi = jhi
            self._gapfrac.append(max(gaps) if gaps else Fraction(0))
            self._childfrac.append(childs)

    def inverse_branch(self, i, x_lo, x_hi):
        lo, _ = self.intervals[i]
        hl, _ = self.hulls[i]
        m = self.slopes[i]
        return lo + (x_lo - hl) / m, lo + (x_hi - hl) / m

    def cyl_interval(self, word):
        lo, hi = self.intervals[word[-1]]
        for s in reversed(word[:-1]):
            lo, hi = self.inverse_branch(s, lo, hi)
        return lo, hi

    def step_contraction(self, d, word):
        r = 1 / self.slopes[d]
        return r, r

    def enumerate(self, depth, budget, spec_sft):
        count = spec_sft.count_words(depth)
        if count > budget:
            raise CapacityError(count, budget, f"depth-{depth} cylinders")
        out = []
        # DFS carrying the composed inverse affine map phi(x) = a x + b
        stack = [((), Fraction(1), Fraction(0))]
        while stack:
            w, a, b = stack.pop()
            if len(w) == depth:
                lo, hi = self.intervals[w[-1]]
                out.append(Cylinder(w, a * lo + b, a * hi + b, (w[-1], a)))
                continue
            for j in range(len(self.intervals) - 1, -1, -1):
                if w and not spec_sft.b[w[-1]][j]:
                    continue
                if not w:
                    stack.append(((j,), a, b))
                else:
                    s = w[-1]
                    m = self.slopes[s]
                    lo_s, _ = self.intervals[s]
                    hl, _ = self.hulls[s]
                    # phi_new(x) = phi(inverse_branch_s(x)) = (a/m) x + phi(lo_s - hl/m)
                    stack.append((w + (j,), a / m, a * (lo_s - Fraction(hl, 1) / m) + b))
        out.sort(key=lambda c: (c.lo, c.hi))
        return out

    def gap_and_length(self, aux):
        s, a = aux
        lo, hi = self.intervals[s]
        length = a * (hi - lo)
        # internal gaps scale with the cylinder: gapfrac * slope*|I_s| / slope = gapfrac*|I_s|
        return self._gapfrac[s] * length, length

    def deep_gap_fraction(self):
        """Monotone fixpoint of g_i = max(gapfrac_i, max_j childfrac_ij g_j)."""
        n = len(self.intervals)
        g = [Fraction(1)] * n
        for _ in range(4 * n + 40):
            ng = []
            for i in range(n):
                best = self._gapfrac[i]
                for j, fr in self._childfrac[i]:
                    v = fr * g[j]
                    if v > best:
                        best = v
                ng.append(best)
            if ng == g:
                break
            g = ng
        return max(g) if g else Fraction(0)


class GaussGeometry:
    """Digit cylinders of the Gauss map restricted to a digit set.

    Partition intervals are the restricted hulls {[0; d, tail] : tail in
    [A, B]} with A, B the extremal tails of the digit system, so interval
    endpoints belong to the set.  aux carries the continuants (q, q_prev).
    """

    def __init__(self, digits):
        self.digits = tuple(sorted(set(digits)))
        if not self.digits or self.digits[0] < 1:
            raise InputError("digits must be positive integers")
        a_surd, b_surd = digit_tail_range(self.digits)
        self.tail_min = a_surd
        self.tail_max = b_surd
        alo, _ = a_surd.bounds(_PREC)
        _, bhi = b_surd.bounds(_PREC)
        self.t_lo = alo  # rational outward enclosure of [A, B]
        self.t_hi = bhi

    def symbol_digit(self, i):
        return self.digits[i]

    def _hull(self, p, q, pp, qq):
        t1, t2 = self.t_lo, self.t_hi
        e1 = Fraction(p * t1.denominator + pp * t1.numerator, q * t1.denominator + qq * t1.numerator)
        e2 = Fraction(p * t2.denominator + pp * t2.numerator, q * t2.denominator + qq * t2.numerator)
        return (e1, e2) if e1 <= e2 else (e2, e1)

    def cyl_interval(self, word):
        digits = tuple(self.digits[s] for s in word)
        p, q, pp, qq = continuants(digits)
        return self._hull(p, q, pp, qq)

    def step_contraction(self, d_sym, word):
        """|h_d'| = 1/(d+x)^2 over x in the cylinder of `word`."""
        d = self.digits[d_sym]
        xlo, xhi = self.cyl_interval(word)
        return 1 / (d + xhi) ** 2, 1 / (d + xlo) ** 2

    def enumerate(self, depth, budget, spec_sft):
        count = spec_sft.count_words(depth)
        if count > budget:
            raise CapacityError(count, budget, f"depth-{depth} cylinders")
        out = []
        stack = [((), 0, 1, 1, 0)]
        while stack:
            w, p, q, pp, qq = stack.pop()
            if len(w) == depth:
                lo, hi = self._hull(p, q, pp, qq)
                out.append(Cylinder(w, lo, hi, (q, qq)))
                continue
            for s in range(len(self.digits) - 1, -1, -1):
                if w and not spec_sft.b[w[-1]][s]:
                    continue
                a = self.digits[s]
                stack.append((w + (s,), a * p + pp, a * q + qq, p, q))
        out.sort(key=lambda c: (c.lo, c.hi))
        return out

    def _t_segments(self):
        """Children occupy t in [1/(d+B), 1/(d+A)] inside [A, B], ascending."""
        segs = [(Fraction(1, 1) / (d + self.t_hi), Fraction(1, 1) / (d + self.t_lo))
                for d in self.digits]
        return segs[::-1]

    def gap_and_length(self, aux):
        q, qq = aux
        t1, t2 = self.t_lo, self.t_hi

        def xlen(a, b):
            return (b - a) / ((q + a * qq) * (q + b * qq))

        segs = self._t_segments()
        gaps = [xlen(segs[i][1], segs[i + 1][0]) for i in range(len(segs) - 1)]
        return (max(gaps) if gaps else Fraction(0)), xlen(t1, t2)

    def deep_gap_fraction(self):
        segs = self._t_segments()
        span = self.t_hi - self.t_lo
        gaps = [segs[i + 1][0] - segs[i][1] for i in range(len(segs) - 1)]
        if not gaps:
            return Fraction(0)
        distortion = ((1 + self.t_hi) / (1 + self.t_lo)) ** 2
        return max(gaps) / span * distortion
