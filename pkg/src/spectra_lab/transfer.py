"""Certified spectral roots for Markov contraction systems.

The Hausdorff dimension of a Markov-IFS attractor is the parameter s where
the weighted transition operator with per-edge weights c(e)^s has spectral
radius 1 (c(e) is the edge contraction factor).  With rigorous per-edge
enclosures c(e) in [w_lo, w_hi] (0 < w_lo <= w_hi < 1), freezing weights at
the low (resp. high) end under- (resp. over-) estimates the operator on the
positive cone, so

    rho(M_lo(s)) >= 1  =>  dim >= s        (Collatz-Wielandt witness v >= 0,
    rho(M_hi(s)) <= 1  =>  dim <= s         nonzero, with M v >= v, resp.
                                            v > 0 with M v <= v)

Both witness checks run in floating point with a-priori error padding, so a
passed check is a proof modulo IEEE double rounding of the padded margin.
Bisection on s then yields certified two-sided dimension bounds.
"""

from __future__ import annotations

import numpy as np

_EPS = 2.220446049250313e-16


class TransferSystem:
    """Sparse weighted transition structure: edges src -> dst with
    contraction enclosures [w_lo, w_hi] per edge."""

    def __init__(self, nstates, src, dst, w_lo, w_hi):
        self.n = int(nstates)
        self.src = np.asarray(src, dtype=np.int64)
        self.dst = np.asarray(dst, dtype=np.int64)
        self.w_lo = np.asarray(w_lo, dtype=np.float64)
        self.w_hi = np.asarray(w_hi, dtype=np.float64)
        if self.n and len(self.src):
            if self.w_lo.min() <= 0:
                raise ValueError("contraction lower bounds must be positive")
            if self.w_hi.max() >= 1:
                raise ValueError("contraction upper bounds must be < 1")
            # max in-degree bounds the summation length in the matvec
            self._deg = int(np.bincount(self.dst, minlength=self.n).max())
        else:
            self._deg = 0
        self._log_lo = np.log(self.w_lo) if len(self.src) else self.w_lo
        self._log_hi = np.log(self.w_hi) if len(self.src) else self.w_hi

    def _matvec(self, w, v):
        return np.bincount(self.dst, weights=w * v[self.src], minlength=self.n)

    def _perron_vector(self, w, iters=220):
        v = np.full(self.n, 1.0)
        for _ in range(iters):
            nv = self._matvec(w, v) + 0.25 * v + 1e-300
            v = nv / nv.max()
        return v

    def _certify(self, s, lower_side):
        """True when rho >= 1 is certified from the low weights (lower_side)
        or rho <= 1 is certified from the high weights (not lower_side)."""
        if self.n == 0 or len(self.src) == 0:
            return False if lower_side else True
        pad_w = (1 - 1e-13) if lower_side else (1 + 1e-13)
        w = np.exp(s * (self._log_lo if lower_side else self._log_hi)) * pad_w
        v = self._perron_vector(w)
        mv = self._matvec(w, v)
        # a-priori summation error: each component sums <= deg terms
        fudge = (self._deg + 4) * _EPS
        if lower_side:
            return bool(np.all(mv * (1 - fudge) >= v))
        return bool(np.all(mv * (1 + fudge) <= v))

    def certified_bounds(self, tol=1e-13, s_max=2.0):
        """(lower, upper) with lower <= dim <= upper, certified as above."""
        if self.n == 0 or len(self.src) == 0:
            return 0.0, 0.0
        # ensure the upper bisection bracket certifies at its top
        top = s_max
        while not self._certify(top, lower_side=False):
            top *= 2
            if top > 64:
                raise ValueError("upper spectral root out of range")
        # lower root: sup { s : rho(M_lo(s)) >= 1 certified }
        lo, hi = 0.0, top
        if not self._certify(0.0, lower_side=True):
            lower = 0.0
        else:
            while hi - lo > tol:
                mid = (lo + hi) / 2
                if self._certify(mid, lower_side=True):
                    lo = mid
                else:
                    hi = mid
            lower = lo
        # upper root: inf { s : rho(M_hi(s)) <= 1 certified }
        lo2, hi2 = 0.0, top
        if self._certify(0.0, lower_side=False):
            upper = 0.0
        else:
            while hi2 - lo2 > tol:
                mid = (lo2 + hi2) / 2
                if self._certify(mid, lower_side=False):
                    hi2 = mid
                else:
                    lo2 = mid
            upper = hi2
        if upper < lower:
            # can only happen by bisection granularity; widen minimally
            lower, upper = min(lower, upper), max(lower, upper)
        return lower, upper


def from_edges(nstates, edges):
    """edges: iterable of (src, dst, w_lo, w_hi)."""
    if not edges:
        return TransferSystem(nstates, [], [], [], [])
    src, dst, wlo, whi = zip(*edges)
    return TransferSystem(nstates, src, dst, wlo, whi)


def markov_moran_root(b_rows, rates_lo, rates_hi=None, weight_on="target", tol=1e-13):
    """Certified root of rho(B . diag-weights^s) = 1 for a sub-SFT.

    b_rows[i][j] is the 0/1 transition matrix; weights attach per edge to
    the target symbol ("target") or the source symbol ("source"), raised to
    the power s.  For a full shift this is the classical Moran equation
    sum_j rates_j^s = 1; for a single cycle the root is 0.
    """
    if rates_hi is None:
        rates_hi = rates_lo
    n = len(b_rows)
    edges = []
    for i in range(n):
        for j in range(n):
            if b_rows[i][j]:
                k = j if weight_on == "target" else i
                edges.append((i, j, rates_lo[k], rates_hi[k]))
    sys_ = from_edges(n, edges)
    return sys_.certified_bounds(tol=tol)
