"""Exact quadratic-surd arithmetic, continued fractions, and Gauss-Cantor sets.

QuadSurd represents (p + q*sqrt(d))/r with integers p, q, r and d
square-free, in canonical form.  All closed-form spectrum constants live in
single quadratic fields, so addition and multiplication are restricted to
operands sharing the radical (or rational operands); order comparisons work
across fields and are exact, by sign analysis and squaring with integer
arithmetic only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .errors import InputError

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def squarefree_split(d):
    """d = s*s*m with m square-free; returns (s, m).  Trial division."""
    if d < 0:
        raise InputError("radicand must be nonnegative")
    if d in (0, 1):
        return 1, d
    s, m = 1, d
    for p in _SMALL_PRIMES:
        p2 = p * p
        while m % p2 == 0:
            m //= p2
            s *= p
    f = 41
    while f * f * f * f <= m:
        f2 = f * f
        while m % f2 == 0:
            m //= f2
            s *= f
        f += 2
    root = isqrt(m)
    if root * root == m:
        return s * root, 1
    return s, m


def _sign_int(x):
    return (x > 0) - (x < 0)


def _sign_a_plus_b_sqrt(a, b, d):
    """Exact sign of a + b*sqrt(d) for integers a, b and d >= 0."""
    if b == 0 or d == 0:
        return _sign_int(a)
    if a == 0:
        return _sign_int(b)
    sa, sb = _sign_int(a), _sign_int(b)
    if sa == sb:
        return sa
    # signs differ: compare a^2 with b^2 d
    return sa * _sign_int(a * a - b * b * d)


def _sign_two_surds(a, b, d1, c, d2):
    """Exact sign of a + b*sqrt(d1) + c*sqrt(d2), d1 != d2 square-free, b, c != 0."""
    # sign of S = b sqrt(d1) + c sqrt(d2)
    if _sign_int(b) == _sign_int(c):
        s_sign = _sign_int(b)
    else:
        s_sign = _sign_int(b) * _sign_int(b * b * d1 - c * c * d2)
    if a == 0:
        return s_sign
    if s_sign == 0 or s_sign == _sign_int(a):
        return _sign_int(a)
    # compare a^2 against S^2 = b^2 d1 + c^2 d2 + 2 b c sqrt(d1 d2)
    s0, m = squarefree_split(d1 * d2)
    diff_sign = _sign_a_plus_b_sqrt(a * a - b * b * d1 - c * c * d2, -2 * b * c * s0, m)
    return _sign_int(a) if diff_sign > 0 else s_sign


@dataclass(frozen=True)
class QuadSurd:
    """(p + q*sqrt(d))/r in canonical form: r > 0, gcd(p,q,r) = 1, d square-free."""

    p: int
    q: int
    r: int
    d: int

    def __post_init__(self):
        if self.r == 0:
            raise InputError("zero denominator")

    @staticmethod
    def make(p, q, r, d):
        from math import gcd

        if r == 0:
            raise InputError("zero denominator")
        s, m = squarefree_split(d)
        q, d = q * s, m
        if d in (0, 1):
            p, q, d = p + (q if d == 1 else 0), 0, 0
        if q == 0:
            d = 0
        if r < 0:
            p, q, r = -p, -q, -r
        g = gcd(gcd(abs(p), abs(q)), r)
        if g > 1:
            p, q, r = p // g, q // g, r // g
        return QuadSurd(p, q, r, d)

    @staticmethod
    def from_rational(x):
        f = Fraction(x)
        return QuadSurd.make(f.numerator, 0, f.denominator, 0)

    @staticmethod
    def sqrt_of(n):
        return QuadSurd.make(0, 1, 1, n)

    @property
    def is_rational(self):
        return self.q == 0

    def as_fraction(self):
        if not self.is_rational:
            raise InputError("not a rational value")
        return Fraction(self.p, self.r)

    def _coerced(self, other):
        if isinstance(other, QuadSurd):
            return other
        return QuadSurd.from_rational(other)

    def __add__(self, other):
        o = self._coerced(other)
        if self.q and o.q and self.d != o.d:
            raise InputError(f"cannot add surds from different fields (sqrt {self.d} vs sqrt {o.d})")
        d = self.d if self.q else o.d
        return QuadSurd.make(self.p * o.r + o.p * self.r, self.q * o.r + o.q * self.r, self.r * o.r, d)

    __radd__ = __add__

    def __neg__(self):
        return QuadSurd.make(-self.p, -self.q, self.r, self.d)

    def __sub__(self, other):
        return self + (-self._coerced(other))

    def __rsub__(self, other):
        return (-self) + self._coerced(other)

    def __mul__(self, other):
        o = self._coerced(other)
        if self.q and o.q and self.d != o.d:
            raise InputError("cannot multiply surds from different fields")
        d = self.d if self.q else o.d
        return QuadSurd.make(
            self.p * o.p + self.q * o.q * d, self.p * o.q + self.q * o.p, self.r * o.r, d
        )

    __rmul__ = __mul__

    def reciprocal(self):
        norm = self.p * self.p - self.q * self.q * self.d
        if norm == 0:
            raise InputError("division by zero surd")
        return QuadSurd.make(self.r * self.p, -self.r * self.q, norm, self.d)

    def __truediv__(self, other):
        return self * self._coerced(other).reciprocal()

    def sign(self):
        return _sign_a_plus_b_sqrt(self.p, self.q, self.d)

    def compare(self, other):
        """Exact three-way comparison, valid across quadratic fields."""
        o = self._coerced(other)
        a = self.p * o.r - o.p * self.r
        b = self.q * o.r
        c = -o.q * self.r
        if b == 0 and c == 0:
            return _sign_int(a)
        if b == 0:
            return _sign_a_plus_b_sqrt(a, c, o.d)
        if c == 0:
            return _sign_a_plus_b_sqrt(a, b, self.d)
        if self.d == o.d:
            return _sign_a_plus_b_sqrt(a, b + c, self.d)
        return _sign_two_surds(a, b, self.d, c, o.d)

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def equals(self, other):
        return self.compare(other) == 0

    def bounds(self, prec=10**30):
        """Rational enclosure (lo, hi) with width about 1/prec."""
        if self.q == 0:
            f = Fraction(self.p, self.r)
            return f, f
        n = isqrt(self.d * prec * prec)
        lo_s, hi_s = Fraction(n, prec), Fraction(n + 1, prec)
        if self.q > 0:
            lo = (self.p + self.q * lo_s) / self.r
            hi = (self.p + self.q * hi_s) / self.r
        else:
            lo = (self.p + self.q * hi_s) / self.r
            hi = (self.p + self.q * lo_s) / self.r
        return lo, hi

    def __float__(self):
        lo, hi = self.bounds()
        return float((lo + hi) / 2)

    def floor(self):
        lo, hi = self.bounds()
        fl = lo.numerator // lo.denominator
        fh = hi.numerator // hi.denominator
        if fl == fh:
            return fl
        # enclosure straddles an integer: decide exactly
        k = fh
        return k if self.compare(k) >= 0 else fl

    def __str__(self):
        if self.q == 0:
            return f"{self.p}/{self.r}" if self.r != 1 else str(self.p)
        qpart = f"{self.q}*sqrt({self.d})" if self.q != 1 else f"sqrt({self.d})"
        if self.q == -1:
            qpart = f"-sqrt({self.d})"
        core = qpart if self.p == 0 else f"{self.p}{'+' if self.q > 0 else ''}{qpart}"
        return core if self.r == 1 else f"({core})/{self.r}"

    def to_json_obj(self):
        return {"p": self.p, "q": self.q, "r": self.r, "d": self.d}

    @staticmethod
    def from_json_obj(obj):
        return QuadSurd.make(int(obj["p"]), int(obj["q"]), int(obj["r"]), int(obj["d"]))


@dataclass(frozen=True)
class CfSequence:
    """Continued fraction [pre[0]; pre[1], ..., overline(period)].

    pre includes the integer part (which may be 0); all later digits and all
    period digits are >= 1.  An empty period denotes a finite fraction.
    """

    pre: tuple
    period: tuple

    def __post_init__(self):
        if any(a < 1 for a in self.pre[1:]) or any(a < 1 for a in self.period):
            raise InputError("partial quotients after the integer part must be >= 1")
        if self.pre and self.pre[0] < 0:
            raise InputError("integer part must be >= 0 here")

    def to_json_obj(self):
        return {"pre": list(self.pre), "period": list(self.period)}

    @staticmethod
    def from_json_obj(obj):
        return CfSequence(tuple(obj["pre"]), tuple(obj["period"]))


def continuants(word):
    """(p, q, p_prev, q_prev) of [0; word]; empty word gives (0, 1, 1, 0)."""
    p, pp, q, qq = 0, 1, 1, 0
    for a in word:
        if a < 1:
            raise InputError("digits must be >= 1")
        p, pp = a * p + pp, p
        q, qq = a * q + qq, q
    return p, q, pp, qq


def cylinder_interval(word):
    """Closed interval {[0; word + t] : t in [0,1]} with rational endpoints.

    Endpoints are p/q and (p+p')/(q+q'), ordered by the parity of len(word);
    the length is 1/(q(q+q')).
    """
    if not word:
        raise InputError("empty word has no cylinder")
    p, q, pp, qq = continuants(word)
    e1 = Fraction(p, q)
    e2 = Fraction(p + pp, q + qq)
    return (e1, e2) if e1 <= e2 else (e2, e1)


def evaluate_with_tail(word, tlo, thi):
    """Rational enclosure of {[0; word, continuation] : continuation in [tlo, thi]}.

    The continuation parameter t is the value [0; a_{n+1}, ...] in [0, 1];
    the cylinder point is (p + t p')/(q + t q').
    """
    p, q, pp, qq = continuants(word)
    e1 = Fraction(p * tlo.denominator + pp * tlo.numerator, q * tlo.denominator + qq * tlo.numerator)
    e2 = Fraction(p * thi.denominator + pp * thi.numerator, q * thi.denominator + qq * thi.numerator)
    return (e1, e2) if e1 <= e2 else (e2, e1)


def periodic_value(cf: CfSequence) -> QuadSurd:
    """Exact value of an eventually periodic continued fraction.

    The periodic tail T = [b_1; b_2, ..., b_k, T] is the positive fixed
    point of the Moebius map given by the product of the digit matrices
    [[b, 1], [1, 0]]; the preperiod is then applied through its convergents.
    """
    if not cf.period:
        raise InputError("period must be nonempty")
    a11, a12, a21, a22 = 1, 0, 0, 1
    for b in cf.period:
        a11, a12 = a11 * b + a12, a11
        a21, a22 = a21 * b + a22, a21
    disc = (a11 - a22) ** 2 + 4 * a12 * a21
    s, m = squarefree_split(disc)
    if disc <= 0 or m == 1:
        raise InputError(f"degenerate periodic quadratic (discriminant {disc})")
    # T = ((a11 - a22) + sqrt(disc)) / (2 a21), the root > 1
    T = QuadSurd.make(a11 - a22, s, 2 * a21, m)
    if not cf.pre:
        return T
    p, pp, q, qq = cf.pre[0], 1, 1, 0
    for a in cf.pre[1:]:
        p, pp = a * p + pp, p
        q, qq = a * q + qq, q
    num = T * p + pp
    den = T * q + qq
    return num / den


def periodic_tail(word) -> QuadSurd:
    """[0; overline(word)] exactly."""
    return periodic_value(CfSequence((0,), tuple(word)))


def extremal_values(n):
    """(A_N, B_N): the extreme points of C(N), as exact surds.

    B_N = [0; overline(1,N)] = (-N + sqrt(N^2+4N))/2 and A_N = B_N / N.
    """
    if n < 1:
        raise InputError("N must be >= 1")
    s, m = squarefree_split(n * n + 4 * n)
    b = QuadSurd.make(-n, s, 2, m)
    a = QuadSurd.make(-n, s, 2 * n, m)
    return a, b


def digit_tail_range(digits):
    """(min, max) of {[0; a_1, a_2, ...] : all a_i in digits}, as exact surds.

    The minimum is [0; overline(M, m)] and the maximum [0; overline(m, M)]
    with m, M the least and greatest digits.
    """
    ds = sorted(set(digits))
    if not ds or ds[0] < 1:
        raise InputError("digits must be a nonempty set of positive integers")
    m, M = ds[0], ds[-1]
    if m == M:
        per = (m,)
        v = periodic_tail(per)
        return v, v
    return periodic_tail((M, m)), periodic_tail((m, M))


def cf_expand(x: QuadSurd, n, state_cap=10000):
    """First n digits of x in (0,1) by exact surd arithmetic, plus the exact
    eventually-periodic expansion found by state repetition.

    Returns (digits, CfSequence).  Rational inputs raise once the expansion
    terminates; irrational quadratic surds always cycle.
    """
    if x.q == 0:
        raise InputError("rational input: expansion terminates, no periodic tail")
    if not (x.compare(0) > 0 and x.compare(1) < 0):
        raise InputError("x must lie in (0, 1)")
    digits = []
    seen = {}
    cur = x
    pre = None
    period = None
    while len(digits) < max(n, 1) or period is None:
        key = (cur.p, cur.q, cur.r, cur.d)
        if key in seen and period is None:
            j = seen[key]
            pre, period = tuple(digits[:j]), tuple(digits[j:])
            if len(digits) >= n:
                break
        if key not in seen:
            seen[key] = len(digits)
        if len(seen) > state_cap:
            raise InputError("state cap exceeded during expansion")
        inv = cur.reciprocal()
        a = inv.floor()
        digits.append(a)
        cur = inv - a
        if cur.sign() == 0:
            raise InputError("rational input: expansion terminated")
        if period is not None and len(digits) >= n:
            break
    # extend digits up to n from the period if the cycle closed early
    while len(digits) < n:
        k = len(digits) - len(pre)
        digits.append(period[k % len(period)])
    return tuple(digits[:n]), CfSequence((0,) + pre, period)
