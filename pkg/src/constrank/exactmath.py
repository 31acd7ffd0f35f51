"""Exact integer, rational, polynomial and prime-field arithmetic.

Everything here is exact.  Python ints are unbounded and ``Fraction`` covers
the rationals, so no floating point value ever enters a computation.
"""

from fractions import Fraction
from math import gcd, lcm

import numpy as np

__all__ = [
    "binomial",
    "MultiPoly",
    "UPoly",
    "upoly_gcd",
    "PrimeField",
    "is_prime",
    "rank_exact",
    "integer_rows",
    "rank_mod_p_batch",
    "poly_det",
    "poly_rank",
]


def binomial(a, k):
    """Generalized binomial coefficient a-choose-k via the falling factorial.

    Works for negative ``a``; gives 0 when ``0 <= a < k``.
    """
    if k < 0:
        raise ValueError(f"binomial: k must be non-negative, got {k}")
    num = 1
    den = 1
    for i in range(k):
        num *= a - i
        den *= i + 1
    return num // den


def is_prime(p):
    """Deterministic trial division; meant for the small moduli used here."""
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


# ---------------------------------------------------------------------------
# multivariate polynomials


class MultiPoly:
    """Sparse polynomial in ``nvars`` variables x0..x{nvars-1}.

    Terms map exponent tuples to non-zero int or Fraction coefficients.
    Instances are treated as immutable.
    """

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars, terms=None):
        if nvars < 1:
            raise ValueError("a polynomial needs at least one variable")
        self.nvars = nvars
        clean = {}
        if terms:
            for exps, c in terms.items():
                exps = tuple(exps)
                if len(exps) != nvars:
                    raise ValueError(
                        f"exponent vector {exps} does not have length {nvars}")
                if any(e < 0 for e in exps):
                    raise ValueError(f"negative exponent in {exps}")
                if c:
                    clean[exps] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def constant(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars, i):
        if not 0 <= i < nvars:
            raise ValueError(f"variable index {i} out of range for {nvars} variables")
        exps = [0] * nvars
        exps[i] = 1
        return cls(nvars, {tuple(exps): 1})

    @classmethod
    def linear_form(cls, coeffs):
        """sum_i coeffs[i] * x_i"""
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            if c:
                exps = [0] * n
                exps[i] = 1
                terms[tuple(exps)] = c
        return cls(n, terms)

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self):
        return not self._terms

    def is_constant(self):
        return all(not any(e) for e in self._terms)

    def constant_value(self):
        """Value of the constant term (0 if absent)."""
        return self._terms.get((0,) * self.nvars, 0)

    def degree(self):
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def variables_used(self):
        used = set()
        for exps in self._terms:
            used.update(i for i, e in enumerate(exps) if e)
        return used

    def _check(self, other):
        if not isinstance(other, MultiPoly):
            return MultiPoly.constant(self.nvars, other)
        if other.nvars != self.nvars:
            raise ValueError(
                f"variable count mismatch: {self.nvars} vs {other.nvars}")
        return other

    def __add__(self, other):
        other = self._check(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MultiPoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        out = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return MultiPoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def leading_term(self):
        """Lexicographically largest exponent and its coefficient."""
        e = max(self._terms)
        return e, self._terms[e]

    def exact_div(self, other):
        """Quotient of an exact division; raises ArithmeticError otherwise."""
        other = self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        le, lc = other.leading_term()
        rem = self
        quot = {}
        while rem:
            e, c = rem.leading_term()
            diff = tuple(a - b for a, b in zip(e, le))
            if any(d < 0 for d in diff):
                raise ArithmeticError("division is not exact")
            q = Fraction(c, lc) if isinstance(c, int) and isinstance(lc, int) else c / lc
            if isinstance(q, Fraction) and q.denominator == 1:
                q = q.numerator
            quot[diff] = quot.get(diff, 0) + q
            rem = rem - MultiPoly(self.nvars, {diff: q}) * other
        return MultiPoly(self.nvars, quot)

    def __call__(self, point):
        return self.eval(point)

    def eval(self, point):
        """Exact value at a point (sequence of ints/Fractions)."""
        if len(point) != self.nvars:
            raise ValueError(
                f"point has {len(point)} coordinates, polynomial has {self.nvars} variables")
        total = 0
        for exps, c in self._terms.items():
            v = c
            for x, e in zip(point, exps):
                if e:
                    v *= x ** e
            total += v
        return total

    def subs(self, values):
        """Substitute ``{index: value}``; the variable count is kept."""
        out = {}
        for exps, c in self._terms.items():
            v = c
            ne = list(exps)
            for i, val in values.items():
                if ne[i]:
                    v *= val ** ne[i]
                    ne[i] = 0
            if v:
                key = tuple(ne)
                s = out.get(key, 0) + v
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return MultiPoly(self.nvars, out)

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for exps in sorted(self._terms, reverse=True):
            c = self._terms[exps]
            mono = "*".join(
                f"x{i}" if e == 1 else f"x{i}^{e}"
                for i, e in enumerate(exps) if e)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def poly_det(matrix):
    """Determinant of a square matrix of MultiPoly by fraction-free elimination."""
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix")
    nvars = matrix[0][0].nvars
    m = [list(row) for row in matrix]
    sign = 1
    prev = MultiPoly.constant(nvars, 1)
    for k in range(n - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return MultiPoly(nvars)
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (pivot * m[i][j] - m[i][k] * m[k][j]).exact_div(prev)
            m[i][k] = MultiPoly(nvars)
        prev = pivot
    return m[n - 1][n - 1] if sign > 0 else -m[n - 1][n - 1]


def poly_rank(matrix):
    """Rank over the fraction field of a matrix of MultiPoly entries."""
    rows = [list(r) for r in matrix]
    if not rows:
        return 0
    nvars = rows[0][0].nvars
    nrows, ncols = len(rows), len(rows[0])
    prev = MultiPoly.constant(nvars, 1)
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if not rows[i][c].is_zero()), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                rows[i][j] = (p * rows[i][j] - rows[i][c] * rows[r][j]).exact_div(prev)
            rows[i][c] = MultiPoly(nvars)
        prev = p
        r += 1
    return r


# ---------------------------------------------------------------------------
# univariate polynomials over Q (dense)


class UPoly:
    """Dense univariate polynomial with Fraction coefficients, low degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def from_multipoly(cls, p, var=0):
        """Univariate polynomial from a MultiPoly that only involves ``var``."""
        out = {}
        for exps, c in p.items():
            if any(e for i, e in enumerate(exps) if i != var):
                raise ValueError("polynomial involves more than one variable")
            out[exps[var]] = c
        deg = max(out, default=-1)
        return cls(out.get(i, 0) for i in range(deg + 1))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        if isinstance(other, UPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return UPoly(x + y for x, y in zip(a, b))

    def __neg__(self):
        return UPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not self.coeffs or not other.coeffs:
            return UPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UPoly(out)

    def monic(self):
        if not self.coeffs:
            return self
        lc = self.coeffs[-1]
        return UPoly(c / lc for c in self.coeffs)

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return UPoly(), self
        quot = [Fraction(0)] * (dq + 1)
        lc = other.coeffs[-1]
        for k in range(dq, -1, -1):
            q = rem[k + len(other.coeffs) - 1] / lc
            quot[k] = q
            if q:
                for j, c in enumerate(other.coeffs):
                    rem[k + j] -= q * c
        return UPoly(quot), UPoly(rem[:len(other.coeffs) - 1])

    def __call__(self, x):
        v = Fraction(0)
        for c in reversed(self.coeffs):
            v = v * x + c
        return v

    def __repr__(self):
        if not self.coeffs:
            return "UPoly(0)"
        return f"UPoly({[str(c) for c in self.coeffs]})"


def upoly_gcd(f, g):
    """Monic gcd of two univariate polynomials over Q."""
    if not isinstance(f, UPoly):
        f = UPoly(f)
    if not isinstance(g, UPoly):
        g = UPoly(g)
    if f.is_zero() and g.is_zero():
        raise ValueError("gcd of two zero polynomials is undefined")
    while not g.is_zero():
        f, g = g, f.divmod(g)[1]
    return f.monic()


# ---------------------------------------------------------------------------
# prime fields


class PrimeField:
    """The field of integers modulo a prime ``p``; elements are ints in [0, p)."""

    __slots__ = ("p",)

    def __init__(self, p):
        p = int(p)
        if p >= 2 ** 32:
            raise ValueError("modulus too large for trial-division primality check")
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __call__(self, x):
        """Canonical image of an int (or Fraction with unit denominator mod p)."""
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator of {x} vanishes mod {self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def add(self, x, y):
        return (x + y) % self.p

    def sub(self, x, y):
        return (x - y) % self.p

    def mul(self, x, y):
        return x * y % self.p

    def neg(self, x):
        return -x % self.p

    def inv(self, x):
        if x % self.p == 0:
            raise ZeroDivisionError("zero has no inverse")
        return pow(x, -1, self.p)

    def elements(self):
        return range(self.p)

    def rank(self, matrix):
        """Rank of an integer matrix reduced mod p."""
        p = self.p
        m = [[self(x) for x in row] for row in matrix]
        if not m:
            return 0
        ncols = len(m[0])
        r = 0
        for c in range(ncols):
            piv = next((i for i in range(r, len(m)) if m[i][c]), None)
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            inv = pow(m[r][c], -1, p)
            m[r] = [x * inv % p for x in m[r]]
            for i in range(len(m)):
                if i != r and m[i][c]:
                    f = m[i][c]
                    m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
            r += 1
            if r == len(m):
                break
        return r


# ---------------------------------------------------------------------------
# exact ranks


def integer_rows(matrix):
    """Scale each row of a rational matrix to a primitive integer row."""
    out = []
    for row in matrix:
        den = 1
        for x in row:
            if isinstance(x, Fraction):
                den = lcm(den, x.denominator)
        ints = [int(x * den) for x in row]
        g = 0
        for x in ints:
            g = gcd(g, x)
        if g > 1:
            ints = [x // g for x in ints]
        out.append(ints)
    return out


def rank_exact(matrix):
    """Rank over Q by Bareiss fraction-free elimination."""
    m = integer_rows(matrix)
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        rowr = m[r]
        for i in range(r + 1, nrows):
            rowi = m[i]
            f = rowi[c]
            if f:
                m[i] = [(p * x - f * y) // prev for x, y in zip(rowi, rowr)]
            else:
                m[i] = [p * x // prev for x in rowi]
        prev = p
        r += 1
    return r


def rank_mod_p_batch(mats, p):
    """Ranks mod ``p`` of a stack of integer matrices, shape (N, rows, cols).

    Vectorized Gauss-Jordan elimination; every matrix keeps its own pivot row.
    Requires p < 2**16 so products fit in int64.
    """
    if p >= 2 ** 16:
        raise ValueError("batched elimination needs p < 2**16")
    mats = np.asarray(mats, dtype=np.int64) % p
    if mats.ndim != 3:
        raise ValueError("expected a 3-dimensional stack of matrices")
    n, nrows, ncols = mats.shape
    m = mats.copy()
    rank = np.zeros(n, dtype=np.int64)
    inv_table = np.zeros(p, dtype=np.int64)
    inv_table[1:] = [pow(x, -1, p) for x in range(1, p)]
    rows = np.arange(nrows)
    for c in range(ncols):
        cand = (m[:, :, c] != 0) & (rows[None, :] >= rank[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        sel = np.nonzero(has)[0]
        piv = cand[sel].argmax(axis=1)
        tgt = rank[sel]
        prow = m[sel, piv].copy()
        m[sel, piv] = m[sel, tgt]
        m[sel, tgt] = prow
        prow = prow * inv_table[prow[:, c]][:, None] % p
        m[sel, tgt] = prow
        factors = m[sel, :, c].copy()
        factors[np.arange(len(sel)), tgt] = 0
        m[sel] = (m[sel] - factors[:, :, None] * prow[:, None, :]) % p
        rank[sel] += 1
    return rank
