"""Chern polynomials in the truncated ring Z[h]/(h^(n+1)) and the obstructions
built from them.

A Chern polynomial on P^n is stored as its coefficient vector c_0..c_n.  The
truncation order travels with every value and binary operations refuse to mix
orders.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement

from .exactmath import binomial

__all__ = [
    "ChernPoly",
    "PsiParams",
    "Rank2Solutions",
    "cp_mul",
    "cp_inv",
    "cp_line_power",
    "chern_of_twisted_tangent",
    "kernel_chern",
    "rank2_cokernel_constraints",
    "schwarzenberger",
    "normalized_c2",
    "dim5_candidates",
    "dim5_congruence_member",
    "psi",
    "psi_from_chern",
    "psi_linear_condition",
    "psi_feasible_triples",
    "omega_kernel_obstruction",
]


@dataclass(frozen=True)
class ChernPoly:
    n: int
    coeffs: tuple

    def __post_init__(self):
        cs = tuple(int(c) for c in self.coeffs)
        if self.n < 0:
            raise ValueError("truncation order must be non-negative")
        if len(cs) > self.n + 1:
            raise ValueError(
                f"{len(cs)} coefficients do not fit in Z[h]/(h^{self.n + 1})")
        cs = cs + (0,) * (self.n + 1 - len(cs))
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def one(cls, n):
        return cls(n, (1,))

    def __getitem__(self, i):
        return self.coeffs[i]

    def __mul__(self, other):
        return cp_mul(self, other)

    def inverse(self):
        return cp_inv(self)

    def negate_h(self):
        """The substitution h -> -h (Chern polynomial of the dual bundle)."""
        return ChernPoly(self.n, tuple((-1) ** i * c for i, c in enumerate(self.coeffs)))

    def top_nonzero(self):
        """Largest i with c_i != 0, or -1 for the zero polynomial."""
        return max((i for i, c in enumerate(self.coeffs) if c), default=-1)

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("h" if i == 1 else f"h^{i}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}{mono}")
        return (" + ".join(parts) or "0").replace("+ -", "- ")


def _same_order(x, y):
    if x.n != y.n:
        raise ValueError(f"truncation order mismatch: P^{x.n} vs P^{y.n}")


def cp_mul(x, y):
    _same_order(x, y)
    n = x.n
    out = [0] * (n + 1)
    for i, a in enumerate(x.coeffs):
        if a:
            for j in range(n + 1 - i):
                out[i + j] += a * y.coeffs[j]
    return ChernPoly(n, out)


def cp_inv(x):
    """Multiplicative inverse of a Chern polynomial (c_0 must be 1)."""
    if x.coeffs[0] != 1:
        raise ValueError(f"only polynomials with c_0 = 1 are invertible here, got c_0 = {x.coeffs[0]}")
    n = x.n
    y = [1] + [0] * n
    for k in range(1, n + 1):
        y[k] = -sum(x.coeffs[i] * y[k - i] for i in range(1, k + 1))
    return ChernPoly(n, y)


def cp_line_power(e, a, n):
    """(1 + e h)^a, i.e. the Chern polynomial of a copies of O(e)."""
    if a < 0:
        raise ValueError("exponent must be non-negative")
    return ChernPoly(n, [binomial(a, i) * e ** i for i in range(n + 1)])


def _inverse_line(e, n):
    # (1 + e h)^-1 = sum (-e)^i h^i
    return ChernPoly(n, [(-e) ** i for i in range(n + 1)])


def chern_of_twisted_tangent(n, twist, dual=False):
    """C(T(twist)) on P^n, or C(Omega(twist)) when ``dual`` is set.

    From the Euler sequences 0 -> O(t) -> O(t+1)^(n+1) -> T(t) -> 0 and
    0 -> Omega(t) -> O(t-1)^(n+1) -> O(t) -> 0.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    shift = -1 if dual else 1
    return cp_line_power(twist + shift, n + 1, n) * _inverse_line(twist, n)


def kernel_chern(cE, a):
    """C(F) = C(E) (1 - h)^a for the kernel F of a.O(-1) -> b.O with cokernel E."""
    if cE.coeffs[0] != 1:
        raise ValueError("a Chern polynomial must have c_0 = 1")
    return cE * cp_line_power(-1, a, cE.n)


# ---------------------------------------------------------------------------
# rank-two cokernels: l(a-2; a)


@dataclass(frozen=True)
class Rank2Solutions:
    """Integer pairs (t1, t2) making h^3..h^n of (1 + t1 h + t2 h^2)(1-h)^a vanish.

    For n >= 4 the set is finite and listed in ``pairs``.  For n = 3 it is the
    infinite family t2 = (a-1)(3 t1 - a + 2)/6 restricted to t1 in the residue
    classes ``t1_residues`` mod 6.
    """

    a: int
    n: int
    pairs: frozenset = frozenset()
    t1_residues: tuple = ()

    @property
    def infinite(self):
        return self.n == 3 and bool(self.t1_residues)

    def is_empty(self):
        return not self.pairs and not self.t1_residues

    def t2_for(self, t1):
        return Fraction((self.a - 1) * (3 * t1 - self.a + 2), 6)

    def __contains__(self, pair):
        t1, t2 = pair
        if self.n == 3:
            return t1 % 6 in self.t1_residues and self.t2_for(t1) == t2
        return (t1, t2) in self.pairs


def rank2_cokernel_constraints(a, n):
    """Solve the vanishing of h^3..h^n in (1 + t1 h + t2 h^2)(1-h)^a.

    Coefficient by coefficient: h^3 fixes t2 in terms of t1, h^4 fixes t1,
    higher coefficients are then checked directly.
    """
    if a < 3 or n < 3:
        raise ValueError("need a >= 3 and n >= 3")
    # coefficient k:  B_k + t1 B_{k-1} + t2 B_{k-2},  B_k = (-1)^k C(a, k)
    B = [(-1) ** k * binomial(a, k) for k in range(n + 1)]
    # h^3 gives t2 = alpha * t1 + beta
    alpha = Fraction(-B[2], B[1])
    beta = Fraction(-B[3], B[1])
    if n == 3:
        residues = tuple(
            r for r in range(6) if (alpha * r + beta).denominator == 1)
        return Rank2Solutions(a, n, t1_residues=residues)
    # h^4: B4 + t1 B3 + (alpha t1 + beta) B2 = 0
    lin = B[3] + alpha * B[2]
    const = B[4] + beta * B[2]
    if lin == 0:
        raise ArithmeticError("degenerate h^4 equation")
    t1 = -const / lin
    t2 = alpha * t1 + beta
    if t1.denominator != 1 or t2.denominator != 1:
        return Rank2Solutions(a, n)
    t1, t2 = int(t1), int(t2)
    c = kernel_chern(ChernPoly(n, (1, t1, t2)), a)
    if any(c[k] for k in range(3, n + 1)):
        return Rank2Solutions(a, n)
    return Rank2Solutions(a, n, pairs=frozenset({(t1, t2)}))


def schwarzenberger(c2):
    """Integrality condition c2 (c2 + 1) = 0 mod 12 for rank 2 on P^4 with c1 = 0."""
    return c2 * (c2 + 1) % 12 == 0


def normalized_c2(a):
    """c2 of the rank-2 cokernel after twisting to c1 = 0, for a = 2, 10 mod 12.

    Uses t1 = (a-2)/2 and t2 = (a-1)(a-2)/12; twisting by -t1/2 gives
    c2' = t2 - (t1/2)^2.
    """
    sol = rank2_cokernel_constraints(a, 4)
    if sol.is_empty():
        return None
    (t1, t2), = sol.pairs
    if t1 % 2:
        return None
    return t2 - (t1 // 2) ** 2


def dim5_candidates(max_a):
    """All 3 <= a <= max_a for which l(a-2; a) = 5 survives the P^4 constraints."""
    if max_a < 3:
        raise ValueError("need max_a >= 3")
    out = []
    for a in range(3, max_a + 1):
        if a % 12 not in (2, 10):
            continue
        c2 = normalized_c2(a)
        if c2 is not None and schwarzenberger(c2):
            out.append(a)
    return out


def dim5_congruence_member(a):
    """Closed-form membership: a = 12m+2 with m = 0,5,8,9 mod 12, or
    a = 12m+10 with m = 2,3,6,11 mod 12 (a >= 3)."""
    if a < 3:
        return False
    if a % 12 == 2:
        return (a - 2) // 12 % 12 in (0, 5, 8, 9)
    if a % 12 == 10:
        return (a - 10) // 12 % 12 in (2, 3, 6, 11)
    return False


# ---------------------------------------------------------------------------
# the cubic psi for rank-3 kernels on P^4


@dataclass(frozen=True)
class PsiParams:
    a: int
    s: int
    d: int
    t: int
    triple: tuple = field(default=None, compare=False)

    @classmethod
    def from_triple(cls, a, f):
        f1, f2, f3 = f
        return cls(a, f1 + f2 + f3, f1 * f2 + f1 * f3 + f2 * f3, f1 * f2 * f3,
                   tuple(sorted(f)))


def psi(p):
    a, s, d, t = p.a, p.s, p.d, p.t
    return (a ** 3 - a ** 2 * (4 * s + 6) + a * (12 * d + 12 * s + 11)
            - 12 * d - 8 * s - 24 * t - 6)


def psi_from_chern(p):
    """24 c4((1+h)^a (1 - s h + d h^2 - t h^3)) / a, computed in the Chern ring.

    Independent route to ``psi`` (valid for a != 0).
    """
    cF1 = ChernPoly(4, (1, -p.s, p.d, -p.t))
    c4 = (cp_line_power(1, p.a, 4) * cF1)[4]
    return Fraction(24 * c4, p.a)


def psi_linear_condition(a, s):
    """For fixed a and s, psi = 0 reads  u*d - v*t = w ; returned reduced by gcd.

    Returns (u, v, w, solvable_in_integers).
    """
    from math import gcd
    u = 12 * a - 12
    v = 24
    w = -(a ** 3 - a ** 2 * (4 * s + 6) + a * (12 * s + 11) - 8 * s - 6)
    g = gcd(u, v)
    return u // g, v // g, Fraction(w, g), w % g == 0


def psi_feasible_triples(a, s_min, s_max):
    """Sorted non-negative triples f1 <= f2 <= f3 with s_min <= sum <= s_max
    and psi(a) = 0."""
    if not 0 <= s_min <= s_max:
        raise ValueError("need 0 <= s_min <= s_max")
    found = []
    for f in combinations_with_replacement(range(s_max + 1), 3):
        if s_min <= sum(f) <= s_max and psi(PsiParams.from_triple(a, f)) == 0:
            found.append(f)
    return sorted(found)


# ---------------------------------------------------------------------------


def omega_kernel_obstruction(n, a):
    """Coefficients of h^(n-1) and h^n in (1+h)(1-h)^a on P^n."""
    if n < 2 or a < n:
        raise ValueError("need n >= 2 and a >= n")
    c = cp_mul(ChernPoly(n, (1, 1)), cp_line_power(-1, a, n))
    return c[n - 1], c[n]
