"""Explicit constant-rank spaces."""

from dataclasses import dataclass
from math import factorial, gcd

from .pencil import MatrixSpace, SymbolicCharts, verify_constant_rank

__all__ = [
    "banded",
    "embedded",
    "skew3",
    "westwick5",
    "sl2_skew_pencil",
    "skew_search_candidate",
    "SkewSearchOutcome",
    "from_forms",
]


def _parse_form(text, nvars):
    """'x0', '-x2', '3*x1', '0' -> coefficient vector."""
    coeffs = [0] * nvars
    text = text.replace(" ", "")
    if text in ("", "0"):
        return coeffs
    for term in text.replace("-", "+-").split("+"):
        if not term:
            continue
        sign = -1 if term.startswith("-") else 1
        term = term.lstrip("-")
        if "*" in term:
            c, var = term.split("*")
            c = int(c)
        else:
            c, var = 1, term
        if not var.startswith("x"):
            raise ValueError(f"cannot parse linear form {text!r}")
        coeffs[int(var[1:])] += sign * c
    return coeffs


def from_forms(rows, nvars, name=None):
    """MatrixSpace from a matrix written as linear forms, e.g. [['x0', '-x1']]."""
    forms = [[_parse_form(e, nvars) for e in row] for row in rows]
    a, b = len(forms), len(forms[0])
    basis = tuple(
        tuple(tuple(forms[i][j][k] for j in range(b)) for i in range(a))
        for k in range(nvars))
    return MatrixSpace(a, b, nvars - 1, basis, name)


def banded(a, b, n):
    """The b x a pencil whose row i carries x_0..x_n in columns i..i+n.

    Surjective at every point, so of constant rank b.
    """
    if b < 1 or n < 0 or a != b + n:
        raise ValueError(f"banded needs a = b + n with b >= 1, n >= 0; got a={a}, b={b}, n={n}")
    basis = []
    for k in range(n + 1):
        basis.append(tuple(
            tuple(1 if j == i + k else 0 for j in range(a)) for i in range(b)))
    return MatrixSpace(b, a, n, tuple(basis), f"banded({a},{b},{n})")


def embedded(r, a):
    """a x a pencil on P^(a-r) of constant rank r: banded(a, r, a-r) padded
    with a-r zero rows."""
    if not 1 <= r <= a:
        raise ValueError(f"embedded needs 1 <= r <= a, got r={r}, a={a}")
    n = a - r
    band = banded(a, r, n)
    zero = tuple(0 for _ in range(a))
    basis = tuple(mat + (zero,) * (a - r) for mat in band.basis)
    return MatrixSpace(a, a, n, basis, f"embedded({r},{a})")


def skew3():
    """3 x 3 skew pencil on P^2 (cross product with x); constant rank 2."""
    return from_forms(
        [["0", "x2", "-x1"],
         ["-x2", "0", "x0"],
         ["x1", "-x0", "0"]],
        3, "skew3")


def westwick5():
    """5 x 5 pencil on P^2 of constant rank 4 whose image is uniform but not
    homogeneous; signs exactly as classically displayed."""
    return from_forms(
        [["0", "-x2", "0", "-x0", "0"],
         ["x2", "0", "0", "-x1", "-x0"],
         ["0", "0", "0", "-x2", "-x1"],
         ["x0", "x1", "x2", "0", "0"],
         ["0", "x0", "x1", "0", "0"]],
        3, "westwick5")


def sl2_skew_pencil(a):
    """J * (x0 E + x1 H + x2 F) on the a-dimensional irreducible sl2-module.

    For a = 2m+1 every non-zero element of sl2 acts with rank 2m (semisimple
    ones have a one-dimensional zero weight space, nilpotent ones are a single
    Jordan block).  J is the invariant symmetric form, so J X is skew.
    """
    if a < 3 or a % 2 == 0:
        raise ValueError("needs odd a >= 3")
    top = a - 1
    # basis e_i = u^(top-i) v^i
    E = [[0] * a for _ in range(a)]
    F = [[0] * a for _ in range(a)]
    H = [[0] * a for _ in range(a)]
    for i in range(a):
        if i >= 1:
            E[i - 1][i] = i
        if i + 1 < a:
            F[i + 1][i] = top - i
        H[i][i] = top - 2 * i
    j = [(-1) ** k * factorial(k) * factorial(top - k) for k in range(a)]

    def times_form(X):
        return [[j[k] * X[top - k][c] for c in range(a)] for k in range(a)]

    mats = [times_form(X) for X in (E, H, F)]
    g = 0
    for m in mats:
        for row in m:
            for x in row:
                g = gcd(g, x)
    mats = [tuple(tuple(x // g for x in row) for row in m) for m in mats]
    return MatrixSpace(a, a, 2, tuple(mats), f"sl2skew({a})")


@dataclass
class SkewSearchOutcome:
    a: int
    found: bool
    space: MatrixSpace = None
    certificate: object = None
    method: str = ""
    note: str = ""


def skew_search_candidate(a, search_fallback=True, seed=0):
    """A certified 3-dimensional space of a x a skew matrices of rank a-1.

    Tries the sl2 ansatz first and certifies it symbolically; if that fails
    and ``search_fallback`` is set, runs a random skew-symmetric search over
    F_p (certified over that field only).  Never raises on failure.
    """
    if a % 2 == 0 or not 3 <= a <= 9:
        raise ValueError(f"skew search needs odd a with 3 <= a <= 9, got {a}")
    if a == 3:
        S = skew3()
        cert = verify_constant_rank(S, 2, SymbolicCharts())
        return SkewSearchOutcome(a, cert.ok, S, cert, "skew3")
    S = sl2_skew_pencil(a)
    cert = verify_constant_rank(S, a - 1, SymbolicCharts())
    if cert.ok:
        return SkewSearchOutcome(a, True, S, cert, "sl2-ansatz")
    if not search_fallback:
        return SkewSearchOutcome(a, False, None, cert, "sl2-ansatz",
                                 "sl2 ansatz could not be certified")
    from .search import SearchSpec, search
    spec = SearchSpec(a=a, b=a, r=a - 1, dim=3, p=13, mode="random",
                      trials=2000, seed=seed, ansatz="skew-symmetric")
    report = search(spec)
    if report.witnesses:
        S, cert = report.witnesses[0]
        return SkewSearchOutcome(a, True, S, cert, "random-skew-F13",
                                 "certified over F_13 only")
    return SkewSearchOutcome(a, False, None, None, "random-skew-F13",
                             "search exhausted its trials without a witness")
