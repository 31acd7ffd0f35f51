"""Linear spaces of matrices and their constant-rank certificates.

A :class:`MatrixSpace` holds a basis M_0..M_n of integer a x b matrices and
stands for the pencil Psi(x) = sum x_i M_i of linear forms on P^n.  Psi(x)
acts on column vectors, so it is a map O(-1)^b -> O^a and its image sheaf
lives in O^a.

Certification has two halves.  The upper half (rank <= r everywhere) is the
identical vanishing of every (r+1)-minor, checked symbolically.  The lower
half (rank >= r everywhere) has three strategies: exhaustive enumeration of
P^n over a list of prime fields, random rational sampling, and a symbolic
chart cover that exhibits a constant r-minor on each stratum

    U_i = {x_0 = ... = x_{i-1} = 0, x_i = 1},   i = 0..n,

which together partition P^n.
"""

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

import numpy as np

from .exactmath import (
    MultiPoly,
    PrimeField,
    UPoly,
    poly_det,
    rank_exact,
    rank_mod_p_batch,
    upoly_gcd,
)

__all__ = [
    "MatrixSpace",
    "RankCertificate",
    "SplittingType",
    "LinePencil",
    "ExhaustivePrimes",
    "RandomRational",
    "SymbolicCharts",
    "NonConstantRankError",
    "DEFAULT_PRIMES",
    "evaluate",
    "rank_at",
    "psi_matrix",
    "projective_points",
    "count_projective_points",
    "verify_rank_upper",
    "find_rank_excess",
    "verify_rank_lower",
    "verify_constant_rank",
    "restrict_to_line",
    "kronecker_indices",
    "determinantal_degree",
    "line_splitting_type",
    "random_lines",
    "transpose_dual",
    "space_to_json",
    "space_from_json",
    "load_space",
    "save_space",
]

DEFAULT_PRIMES = (5, 7, 11, 13)


class NonConstantRankError(ValueError):
    """The pencil does not have the claimed constant rank along a line."""


def _is_exact_int(x):
    return isinstance(x, (int, np.integer)) and not isinstance(x, bool)


@dataclass(frozen=True)
class MatrixSpace:
    """Span of n+1 linearly independent integer a x b matrices."""

    a: int
    b: int
    n: int
    basis: tuple
    name: str = None

    def __post_init__(self):
        if self.a < 1 or self.b < 1 or self.n < 0:
            raise ValueError(f"bad dimensions a={self.a}, b={self.b}, n={self.n}")
        if len(self.basis) != self.n + 1:
            raise ValueError(
                f"expected {self.n + 1} basis matrices, got {len(self.basis)}")
        frozen = []
        for k, mat in enumerate(self.basis):
            if len(mat) != self.a or any(len(row) != self.b for row in mat):
                raise ValueError(f"basis matrix {k} is not {self.a} x {self.b}")
            for row in mat:
                for x in row:
                    if not _is_exact_int(x):
                        raise TypeError(f"basis entries must be integers, got {x!r}")
            frozen.append(tuple(tuple(int(x) for x in row) for row in mat))
        object.__setattr__(self, "basis", tuple(frozen))
        flat = [[x for row in mat for x in row] for mat in frozen]
        if rank_exact(flat) != self.n + 1:
            raise ValueError("basis matrices are linearly dependent over Q")

    @property
    def dim(self):
        return self.n + 1

    def with_name(self, name):
        return MatrixSpace(self.a, self.b, self.n, self.basis, name)

    def array(self):
        """Basis as an int64 array of shape (n+1, a, b)."""
        return np.array(self.basis, dtype=np.int64)

    def __str__(self):
        return format_pencil(self)


def format_pencil(S):
    """Printable matrix of linear forms."""
    psi = psi_matrix(S)
    cells = [[repr(e) for e in row] for row in psi]
    width = max(len(c) for row in cells for c in row)
    return "\n".join("[ " + "  ".join(c.rjust(width) for c in row) + " ]" for row in cells)


def _check_point(S, point):
    if len(point) != S.n + 1:
        raise ValueError(f"point needs {S.n + 1} coordinates, got {len(point)}")
    if all(x == 0 for x in point):
        raise ValueError("the zero vector is not a projective point")


def evaluate(S, point):
    """Psi(point) = sum point_i M_i as a list of rows."""
    _check_point(S, point)
    out = [[0] * S.b for _ in range(S.a)]
    for x, mat in zip(point, S.basis):
        if x:
            for i, row in enumerate(mat):
                for j, v in enumerate(row):
                    if v:
                        out[i][j] += x * v
    return out


def rank_at(S, point, field=None):
    """Exact rank of Psi(point) over Q, or over ``field`` (a PrimeField or prime)."""
    if field is None:
        return rank_exact(evaluate(S, point))
    if not isinstance(field, PrimeField):
        field = PrimeField(field)
    reduced = [field(x) for x in point]
    if not any(reduced):
        raise ValueError(f"point reduces to zero mod {field.p}")
    return field.rank(evaluate(S, reduced))


def psi_matrix(S):
    """Psi(x) as an a x b matrix of linear MultiPoly forms."""
    return [
        [MultiPoly.linear_form([S.basis[k][i][j] for k in range(S.n + 1)])
         for j in range(S.b)]
        for i in range(S.a)
    ]


# ---------------------------------------------------------------------------
# projective points over F_p


def count_projective_points(n, p):
    return (p ** (n + 1) - 1) // (p - 1)


def projective_points(n, p, chunk=1 << 16):
    """Yield arrays of normalized points of P^n(F_p) (first non-zero entry 1)."""
    for lead in range(n + 1):
        free = n - lead
        total = p ** free
        for start in range(0, total, chunk):
            idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
            pts = np.zeros((len(idx), n + 1), dtype=np.int64)
            pts[:, lead] = 1
            rem = idx
            for col in range(n, lead, -1):
                pts[:, col] = rem % p
                rem = rem // p
            yield pts


# ---------------------------------------------------------------------------
# upper bound: all (r+1)-minors vanish identically


def _support(S):
    rows = [i for i in range(S.a) if any(m[i][j] for m in S.basis for j in range(S.b))]
    cols = [j for j in range(S.b) if any(m[i][j] for m in S.basis for i in range(S.a))]
    return rows, cols


def _screen_points(S, count=8, seed=0x5EED):
    rng = random.Random(seed)
    pts = [tuple(1 for _ in range(S.n + 1))]
    for _ in range(count):
        pt = tuple(rng.randint(-9, 9) for _ in range(S.n + 1))
        if any(pt):
            pts.append(pt)
    return pts


def verify_rank_upper(S, r):
    """True iff every (r+1) x (r+1) minor of Psi(x) is the zero polynomial."""
    if not 0 <= r <= min(S.a, S.b):
        raise ValueError(f"rank {r} out of range for {S.a} x {S.b} matrices")
    rows, cols = _support(S)
    if min(len(rows), len(cols)) <= r:
        return True
    # one point of larger rank already exhibits a non-zero minor
    for pt in _screen_points(S):
        if rank_exact(evaluate(S, pt)) > r:
            return False
    psi = psi_matrix(S)
    for rs in combinations(rows, r + 1):
        for cs in combinations(cols, r + 1):
            if not poly_det([[psi[i][j] for j in cs] for i in rs]).is_zero():
                return False
    return True


def find_rank_excess(S, r):
    """A point where rank Psi > r, or None when the (r+1)-minors vanish.

    Every (r+1)-minor has degree r+1 in each variable, so if one is non-zero
    it is non-zero somewhere on the grid {0..r+1}^(n+1).
    """
    for pt in _screen_points(S):
        if rank_exact(evaluate(S, pt)) > r:
            return pt
    for pt in product(range(r + 2), repeat=S.n + 1):
        if any(pt) and rank_exact(evaluate(S, pt)) > r:
            return pt
    return None


# ---------------------------------------------------------------------------
# lower bound strategies


@dataclass(frozen=True)
class ExhaustivePrimes:
    primes: tuple = DEFAULT_PRIMES
    name = "exhaustive-primes"

    def __post_init__(self):
        ps = tuple(int(p) for p in self.primes)
        if not ps:
            raise ValueError("need at least one prime")
        for p in ps:
            PrimeField(p)
            if p >= 2 ** 16:
                raise ValueError(f"prime {p} too large for exhaustive enumeration")
        object.__setattr__(self, "primes", ps)


@dataclass(frozen=True)
class RandomRational:
    trials: int = 500
    seed: int = 0
    box: int = 20
    name = "random-rational"


@dataclass(frozen=True)
class SymbolicCharts:
    node_budget: int = 20000
    name = "symbolic-charts"


@dataclass
class RankCertificate:
    """Outcome of a constant-rank verification.

    ``status`` is "verified", "refuted" (a counterexample point is attached)
    or "inconclusive" (the symbolic chart search gave up; nothing disproved).
    """

    rank: int
    strategy: str
    status: str
    upper_proof: str
    lower_proof: dict
    soundness: str
    counterexample: dict = None
    primes: tuple = ()
    seed: int = None
    name: str = None

    @property
    def ok(self):
        return self.status == "verified"

    def to_dict(self):
        d = {
            "name": self.name,
            "rank": self.rank,
            "strategy": self.strategy,
            "status": self.status,
            "upper_proof": self.upper_proof,
            "lower_proof": self.lower_proof,
            "soundness": self.soundness,
            "primes": list(self.primes),
            "seed": self.seed,
        }
        if self.counterexample is not None:
            d["counterexample"] = self.counterexample
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _exhaustive_lower(S, r, primes, exact):
    basis = S.array()
    checked = {}
    for p in primes:
        count = 0
        for pts in projective_points(S.n, p):
            mats = np.einsum("pk,kab->pab", pts, basis) % p
            ranks = rank_mod_p_batch(mats, p)
            bad = ranks != r if exact else ranks < r
            if bad.any():
                k = int(np.argmax(bad))
                return False, {
                    "point": [int(x) for x in pts[k]],
                    "rank": int(ranks[k]),
                    "field": f"F_{p}",
                }, checked
            count += len(pts)
        checked[str(p)] = count
    return True, None, checked


def _random_lower(S, r, strat):
    rng = random.Random(strat.seed)
    done = 0
    while done < strat.trials:
        pt = [rng.randint(-strat.box, strat.box) for _ in range(S.n + 1)]
        if not any(pt):
            continue
        k = rank_exact(evaluate(S, pt))
        if k < r:
            return False, {"point": pt, "rank": k, "field": "Q"}
        done += 1
    return True, None


def _constant_pivot_minor(mat, r, budget):
    """Rows and columns of an r-minor whose elimination uses only non-zero
    constant pivots, found by depth-first search; None if the budget runs out."""
    nrows, ncols = len(mat), len(mat[0])
    nodes = [0]

    def search(m, rows_left, cols_left, chosen):
        if len(chosen) == r:
            return chosen
        nodes[0] += 1
        if nodes[0] > budget:
            return None
        for i in rows_left:
            for j in cols_left:
                e = m[i][j]
                if e.is_zero() or not e.is_constant():
                    continue
                c = e.constant_value()
                rl = [x for x in rows_left if x != i]
                cl = [y for y in cols_left if y != j]
                m2 = {k: dict(v) for k, v in m.items()}
                for k in rl:
                    f = m2[k][j]
                    if f.is_zero():
                        continue
                    q = f * (Fraction(1) / c)
                    for y in cl:
                        if not m[i][y].is_zero():
                            m2[k][y] = m2[k][y] - q * m[i][y]
                found = search(m2, rl, cl, chosen + [(i, j)])
                if found is not None:
                    return found
                if nodes[0] > budget:
                    return None
        return None

    start = {i: {j: mat[i][j] for j in range(ncols)} for i in range(nrows)}
    return search(start, list(range(nrows)), list(range(ncols)), [])


def _chart_lower(S, r, strat):
    if r == 0:
        return True, []
    psi = psi_matrix(S)
    witnesses = []
    for i in range(S.n + 1):
        values = {k: 0 for k in range(i)}
        values[i] = 1
        sub = [[e.subs(values) for e in row] for row in psi]
        pivots = _constant_pivot_minor(sub, r, strat.node_budget)
        if pivots is None:
            return False, witnesses
        rs = sorted(p[0] for p in pivots)
        cs = sorted(p[1] for p in pivots)
        det = poly_det([[sub[x][y] for y in cs] for x in rs])
        if not det.is_constant() or det.is_zero():
            return False, witnesses
        v = det.constant_value()
        witnesses.append({"stratum": i, "rows": rs, "cols": cs, "minor": str(v)})
    return True, witnesses


def verify_rank_lower(S, r, strategy, exact=False):
    """Check rank >= r at every point by the given strategy.

    Returns ``(status, lower_proof, soundness, counterexample)``.  With
    ``exact`` the exhaustive strategy demands rank == r at each point, which
    over a prime field is a complete proof of constant rank on its own.
    """
    if isinstance(strategy, ExhaustivePrimes):
        ok, bad, checked = _exhaustive_lower(S, r, strategy.primes, exact)
        proof = {"kind": strategy.name, "primes": list(strategy.primes),
                 "points_checked": checked}
        if ok:
            return "verified", proof, "proved-over-listed-prime-fields", None
        return "refuted", proof, "none", bad
    if isinstance(strategy, RandomRational):
        ok, bad = _random_lower(S, r, strategy)
        proof = {"kind": strategy.name, "trials": strategy.trials,
                 "seed": strategy.seed, "box": strategy.box}
        if ok:
            return "verified", proof, "probabilistic", None
        return "refuted", proof, "none", bad
    if isinstance(strategy, SymbolicCharts):
        ok, witnesses = _chart_lower(S, r, strategy)
        proof = {"kind": strategy.name, "witnesses": witnesses}
        if ok:
            return "verified", proof, "proved-over-Q", None
        return "inconclusive", proof, "none", None
    raise TypeError(f"unknown strategy {strategy!r}")


def verify_constant_rank(S, r, strategy=None, symbolic_upper=True):
    """Certify that every non-zero element of S has rank exactly r.

    With ``symbolic_upper=False`` the upper half is skipped and an exhaustive
    strategy checks rank == r pointwise instead; this is how spaces found over
    a prime field are certified over that field alone.
    """
    if strategy is None:
        strategy = ExhaustivePrimes()
    if not 0 <= r <= min(S.a, S.b):
        raise ValueError(f"rank {r} out of range for {S.a} x {S.b} matrices")
    primes = getattr(strategy, "primes", ())
    seed = getattr(strategy, "seed", None)
    upper = "none"
    if symbolic_upper:
        if not verify_rank_upper(S, r):
            pt = find_rank_excess(S, r)
            return RankCertificate(
                rank=r, strategy=strategy.name, status="refuted",
                upper_proof="none", lower_proof={"kind": "none"}, soundness="none",
                counterexample={"point": list(pt), "rank": rank_at(S, pt), "field": "Q"},
                primes=primes, seed=seed, name=S.name)
        upper = "symbolic-minors"
    elif not isinstance(strategy, ExhaustivePrimes):
        raise ValueError("skipping the symbolic upper bound needs an exhaustive strategy")
    status, proof, soundness, bad = verify_rank_lower(
        S, r, strategy, exact=not symbolic_upper)
    return RankCertificate(
        rank=r, strategy=strategy.name, status=status, upper_proof=upper,
        lower_proof=proof, soundness=soundness, counterexample=bad,
        primes=primes, seed=seed, name=S.name)


# ---------------------------------------------------------------------------
# restriction to a line and splitting types


@dataclass(frozen=True)
class LinePencil:
    """Psi(s p + t q) = s * s_part + t * t_part, entries linear in (s, t)."""

    s_part: tuple
    t_part: tuple

    @property
    def shape(self):
        return len(self.s_part), len(self.s_part[0])

    def at(self, s, t):
        return [[s * x + t * y for x, y in zip(r1, r2)]
                for r1, r2 in zip(self.s_part, self.t_part)]

    def transpose(self):
        return LinePencil(tuple(zip(*self.s_part)), tuple(zip(*self.t_part)))

    def entry(self, i, j):
        """Entry (i, j) as a MultiPoly in the two variables (s, t)."""
        return MultiPoly.linear_form([self.s_part[i][j], self.t_part[i][j]])


def _as_rational(v):
    return tuple(Fraction(x) for x in v)


def restrict_to_line(S, p, q):
    """The pencil restricted to the line through projective points p and q."""
    p, q = _as_rational(p), _as_rational(q)
    if len(p) != S.n + 1 or len(q) != S.n + 1:
        raise ValueError("points have the wrong number of coordinates")
    if rank_exact([p, q]) < 2:
        raise ValueError("points do not span a line")
    A = evaluate(S, p)
    B = evaluate(S, q)
    return LinePencil(tuple(map(tuple, A)), tuple(map(tuple, B)))


def _normal_rank(line):
    m, k = line.shape
    return max(rank_exact(line.at(1, lam)) for lam in range(min(m, k) + 1))


def _column_indices(line, rho):
    """Column minimal indices of the pencil s A + t B.

    The polynomial kernel vectors of degree d form a space of dimension
    K_d = sum_{eps <= d} (d - eps + 1), so K_d - K_{d-1} counts indices <= d.
    """
    A, B = line.s_part, line.t_part
    m, k = line.shape
    want = k - rho
    indices = []
    prev_k, prev_count = 0, 0
    d = 0
    while len(indices) < want:
        if d > rho:
            raise ArithmeticError("minimal index search did not terminate")
        rows = []
        for blk in range(d + 2):
            for i in range(m):
                row = [0] * (k * (d + 1))
                if blk <= d:
                    row[blk * k:(blk + 1) * k] = A[i]
                if blk >= 1:
                    row[(blk - 1) * k:blk * k] = B[i]
                rows.append(row)
        kd = k * (d + 1) - rank_exact(rows)
        count = kd - prev_k
        indices.extend([d] * (count - prev_count))
        prev_k, prev_count = kd, count
        d += 1
    return indices


def kronecker_indices(line):
    """(column indices, row indices, normal rank, size of the regular part)."""
    rho = _normal_rank(line)
    eps = _column_indices(line, rho)
    eta = _column_indices(line.transpose(), rho)
    regular = rho - sum(eps) - sum(eta)
    return eps, eta, rho, regular


def determinantal_degree(line, k):
    """Degree of the homogeneous gcd of all k x k minors on the line.

    Computed on both charts t = 1 and s = 1; a minor f of degree k loses the
    factor t^(k - deg f(s, 1)) on the first chart, so the homogeneous degree is
    deg gcd_1 + min over minors of that loss, and symmetrically for s.
    Returns None when every k-minor vanishes.
    """
    m, n = line.shape
    g = [None, None]
    loss = [None, None]
    for rs in combinations(range(m), k):
        for cs in combinations(range(n), k):
            for chart in (0, 1):
                sub = [[_chart_entry(line, i, j, chart) for j in cs] for i in rs]
                f = UPoly.from_multipoly(poly_det(sub))
                if f.is_zero():
                    break
                g[chart] = f if g[chart] is None else upoly_gcd(g[chart], f)
                lost = k - f.degree
                loss[chart] = lost if loss[chart] is None else min(loss[chart], lost)
            if (g[0] is not None and g[0].degree == 0 and g[1].degree == 0
                    and loss[0] == 0 and loss[1] == 0):
                return 0
    if g[0] is None:
        return None
    d0 = g[0].degree + loss[0]
    d1 = g[1].degree + loss[1]
    if d0 != d1:
        raise ArithmeticError(f"chart degrees disagree: {d0} vs {d1}")
    return d0


def _chart_entry(line, i, j, chart):
    # chart 0: t = 1, variable s;  chart 1: s = 1, variable t
    a, b = line.s_part[i][j], line.t_part[i][j]
    if chart == 0:
        return MultiPoly(1, {(1,): a, (0,): b})
    return MultiPoly(1, {(0,): a, (1,): b})


@dataclass(frozen=True, order=True)
class SplittingType:
    """Multiset of degrees (a_1 >= ... >= a_r) of E|_L = sum O_L(a_i)."""

    entries: tuple

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(sorted(self.entries, reverse=True)))

    @classmethod
    def from_counts(cls, minus_ones, zeros):
        return cls((0,) * zeros + (-1,) * minus_ones)

    @property
    def rank(self):
        return len(self.entries)

    @property
    def c(self):
        """Number of -1 entries, i.e. c_1 of the cokernel."""
        return sum(1 for e in self.entries if e == -1)

    def counts(self):
        out = {}
        for e in self.entries:
            out[e] = out.get(e, 0) + 1
        return out

    def __str__(self):
        parts = []
        for e, k in sorted(self.counts().items()):
            parts.append(f"{e}^{k}" if k > 1 else str(e))
        return "(" + ", ".join(parts) + ")"


def line_splitting_type(S, r, p, q):
    """Splitting type of the image of Psi on the line through p and q.

    Along a line without rank drops the pencil's Kronecker form has only
    L_eps blocks (surjections O(-1)^(eps+1) -> O^eps, contributing eps zeros)
    and transposed L_eta blocks (injections O(-1)^eta -> O^(eta+1),
    contributing eta entries -1).
    """
    line = restrict_to_line(S, p, q)
    eps, eta, rho, regular = kronecker_indices(line)
    if rho != r:
        raise NonConstantRankError(
            f"generic rank on the line is {rho}, expected {r}")
    if regular:
        raise NonConstantRankError(
            f"rank drops at {regular} point(s) of the line (counted with multiplicity)")
    return SplittingType.from_counts(minus_ones=sum(eta), zeros=sum(eps))


def random_lines(n, count, seed=0, box=20):
    """Deterministic stream of ``count`` integer point pairs spanning lines in P^n."""
    if n < 1:
        raise ValueError("P^0 contains no lines")
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        p = tuple(rng.randint(-box, box) for _ in range(n + 1))
        q = tuple(rng.randint(-box, box) for _ in range(n + 1))
        if rank_exact([p, q]) == 2:
            out.append((p, q))
    return out


def transpose_dual(S):
    """Transpose every basis matrix: the dual sequence twisted by O(-1)."""
    name = None
    if S.name:
        name = S.name[:-2] if S.name.endswith("^T") else S.name + "^T"
    return MatrixSpace(
        S.b, S.a, S.n,
        tuple(tuple(zip(*mat)) for mat in S.basis),
        name)


# ---------------------------------------------------------------------------
# JSON interchange


def space_to_dict(S):
    d = {"a": S.a, "b": S.b, "n": S.n,
         "basis": [[x for row in mat for x in row] for mat in S.basis]}
    if S.name:
        d["name"] = S.name
    return d


def space_to_json(S):
    """Canonical text: one basis matrix (row-major) per line."""
    head = [f'"a": {S.a}', f'"b": {S.b}', f'"n": {S.n}']
    if S.name:
        head.append(f'"name": {json.dumps(S.name)}')
    rows = ",\n".join(
        "    " + json.dumps([x for row in mat for x in row]) for mat in S.basis)
    return "{\n  " + ",\n  ".join(head) + ',\n  "basis": [\n' + rows + "\n  ]\n}\n"


def _reject_float(s):
    raise ValueError(f"pencil files hold exact integers only, found {s}")


def space_from_json(text):
    d = json.loads(text, parse_float=_reject_float,
                   parse_constant=_reject_float)
    return space_from_dict(d)


def space_from_dict(d):
    for key in ("a", "b", "n", "basis"):
        if key not in d:
            raise ValueError(f"pencil JSON is missing {key!r}")
    a, b, n = d["a"], d["b"], d["n"]
    for key, v in (("a", a), ("b", b), ("n", n)):
        if not _is_exact_int(v):
            raise ValueError(f"{key} must be an integer")
    basis = []
    for flat in d["basis"]:
        if len(flat) != a * b:
            raise ValueError(f"basis entry has {len(flat)} values, expected {a * b}")
        for x in flat:
            if not _is_exact_int(x):
                raise ValueError(f"basis values must be integers, found {x!r}")
        basis.append(tuple(tuple(flat[i * b:(i + 1) * b]) for i in range(a)))
    return MatrixSpace(a, b, n, tuple(basis), d.get("name"))


def load_space(path):
    with open(path) as fh:
        return space_from_json(fh.read())


def save_space(S, path):
    with open(path, "w") as fh:
        fh.write(space_to_json(S))
