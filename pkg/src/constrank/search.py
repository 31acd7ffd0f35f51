"""Search for constant-rank subspaces over small prime fields.

Subspaces are enumerated once each through their reduced row echelon basis
in coordinates of an ambient space of matrices.  The echelon basis is grown
from its last row upward: every partial stack of rows is itself the reduced
echelon basis of a subspace, so a stack that already fails constant rank is
pruned with everything above it.

Results are statements about F_p.  Nothing here is promoted to a claim over
an algebraically closed field of characteristic zero.
"""

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
import heapq

import numpy as np

from .constructions import embedded
from .exactmath import PrimeField, rank_mod_p_batch
from .pencil import (
    ExhaustivePrimes,
    MatrixSpace,
    space_to_dict,
    verify_constant_rank,
)

__all__ = [
    "SearchSpec",
    "SearchReport",
    "CeilingExceeded",
    "ambient_basis",
    "gaussian_binomial",
    "search",
    "max_dim_over_Fp",
    "MaxDimResult",
]

DEFAULT_CEILING = 5_000_000
ANSATZE = ("general", "skew-symmetric", "banded-pattern")


class CeilingExceeded(RuntimeError):
    """Exhaustive enumeration would exceed the configured ceiling."""


@dataclass(frozen=True)
class SearchSpec:
    a: int
    b: int
    r: int
    dim: int
    p: int
    mode: str = "exhaustive"
    trials: int = 1000
    seed: int = 0
    ansatz: str = "general"
    ceiling: int = DEFAULT_CEILING
    limit: int = 10

    def __post_init__(self):
        PrimeField(self.p)
        if self.dim < 1:
            raise ValueError("dim must be at least 1")
        if not 0 <= self.r <= min(self.a, self.b):
            raise ValueError("rank out of range")
        if self.mode not in ("exhaustive", "random"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.ansatz not in ANSATZE:
            raise ValueError(f"unknown ansatz {self.ansatz!r}")
        if self.ansatz == "skew-symmetric" and self.a != self.b:
            raise ValueError("skew-symmetric ansatz needs square matrices")
        if self.p >= 2 ** 16:
            raise ValueError("prime too large")


def ambient_basis(a, b, ansatz):
    """Coordinate matrices of the ambient space, shape (N, a, b)."""
    mats = []
    if ansatz == "general":
        cells = [(i, j) for i in range(a) for j in range(b)]
        for i, j in cells:
            m = np.zeros((a, b), dtype=np.int64)
            m[i, j] = 1
            mats.append(m)
    elif ansatz == "skew-symmetric":
        for i in range(a):
            for j in range(i + 1, a):
                m = np.zeros((a, a), dtype=np.int64)
                m[i, j] = 1
                m[j, i] = -1
                mats.append(m)
    else:
        # support of the banded construction: 0 <= j - i <= b - a (or i - j for a > b)
        w = abs(b - a)
        for i in range(a):
            for j in range(b):
                off = j - i if b >= a else i - j
                if 0 <= off <= w:
                    m = np.zeros((a, b), dtype=np.int64)
                    m[i, j] = 1
                    mats.append(m)
    return np.array(mats, dtype=np.int64).reshape(len(mats), a, b)


def gaussian_binomial(N, k, p):
    """Number of k-dimensional subspaces of F_p^N."""
    if k < 0 or k > N:
        return 0
    num = den = 1
    for i in range(k):
        num *= p ** (N - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


@dataclass
class SearchReport:
    spec: SearchSpec
    ambient_dim: int
    enumeration_count: int
    nodes: int
    found_count: int
    complete: bool
    witnesses: list = field(default_factory=list)

    @property
    def exists(self):
        return self.found_count > 0

    @property
    def field_note(self):
        return (f"result over F_{self.spec.p} only; not a statement over an "
                "algebraically closed field of characteristic 0")

    def to_dict(self):
        return {
            "spec": asdict(self.spec),
            "field": f"F_{self.spec.p}",
            "field_note": self.field_note,
            "ambient_dim": self.ambient_dim,
            "enumeration_count": self.enumeration_count,
            "nodes": self.nodes,
            "found_count": self.found_count,
            "exists": self.exists,
            "complete": self.complete,
            "witnesses": [
                {"space": space_to_dict(S), "certificate": cert.to_dict()}
                for S, cert in self.witnesses],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


# ---------------------------------------------------------------------------
# exhaustive enumeration


def _candidate_rows(N, pivot, fixed_zero, p):
    """All vectors with 1 at ``pivot``, 0 before it and at ``fixed_zero``."""
    free = [c for c in range(pivot + 1, N) if c not in fixed_zero]
    count = p ** len(free)
    vecs = np.zeros((count, N), dtype=np.int64)
    vecs[:, pivot] = 1
    idx = np.arange(count, dtype=np.int64)
    for c in reversed(free):
        vecs[:, c] = idx % p
        idx //= p
    return vecs


def _span_ok(vecs, span, amb, r, p):
    """Mask of rows w in ``vecs`` such that every w + u (u in span) has rank r."""
    a, b = amb.shape[1:]
    W = np.einsum("vn,nab->vab", vecs, amb) % p
    mats = (W[:, None, :, :] + span[None, :, :, :]) % p
    ranks = rank_mod_p_batch(mats.reshape(-1, a, b), p).reshape(len(vecs), len(span))
    return (ranks == r).all(axis=1), W


def _extend_span(span, W, p):
    """span + {lambda W : lambda in F_p^*}, keeping lambda = 0 first."""
    parts = [span] + [(span + lam * W[None]) % p for lam in range(1, p)]
    return np.concatenate(parts)


def _key(rows):
    return tuple(int(x) for row in sorted(rows, key=lambda v: tuple(v)) for x in row)


def _dfs_worker(args):
    spec, first_rows = args
    amb = ambient_basis(spec.a, spec.b, spec.ansatz)
    N = len(amb)
    p, r = spec.p, spec.r
    zero = np.zeros((1, spec.a, spec.b), dtype=np.int64)
    nodes = 0
    found = 0
    best = []  # max-heap on key via negation of order: store (neg-key surrogate)

    def record(rows):
        nonlocal found
        found += 1
        key = _key(rows)
        if len(best) < spec.limit:
            heapq.heappush(best, _Rev(key, rows))
        elif key < best[0].key:
            heapq.heapreplace(best, _Rev(key, rows))

    def grow(rows, pivots, span):
        nonlocal nodes
        if len(rows) == spec.dim:
            record(rows)
            return
        low = min(pivots)
        need = spec.dim - len(rows) - 1
        for pivot in range(need, low):
            cands = _candidate_rows(N, pivot, set(pivots), p)
            nodes += len(cands)
            ok, W = _span_ok(cands, span, amb, r, p)
            for idx in np.nonzero(ok)[0]:
                new_span = _extend_span(span, W[idx], p)
                grow(rows + [cands[idx]], pivots + [pivot], new_span)

    for vec, pivot in first_rows:
        W = np.einsum("n,nab->ab", vec, amb) % p
        grow([vec], [pivot], _extend_span(zero, W, p))
    return nodes, found, [(item.key, item.rows) for item in best]


class _Rev:
    """Heap item ordered so the largest key sits on top."""

    __slots__ = ("key", "rows")

    def __init__(self, key, rows):
        self.key = key
        self.rows = rows

    def __lt__(self, other):
        return self.key > other.key


def _first_rows(spec, amb):
    N = len(amb)
    out = []
    zero = np.zeros((1, spec.a, spec.b), dtype=np.int64)
    nodes = 0
    for pivot in range(spec.dim - 1, N):
        cands = _candidate_rows(N, pivot, set(), spec.p)
        nodes += len(cands)
        ok, _ = _span_ok(cands, zero, amb, spec.r, spec.p)
        out.extend((cands[i], pivot) for i in np.nonzero(ok)[0])
    return out, nodes


def _run(tasks, workers):
    if workers <= 1:
        return [_dfs_worker(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_dfs_worker, tasks))


def _to_space(rows, spec, amb):
    p = spec.p
    mats = []
    for vec in rows:
        m = np.einsum("n,nab->ab", vec, amb) % p
        m = np.where(m > p // 2, m - p, m)
        mats.append(tuple(tuple(int(x) for x in row) for row in m))
    # stored in echelon order (pivot ascending)
    S = MatrixSpace(spec.a, spec.b, len(mats) - 1, tuple(mats),
                    f"F{p}-{spec.ansatz}-r{spec.r}-dim{spec.dim}")
    cert = verify_constant_rank(S, spec.r, ExhaustivePrimes((p,)), symbolic_upper=False)
    return S, cert


def _exhaustive(spec, workers):
    amb = ambient_basis(spec.a, spec.b, spec.ansatz)
    N = len(amb)
    count = gaussian_binomial(N, spec.dim, spec.p)
    if count > spec.ceiling:
        raise CeilingExceeded(
            f"{count} subspaces of dimension {spec.dim} in F_{spec.p}^{N} "
            f"exceed the ceiling {spec.ceiling}")
    if spec.dim > N:
        return SearchReport(spec, N, 0, 0, 0, True)
    first, nodes = _first_rows(spec, amb)
    parts = max(1, workers)
    tasks = [(spec, first[k::parts]) for k in range(parts)]
    results = _run(tasks, workers)
    found = 0
    keyed = []
    for n_nodes, n_found, best in results:
        nodes += n_nodes
        found += n_found
        keyed.extend(best)
    keyed.sort(key=lambda kv: kv[0])
    witnesses = []
    for _, rows in keyed[:spec.limit]:
        ordered = sorted(rows, key=lambda v: int(np.argmax(v != 0)))
        witnesses.append(_to_space(ordered, spec, amb))
    return SearchReport(spec, N, count, nodes, found, True, witnesses)


# ---------------------------------------------------------------------------
# random sampling


def _rref_mod_p(vecs, p):
    m = [list(int(x) % p for x in v) for v in vecs]
    N = len(m[0])
    r = 0
    for c in range(N):
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
    return [np.array(row, dtype=np.int64) for row in m[:r]]


def _random_worker(args):
    spec, trial_ids = args
    amb = ambient_basis(spec.a, spec.b, spec.ansatz)
    N = len(amb)
    p = spec.p
    zero = np.zeros((1, spec.a, spec.b), dtype=np.int64)
    hits = {}
    for t in trial_ids:
        rng = np.random.default_rng([spec.seed, t])
        vecs = rng.integers(0, p, size=(spec.dim, N))
        rows = _rref_mod_p(vecs, p)
        if len(rows) < spec.dim:
            continue
        span = zero
        ok = True
        for vec in rows:
            good, W = _span_ok(vec[None, :], span, amb, spec.r, p)
            if not good[0]:
                ok = False
                break
            span = _extend_span(span, W[0], p)
        if ok:
            key = _key(rows)
            hits.setdefault(key, rows)
    return hits


def _random(spec, workers):
    amb = ambient_basis(spec.a, spec.b, spec.ansatz)
    N = len(amb)
    parts = max(1, workers)
    ids = list(range(spec.trials))
    tasks = [(spec, ids[k::parts]) for k in range(parts)]
    if workers <= 1:
        results = [_random_worker(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_random_worker, tasks))
    hits = {}
    for h in results:
        hits.update(h)
    keys = sorted(hits)
    witnesses = [_to_space(hits[k], spec, amb) for k in keys[:spec.limit]]
    return SearchReport(spec, N, gaussian_binomial(N, spec.dim, spec.p),
                        spec.trials, len(keys), False, witnesses)


def search(spec, workers=1):
    """Constant-rank subspaces over F_p as described by ``spec``.

    Exhaustive mode gives a complete existence answer (refusing when the
    number of subspaces exceeds the ceiling); random mode only reports what
    it finds.  Output does not depend on ``workers``.
    """
    if spec.mode == "exhaustive":
        return _exhaustive(spec, workers)
    return _random(spec, workers)


# ---------------------------------------------------------------------------


@dataclass
class MaxDimResult:
    a: int
    r: int
    p: int
    ansatz: str
    dim: int
    complete: bool
    witness: MatrixSpace = None
    log: list = field(default_factory=list)

    def to_dict(self):
        return {
            "a": self.a, "r": self.r, "p": self.p, "ansatz": self.ansatz,
            "max_dim": self.dim, "complete": self.complete,
            "field": f"F_{self.p}",
            "witness": space_to_dict(self.witness) if self.witness else None,
            "log": self.log,
        }


def _reduce_mod_p(S, p):
    mats = []
    for mat in S.basis:
        mats.append(tuple(tuple(((x % p) if (x % p) <= p // 2 else (x % p) - p)
                                for x in row) for row in mat))
    try:
        return MatrixSpace(S.a, S.b, S.n, tuple(mats), f"{S.name} mod {p}")
    except ValueError:
        return None


def max_dim_over_Fp(a, r, p, ceiling=DEFAULT_CEILING, ansatz="general",
                    trials=2000, seed=0, workers=1):
    """Largest dimension of an F_p-space of a x a matrices of constant rank r.

    Starts from the embedded construction reduced mod p when it applies to
    the ansatz, then searches upward one dimension at a time: exhaustively
    while the subspace count stays under ``ceiling``, by random sampling
    otherwise.  ``complete`` is True only when the first failing dimension
    was refuted exhaustively.
    """
    if not 1 <= r <= a:
        raise ValueError("need 1 <= r <= a")
    log = []
    best_dim, witness = 0, None
    if ansatz == "general":
        E = _reduce_mod_p(embedded(r, a), p)
        if E is not None:
            cert = verify_constant_rank(E, r, ExhaustivePrimes((p,)), symbolic_upper=False)
            if cert.ok:
                best_dim, witness = E.dim, E
                log.append({"dim": E.dim, "method": "embedded construction mod p",
                            "found": True})
    N = len(ambient_basis(a, a, ansatz))
    dim = best_dim + 1
    while dim <= N:
        spec = SearchSpec(a=a, b=a, r=r, dim=dim, p=p, mode="exhaustive",
                          ansatz=ansatz, ceiling=ceiling, limit=1, seed=seed,
                          trials=trials)
        try:
            rep = search(spec, workers)
            method = "exhaustive"
        except CeilingExceeded:
            rep = search(SearchSpec(a=a, b=a, r=r, dim=dim, p=p, mode="random",
                                    ansatz=ansatz, limit=1, seed=seed, trials=trials),
                         workers)
            method = "random"
        log.append({"dim": dim, "method": method, "found": rep.exists})
        if not rep.exists:
            return MaxDimResult(a, r, p, ansatz, best_dim, method == "exhaustive",
                                witness, log)
        best_dim, witness = dim, rep.witnesses[0][0]
        dim += 1
    return MaxDimResult(a, r, p, ansatz, best_dim, True, witness, log)
