"""Rules engine for l(r;a), the largest dimension of a space of a x a
matrices of constant rank r over an algebraically closed field of
characteristic 0.

Each rule may contribute a lower bound, an upper bound, or an exact value.
Exact values override intervals; two different exact values, or a lower
bound above an upper bound, raise ``BoundsConsistencyError``.
"""

import csv
import io
import json
from dataclasses import dataclass, field

from .chern import dim5_candidates

__all__ = [
    "BoundRecord",
    "BoundsConsistencyError",
    "RULES",
    "bound",
    "table",
    "format_table",
    "explain",
]


class BoundsConsistencyError(RuntimeError):
    pass


# rule id -> statement it encodes
RULES = {
    "L1": "l(r;a) >= a-r+1 (embedded banded construction)",
    "L2": "l(t+1;2t+1) = t+2 for t >= 1 (Tango bundles)",
    "L3": "l(a-2;a) >= 4 when a = 2 mod 3",
    "U1": "l(r;a) <= max{r+1, a-r+1}",
    "U2": "l(r;a) <= 2(a-r)+1",
    "U3": "l(r;a) <= r-1 when a/2+1 <= r < (2a+2)/3",
    "U4": "l(a-1;a) = 2 for a even, 3 for a odd",
    "U5": "3 <= l(a-2;a) <= 5; <= 4 unless a passes the rank-2 Chern sieve on P^4; "
          "= 3 when a = 0 mod 3; = 4 when a = 2 mod 3 and a != 2 mod 4",
    "U6": "l(a;a) = 1 (a determinantal hypersurface always has points)",
    "E1": "l(5;7)=3, l(6;9)=4, l(7;10)=4, l(2;4)=3, l(8;10)=4",
    "C1": "conjecturally l(r;a) = a-r+1 when a/2+1 < r < (2a+2)/3",
}

_EXPLICIT = {(5, 7): 3, (6, 9): 4, (7, 10): 4, (2, 4): 3, (8, 10): 4}


@dataclass
class BoundRecord:
    r: int
    a: int
    lower: int
    upper: int
    status: str
    conjectural_value: int = None
    provenance: list = field(default_factory=list)

    @property
    def value(self):
        return self.lower if self.status == "exact" else None

    def cell(self):
        if self.status == "exact":
            return str(self.lower)
        s = f"[{self.lower},{self.upper}]"
        if self.conjectural_value is not None:
            s += f"~{self.conjectural_value}"
        return s

    def to_dict(self):
        return {
            "r": self.r, "a": self.a, "lower": self.lower, "upper": self.upper,
            "status": self.status, "conjectural_value": self.conjectural_value,
            "provenance": [{"rule": rid, "effect": eff, "statement": RULES[rid]}
                           for rid, eff in self.provenance],
        }


_dim5_cache = {"max": 0, "set": frozenset()}


def _dim5_set(a):
    if a > _dim5_cache["max"]:
        top = max(a, 2 * _dim5_cache["max"], 64)
        _dim5_cache["set"] = frozenset(dim5_candidates(top))
        _dim5_cache["max"] = top
    return _dim5_cache["set"]


def _fire(r, a):
    """(rule, kind, value) for every rule that applies; kind in lower/upper/exact."""
    out = []
    out.append(("L1", "lower", a - r + 1))
    if a == 2 * r - 1 and r >= 2:
        out.append(("L2", "lower", r + 1))
    if r == a - 2 and a % 3 == 2 and a >= 3:
        out.append(("L3", "lower", 4))
    out.append(("U1", "upper", max(r + 1, a - r + 1)))
    out.append(("U2", "upper", 2 * (a - r) + 1))
    if 2 * r >= a + 2 and 3 * r < 2 * a + 2:
        out.append(("U3", "upper", r - 1))
    if r == a - 1:
        out.append(("U4", "exact", 2 if a % 2 == 0 else 3))
    if r == a - 2 and a >= 3:
        out.append(("U5", "lower", 3))
        eligible = a % 12 in (2, 10) and a in _dim5_set(a)
        out.append(("U5", "upper", 5 if eligible else 4))
        if a % 3 == 0:
            out.append(("U5", "exact", 3))
        elif a % 3 == 2 and a % 4 != 2:
            out.append(("U5", "exact", 4))
    if r == a:
        out.append(("U6", "exact", 1))
    if (r, a) in _EXPLICIT:
        out.append(("E1", "exact", _EXPLICIT[(r, a)]))
    return out


def bound(r, a):
    if not (isinstance(r, int) and isinstance(a, int)) or not 1 <= r <= a:
        raise ValueError(f"need integers 1 <= r <= a, got r={r}, a={a}")
    fired = _fire(r, a)
    lower, upper = 1, None
    exact = None
    prov = []
    for rid, kind, v in fired:
        if kind == "lower":
            lower = max(lower, v)
        elif kind == "upper":
            upper = v if upper is None else min(upper, v)
        else:
            if exact is not None and exact != v:
                raise BoundsConsistencyError(
                    f"l({r};{a}): exact values {exact} and {v} disagree")
            exact = v
        prov.append((rid, f"{kind} {v}"))
    if exact is not None:
        if not lower <= exact <= upper:
            raise BoundsConsistencyError(
                f"l({r};{a}): exact value {exact} outside [{lower},{upper}]")
        lower = upper = exact
    if lower > upper:
        raise BoundsConsistencyError(f"l({r};{a}): lower {lower} > upper {upper}")
    status = "exact" if lower == upper else "bounded"
    conj = None
    if status != "exact" and 3 * r < 2 * a + 2 and 2 * r > a + 2:
        conj = a - r + 1
        status = "conjectural-exact"
        prov.append(("C1", f"conjectural {conj}"))
    return BoundRecord(r, a, lower, upper, status, conj, prov)


def table(max_a):
    if max_a < 1:
        raise ValueError("max_a must be at least 1")
    return [[bound(r, a) for r in range(1, a + 1)] for a in range(1, max_a + 1)]


def format_table(rows, fmt="md"):
    """Render ``table`` output as markdown, csv or json."""
    if fmt == "json":
        return json.dumps([rec.to_dict() for row in rows for rec in row], indent=2)
    width = len(rows[-1]) if rows else 0
    header = ["a"] + [f"r={r}" for r in range(1, width + 1)]
    body = [[str(row[0].a)] + [rec.cell() for rec in row] + [""] * (width - len(row))
            for row in rows]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(body)
        return buf.getvalue()
    if fmt == "md":
        lines = ["| " + " | ".join(header) + " |",
                 "|" + "---|" * len(header)]
        lines += ["| " + " | ".join(b) + " |" for b in body]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def explain(r, a):
    rec = bound(r, a)
    if rec.status == "exact":
        head = f"l({r};{a}) = {rec.lower}"
    else:
        head = f"{rec.lower} <= l({r};{a}) <= {rec.upper}"
        if rec.conjectural_value is not None:
            head += f" (conjecturally {rec.conjectural_value})"
    lines = [head, f"status: {rec.status}", "rules fired:"]
    for rid, eff in rec.provenance:
        lines.append(f"  {rid}: {eff}  [{RULES[rid]}]")
    return "\n".join(lines)
