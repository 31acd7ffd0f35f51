"""Constant-rank spaces over small prime fields.

Finite fields behave differently: a 2-dimensional space of invertible
2 x 2 matrices exists over F_2 (a copy of F_4), although l(2;2) = 1 over C.

Run: python3 demos/finite_field_search.py
"""

from constrank.constructions import skew_search_candidate
from constrank.search import SearchSpec, max_dim_over_Fp, search

rep = search(SearchSpec(a=2, b=2, r=2, dim=2, p=2))
print(f"invertible 2-dim spaces over F_2: {rep.found_count} (complete={rep.complete})")
for S, _ in rep.witnesses:
    print(S)
    print()
print(rep.field_note)
print()

rep = search(SearchSpec(a=3, b=3, r=2, dim=3, p=3, ansatz="skew-symmetric"))
print("skew 3 x 3 of rank 2 over F_3:", rep.found_count, "space(s)")

for a, r, p in [(2, 1, 2), (3, 3, 2), (3, 2, 2), (4, 3, 3)]:
    res = max_dim_over_Fp(a, r, p, trials=200)
    tag = "complete" if res.complete else "lower bound only"
    print(f"a={a} r={r} F_{p}: max dim {res.dim} ({tag})")
print()

# Three-dimensional skew pencils of rank a-1 for odd a
for a in (3, 5, 7, 9):
    out = skew_search_candidate(a)
    print(f"a={a}: {out.method}, {out.certificate.soundness}")
