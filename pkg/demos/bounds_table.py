"""The table of l(r;a) and where each value comes from.

Run: python3 demos/bounds_table.py
"""

from constrank.bounds import bound, explain, format_table, table
from constrank.constructions import embedded
from constrank.pencil import SymbolicCharts, verify_constant_rank

print(format_table(table(10), "md"))

for r, a in [(6, 9), (5, 8), (4, 7)]:
    print(explain(r, a))
    print()

# Beyond a = 10 some values are still open.
open_cells = [(rec.r, rec.a, rec.lower, rec.upper, rec.conjectural_value)
              for row in table(14) for rec in row if rec.status != "exact"]
for r, a, lo, hi, conj in open_cells:
    note = f" conjecturally {conj}" if conj else ""
    print(f"l({r};{a}) in [{lo},{hi}]{note}")
print()

# The lower bound a-r+1 is realized by an explicit pencil.
S = embedded(3, 7)
print(S)
print(verify_constant_rank(S, 3, SymbolicCharts()).to_json())
