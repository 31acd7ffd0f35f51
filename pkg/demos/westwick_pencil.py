"""A 5 x 5 pencil of constant rank 4 on P^2 and the splitting type of its image.

Run: python3 demos/westwick_pencil.py
"""

from constrank.constructions import westwick5
from constrank.exactmath import poly_det
from constrank.pencil import (
    ExhaustivePrimes,
    SymbolicCharts,
    kronecker_indices,
    line_splitting_type,
    psi_matrix,
    random_lines,
    restrict_to_line,
    transpose_dual,
    verify_constant_rank,
)

W = westwick5()
print(W)
print()

# The determinant is a quintic in x0, x1, x2; it vanishes identically.
print("det Psi =", poly_det(psi_matrix(W)))

# Rank 4 everywhere: the 5-minors vanish symbolically, and every point of
# P^2(F_p) is checked for the listed primes.
cert = verify_constant_rank(W, 4, ExhaustivePrimes((5, 7, 11, 13)))
print("exhaustive:", cert.status, cert.soundness, cert.lower_proof["points_checked"])

# A constant 4-minor exists on every coordinate stratum, which proves rank 4
# over Q as well.
cert = verify_constant_rank(W, 4, SymbolicCharts())
print("charts:    ", cert.status, cert.soundness)

# On the line x2 = 0 the pencil splits into Kronecker blocks: one column block
# of index 2 (a surjection onto 2.O) and one row block of index 2 (an
# injection of 2.O(-1)).
line = restrict_to_line(W, (1, 0, 0), (0, 1, 0))
eps, eta, rho, regular = kronecker_indices(line)
print(f"x2=0: column indices {eps}, row indices {eta}, regular part {regular}")
print("splitting type on x2=0:", line_splitting_type(W, 4, (1, 0, 0), (0, 1, 0)))

types = {str(line_splitting_type(W, 4, p, q)) for p, q in random_lines(2, 200, seed=1)}
print("over 200 random lines:", types)

# Transposing swaps c and r - c; here both are 2.
WT = transpose_dual(W)
print("transpose:", line_splitting_type(WT, 4, (1, 0, 0), (0, 1, 0)))
