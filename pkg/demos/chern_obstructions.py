"""Chern class bookkeeping that rules out constant-rank spaces.

Run: python3 demos/chern_obstructions.py
"""

from constrank.chern import (
    PsiParams,
    chern_of_twisted_tangent,
    cp_inv,
    cp_line_power,
    dim5_candidates,
    normalized_c2,
    omega_kernel_obstruction,
    psi,
    psi_linear_condition,
    rank2_cokernel_constraints,
)

# Euler sequence classes on P^4
om2 = chern_of_twisted_tangent(4, 2, dual=True)
print("C(Omega(2))   =", om2)
print("its inverse   =", cp_inv(om2))
print("C(T(-2))      =", chern_of_twisted_tangent(4, -2))

# c4 of (1+h)^a C(Omega(2))^-1 as a function of a
zeros = [a for a in range(0, 60) if (cp_line_power(1, a, 4) * cp_inv(om2))[4] == 0]
print("c4 vanishes for a in", zeros)
print()

# Binomial obstruction: c_n of (1+h)(1-h)^a
for n in (3, 4, 5):
    hits = [a for a in range(n, 30) if omega_kernel_obstruction(n, a)[1] == 0]
    print(f"n={n}: c_n = 0 only at a = {hits}; c_(n-1) there =",
          [omega_kernel_obstruction(n, a)[0] for a in hits])
print()

# Rank-two cokernels on P^4 and P^5
print("a=34, n=4:", sorted(rank2_cokernel_constraints(34, 4).pairs))
print("a=34, n=5:", sorted(rank2_cokernel_constraints(34, 5).pairs))
for a in (34, 46, 62):
    print(f"  a={a}: normalized c2 = {normalized_c2(a)}")
print("a <= 200 surviving the sieve:", dim5_candidates(200))
print()

# The cubic psi for rank-3 kernels
for s in (3, 4, 5):
    u, v, w, ok = psi_linear_condition(9, s)
    lhs = f"{u}d - {v}t".replace(" 1t", " t")
    print(f"a=9, s={s}: {lhs} = {w}  integral={ok}")
for f in [(1, 1, 1), (0, 1, 2), (0, 0, 3)]:
    p = PsiParams.from_triple(9, f)
    print(f"  {f}: d={p.d} t={p.t} 4d-t={4 * p.d - p.t} psi={psi(p)}")
