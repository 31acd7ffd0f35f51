from fractions import Fraction

import pytest

from constrank.chern import (
    ChernPoly,
    PsiParams,
    chern_of_twisted_tangent,
    cp_inv,
    cp_line_power,
    cp_mul,
    dim5_candidates,
    dim5_congruence_member,
    kernel_chern,
    normalized_c2,
    omega_kernel_obstruction,
    psi,
    psi_feasible_triples,
    psi_from_chern,
    psi_linear_condition,
    rank2_cokernel_constraints,
    schwarzenberger,
)


def cp(*c, n=4):
    return ChernPoly(n, c)


def test_padding_and_order():
    assert cp(1, 2, n=3).coeffs == (1, 2, 0, 0)
    with pytest.raises(ValueError):
        ChernPoly(1, (1, 2, 3))


def test_mul_examples():
    assert cp_mul(cp(1, 1, n=2), cp(1, -1, n=2)) == cp(1, 0, -1, n=2)
    assert (cp(1, -1) * cp_line_power(1, 9, 4))[4] == 126 - 84
    omega1 = chern_of_twisted_tangent(4, 1, dual=True)
    assert omega1 * omega1.inverse() == ChernPoly.one(4)


def test_order_mismatch():
    with pytest.raises(ValueError):
        cp_mul(cp(1, 1, n=2), cp(1, 1, n=3))


def test_inverse_examples():
    assert cp_inv(cp(1, -1)) == cp(1, 1, 1, 1, 1)
    for n in range(1, 7):
        assert cp_inv(chern_of_twisted_tangent(n, 1, dual=True)) == ChernPoly(n, (1, 1))
    assert cp_inv(cp(1, 3, 4, 2, 1)) == cp(1, -3, 5, -5, 0)
    with pytest.raises(ValueError):
        cp_inv(cp(2, 1))


def test_line_power_examples():
    assert cp_line_power(-1, 2, 2) == cp(1, -2, 1, n=2)
    assert cp_line_power(1, 10, 4) == cp(1, 10, 45, 120, 210)
    assert cp_line_power(-1, 34, 4) == cp(1, -34, 561, -5984, 46376)


def test_twisted_tangent_examples():
    assert chern_of_twisted_tangent(4, -2) == cp(1, -3, 4, -2, 1)
    assert chern_of_twisted_tangent(4, 2, dual=True) == cp(1, 3, 4, 2, 1)
    assert chern_of_twisted_tangent(2, -2) == chern_of_twisted_tangent(2, 1, dual=True)


def test_tangent_cotangent_duality():
    # the dual of T(t) is Omega(-t): same classes with h -> -h
    for n in range(1, 7):
        for t in range(-3, 4):
            T = chern_of_twisted_tangent(n, t)
            assert chern_of_twisted_tangent(n, -t, dual=True) == T.negate_h()
            assert T * ChernPoly(n, (1, t)) == cp_line_power(t + 1, n + 1, n)


def test_kernel_chern_examples():
    assert kernel_chern(ChernPoly.one(2), 2) == cp(1, -2, 1, n=2)
    t1 = (34 - 2) // 2
    assert kernel_chern(cp(1, t1, 88), 34)[1] == t1 - 34 == -18
    cE = cp(1, 3, 4, 2, 1)
    assert kernel_chern(cE, 7) * cp_inv(cp_line_power(-1, 7, 4)) == cE
    # the vanishing at a = 7 lives in (1+h)^a C(Omega(2))^-1, not in this product
    assert kernel_chern(cE, 7)[4] == 1


def test_veronese_c4_polynomial():
    inv = cp(1, -3, 5, -5, 0)
    for a in range(0, 101):
        c4 = (cp_line_power(1, a, 4) * inv)[4]
        assert 24 * c4 == a * (a - 5) * (a - 6) * (a - 7)
        assert (c4 == 0) == (a in (0, 5, 6, 7))


def test_rank2_examples():
    sol = rank2_cokernel_constraints(34, 4)
    assert sol.pairs == frozenset({(16, 88)})
    assert (16, 88) in sol
    assert rank2_cokernel_constraints(6, 3).is_empty()
    for a in range(3, 101):
        assert rank2_cokernel_constraints(a, 5).is_empty()


def test_rank2_n3_family():
    sol = rank2_cokernel_constraints(7, 3)
    assert sol.infinite
    for t1 in range(-12, 13):
        t2 = sol.t2_for(t1)
        assert ((t1, t2) in sol) == (t2.denominator == 1)
        if t2.denominator == 1:
            c = kernel_chern(ChernPoly(3, (1, t1, int(t2))), 7)
            assert c[3] == 0


def test_rank2_nonempty_implies_congruence():
    for a in range(3, 201):
        if not rank2_cokernel_constraints(a, 4).is_empty():
            assert a % 2 == 0 and (a - 1) * (a - 2) % 12 == 0
            assert a % 12 in (2, 10)


def test_schwarzenberger_examples():
    assert schwarzenberger(24)
    assert schwarzenberger(0)
    assert not schwarzenberger(1)


def test_normalized_c2_closed_form():
    for m in range(0, 20):
        assert normalized_c2(12 * m + 2) == 3 * m * m + m if m else True
        assert normalized_c2(12 * m + 10) == (3 * m + 2) * (m + 1)
    assert normalized_c2(34) == 24


def test_dim5_examples():
    assert dim5_candidates(40) == [34]
    assert dim5_candidates(10) == []
    assert dim5_candidates(200)[0] == 34
    with pytest.raises(ValueError):
        dim5_candidates(2)


def test_dim5_congruences_agree():
    found = set(dim5_candidates(500))
    for a in range(3, 501):
        assert (a in found) == dim5_congruence_member(a), a
    for a in found:
        if a % 12 == 2:
            assert (a - 2) // 12 % 12 in (0, 5, 8, 9)


def test_psi_examples():
    p = PsiParams.from_triple(9, (1, 1, 1))
    assert (p.s, p.d, p.t) == (3, 3, 1)
    assert psi(p) == -72
    u, v, w, ok = psi_linear_condition(9, 3)
    assert (u, v, w, ok) == (4, 1, 14, True)
    assert 4 * p.d - p.t == 11
    assert psi(PsiParams.from_triple(10, (0, 1, 2))) != 0
    assert psi(PsiParams.from_triple(9, (0, 0, 0))) == 336


def test_psi_condition_equivalence_a9_s3():
    for d in range(-10, 11):
        for t in range(-10, 11):
            assert (psi(PsiParams(9, 3, d, t)) == 0) == (4 * d - t == 14)


def test_psi_factored_form_a9():
    # the cubic at a = 9 is 8 (42 - 28 s + 12 d - 3 t)
    for s in range(0, 6):
        for d in range(0, 6):
            for t in range(0, 6):
                assert psi(PsiParams(9, s, d, t)) == 8 * (42 - 28 * s + 12 * d - 3 * t)


def test_psi_matches_chern_route():
    for a in range(1, 15):
        for f in [(0, 0, 0), (1, 1, 1), (0, 1, 2), (1, 2, 2), (0, 0, 5)]:
            p = PsiParams.from_triple(a, f)
            assert psi_from_chern(p) == psi(p)


def test_psi_feasible_triples():
    assert psi_feasible_triples(9, 3, 5) == []
    assert psi_feasible_triples(10, 3, 5) == []
    assert psi_feasible_triples(9, 0, 0) == []
    with pytest.raises(ValueError):
        psi_feasible_triples(9, 4, 3)


def test_psi_feasible_triples_nonempty_somewhere():
    # the search does find roots when they exist
    hits = [(a, psi_feasible_triples(a, 0, 6)) for a in range(2, 30)]
    assert any(h for _, h in hits)
    for a, triples in hits:
        for f in triples:
            assert psi(PsiParams.from_triple(a, f)) == 0
            assert list(f) == sorted(f)


def test_omega_kernel_examples():
    assert omega_kernel_obstruction(4, 7) == (-14, 0)
    assert omega_kernel_obstruction(4, 8)[1] == 70 - 56
    with pytest.raises(ValueError):
        omega_kernel_obstruction(4, 3)


def test_str():
    assert str(cp(1, -3, 5, -5, 0)) == "1 - 3h + 5h^2 - 5h^3"
    assert str(cp(0, n=0)) == "0"
