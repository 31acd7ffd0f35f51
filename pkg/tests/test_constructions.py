import pytest

from constrank.constructions import (
    banded,
    embedded,
    from_forms,
    skew3,
    skew_search_candidate,
    sl2_skew_pencil,
    westwick5,
)
from constrank.pencil import (
    ExhaustivePrimes,
    SymbolicCharts,
    evaluate,
    line_splitting_type,
    space_to_json,
    verify_constant_rank,
)


def test_banded_examples():
    B = banded(3, 2, 1)
    assert B.a == 2 and B.b == 3
    assert evaluate(B, (2, 5)) == [[2, 5, 0], [0, 2, 5]]
    B0 = banded(4, 4, 0)
    assert B0.basis[0] == tuple(tuple(int(i == j) for j in range(4)) for i in range(4))
    cert = verify_constant_rank(banded(7, 3, 4), 3, SymbolicCharts())
    assert cert.ok and cert.soundness == "proved-over-Q"
    with pytest.raises(ValueError):
        banded(5, 2, 2)


def test_banded_symbolic_for_small_sizes():
    for b in range(1, 5):
        for n in range(0, 4):
            assert verify_constant_rank(banded(b + n, b, n), b, SymbolicCharts()).ok


def test_embedded_examples():
    S = embedded(3, 7)
    assert (S.a, S.b, S.n, S.dim) == (7, 7, 4, 5)
    assert verify_constant_rank(S, 3, SymbolicCharts()).ok
    S = embedded(4, 4)
    assert S.n == 0 and S.basis[0] == tuple(tuple(int(i == j) for j in range(4)) for i in range(4))
    S = embedded(1, 2)
    assert evaluate(S, (3, 4)) == [[3, 4], [0, 0]]
    with pytest.raises(ValueError):
        embedded(0, 3)
    with pytest.raises(ValueError):
        embedded(4, 3)


def test_skew3():
    S = skew3()
    assert evaluate(S, (1, 0, 0)) == [[0, 0, 0], [0, 0, 1], [0, -1, 0]]
    assert verify_constant_rank(S, 2, SymbolicCharts()).ok
    assert str(line_splitting_type(S, 2, (1, 0, 0), (0, 1, 0))) == "(-1, 0)"


def test_westwick5_literal_entries():
    W = westwick5()
    assert evaluate(W, (1, 0, 0)) == [
        [0, 0, 0, -1, 0], [0, 0, 0, 0, -1], [0, 0, 0, 0, 0],
        [1, 0, 0, 0, 0], [0, 1, 0, 0, 0]]
    assert evaluate(W, (0, 0, 1)) == [
        [0, -1, 0, 0, 0], [1, 0, 0, 0, 0], [0, 0, 0, -1, 0],
        [0, 0, 1, 0, 0], [0, 0, 0, 0, 0]]
    cert = verify_constant_rank(W, 4, ExhaustivePrimes((5, 7, 11, 13)))
    assert cert.ok
    st = line_splitting_type(W, 4, (1, 0, 0), (0, 1, 0))
    assert st.c == 2 and st.rank - st.c == 2


def test_golden_fixtures_byte_match(fixture_path):
    for name, S in [("westwick5", westwick5()), ("skew3", skew3()),
                    ("banded_3_2_1", banded(3, 2, 1)), ("banded_4_2_2", banded(4, 2, 2)),
                    ("banded_7_3_4", banded(7, 3, 4)), ("embedded_2_4", embedded(2, 4)),
                    ("sl2skew_5", sl2_skew_pencil(5))]:
        assert fixture_path(name).read_text() == space_to_json(S)


def test_from_forms():
    S = from_forms([["x0", "-x1 + 2*x2"], ["3*x1", "0"]], 3)
    assert evaluate(S, (1, 1, 1)) == [[1, 1], [3, 0]]
    with pytest.raises(ValueError):
        from_forms([["y0"]], 1)


def test_sl2_pencil_is_skew():
    for a in (3, 5, 7):
        S = sl2_skew_pencil(a)
        for m in S.basis:
            assert all(m[i][j] == -m[j][i] for i in range(a) for j in range(a))


@pytest.mark.parametrize("a", [3, 5, 7])
def test_skew_search_candidate(a):
    out = skew_search_candidate(a)
    assert out.found and out.space.dim == 3
    assert out.certificate.ok and out.certificate.rank == a - 1
    for m in out.space.basis:
        assert all(m[i][j] == -m[j][i] for i in range(a) for j in range(a))
    # the sl2 module stays irreducible only in characteristic > a - 1
    assert verify_constant_rank(out.space, a - 1, ExhaustivePrimes((11, 13))).ok


def test_skew_search_candidate_a3_is_skew3():
    assert skew_search_candidate(3).space == skew3()


def test_skew_search_candidate_preconditions():
    for a in (4, 1, 11):
        with pytest.raises(ValueError):
            skew_search_candidate(a)
