import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from factprod.equations import (
    NONTRIVIAL,
    TRIVIAL,
    DeltaForm,
    EquationError,
    FactorialEquation,
    Pairing,
    adjacent_pairs,
    all_pairings,
    default_pairing,
    delta_form_holds,
    in_nc,
    raw_residual,
    residual,
    to_delta_form,
    trivial_family,
    verify,
)
from factprod.factorint import ExpVec, factorial_expvec


# ---------------------------------------------------------------- validation

def test_constructor_error_codes():
    with pytest.raises(EquationError) as e:
        FactorialEquation((7, 8), (10,))
    assert e.value.code == "ordering"
    with pytest.raises(EquationError) as e:
        FactorialEquation((7, 1), (10,))
    assert e.value.code == "entries"
    with pytest.raises(EquationError) as e:
        FactorialEquation((7, 5), (10, 5))
    assert e.value.code == "overlap"
    with pytest.raises(EquationError) as e:
        FactorialEquation((10, 2), (7,))
    assert e.value.code == "orientation"
    with pytest.raises(EquationError) as e:
        FactorialEquation((), (7,))
    assert e.value.code == "empty"


def test_parse_and_format():
    eq = FactorialEquation.parse(" 7, 3,3 ,2 = 9 ")
    assert eq.lhs == (7, 3, 3, 2) and eq.rhs == (9,)
    assert str(eq) == "7,3,3,2=9"
    assert FactorialEquation.parse("3,7,2,3=9") == eq  # any entry order
    for bad in ("7,6=", "=9", "7;6=9", "7,6=10=11", "a,b=c"):
        with pytest.raises(EquationError) as e:
            FactorialEquation.parse(bad)
        assert e.value.code in ("parse", "empty")


# ---------------------------------------------------------------- residual

def test_residual_known_identity_is_zero():
    assert residual(FactorialEquation((7, 6), (10,))).is_zero()


def test_residual_near_miss_value():
    # 10!/(7!5!) = 6 = 2*3, so the defect is exactly {2:+1, 3:+1}
    r = residual(FactorialEquation((7, 5), (10,)))
    assert r.as_dict() == {2: 1, 3: 1}


def test_raw_residual_relaxed_mode():
    # rejected upstream by disjointness, but the relaxed route answers anyway
    assert raw_residual((2,), (2,)).is_zero()
    assert not raw_residual([3, 3], [4]).is_zero()  # 36 != 24
    assert raw_residual([4, 3], [2]) == -(raw_residual([2], [4, 3]))


# ---------------------------------------------------------------- verify / classify

def test_verify_examples():
    rec = verify(FactorialEquation((7, 3, 3, 2), (9,)))
    assert rec.holds and rec.classification == NONTRIVIAL
    rec = verify(FactorialEquation((23, 4), (24,)))
    assert rec.holds and rec.classification == TRIVIAL
    rec = verify(FactorialEquation((15, 2, 2, 2, 2), (16,)))
    assert rec.holds and rec.classification == TRIVIAL
    assert rec.census_note is not None  # formal rule disagrees with the classical tabulation
    rec = verify(FactorialEquation((8, 3), (9,)))
    assert not rec.holds and rec.classification is None


def test_census_note_only_on_disagreement():
    assert verify(FactorialEquation((14, 5, 2), (16,))).census_note is None
    assert verify(FactorialEquation((23, 4), (24,))).census_note is None


def test_adjacent_pairs():
    assert adjacent_pairs(FactorialEquation((15, 2, 2, 2, 2), (16,))) == ((15, 16),)
    assert adjacent_pairs(FactorialEquation((7, 6), (10,))) == ()
    assert adjacent_pairs(FactorialEquation((11, 9, 2), (12, 10))) == ((9, 10), (11, 10), (11, 12))


@settings(max_examples=40, deadline=None)
@given(st.permutations([7, 3, 3, 2]))
def test_classification_reorder_invariant(shuffled):
    rec = verify(FactorialEquation.from_multisets(shuffled, [9]))
    assert rec.holds and rec.classification == NONTRIVIAL


# ---------------------------------------------------------------- trivial family

def test_trivial_family_examples():
    eq = trivial_family([4])
    assert eq.lhs == (23, 4) and eq.rhs == (24,)
    rec = verify(eq)
    assert rec.holds and rec.classification == TRIVIAL
    eq = trivial_family([3, 3])
    assert eq.lhs == (35, 3, 3) and eq.rhs == (36,)
    assert verify(eq).holds
    with pytest.raises(EquationError):
        trivial_family([2])  # n = 2 degenerates to an entry below 2


def test_trivial_family_overflow_guard():
    with pytest.raises(EquationError) as e:
        trivial_family([10])
    assert e.value.code == "overflow"
    assert trivial_family([10], max_n=10**7).rhs == (math.factorial(10),)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(2, 5), min_size=1, max_size=3))
def test_trivial_family_always_verifies_trivial(tail):
    try:
        eq = trivial_family(tail)
    except EquationError:
        return  # degenerate tail
    rec = verify(eq)
    assert rec.holds and rec.classification == TRIVIAL


# ---------------------------------------------------------------- gap form

def test_to_delta_form_examples():
    eq = FactorialEquation((14, 5, 2), (16,))
    df = to_delta_form(eq, Pairing((1,)))
    assert df.blocks == ((15, 2),) and df.leftover == (5, 2)
    assert math.prod(math.factorial(a) for a in df.leftover) == 240 == 15 * 16

    eq = FactorialEquation((10, 6, 4, 2), (12, 8))
    df = to_delta_form(eq, Pairing((1, 2)))
    assert df.blocks == ((11, 2), (7, 2)) and df.leftover == (4, 2)

    eq = FactorialEquation((7, 6), (10,))
    df = to_delta_form(eq, Pairing((1,)))
    assert df.blocks == ((8, 3),) and df.leftover == (6,)
    assert 8 * 9 * 10 == 720 == math.factorial(6)


def test_pairing_validation():
    eq = FactorialEquation((10, 6, 4, 2), (12, 8))
    with pytest.raises(EquationError):
        Pairing((2, 1))  # first index must be 1
    with pytest.raises(EquationError):
        Pairing((1, 1))  # distinct
    with pytest.raises(EquationError):
        to_delta_form(eq, Pairing((1,)))  # wrong length
    with pytest.raises(EquationError):
        to_delta_form(FactorialEquation((10, 9), (12, 8)), Pairing((1, 2)))  # 8 < 9


def test_unit_gap_flagging():
    df = to_delta_form(FactorialEquation((23, 4), (24,)), Pairing((1,)))
    assert df.blocks == ((24, 1),) and df.unit_gap_blocks == (1,)


def test_delta_form_holds():
    eq = FactorialEquation((14, 5, 2), (16,))
    assert delta_form_holds(to_delta_form(eq, Pairing((1,))))
    bad = DeltaForm(((15, 2),), (5, 3))
    assert not delta_form_holds(bad)


def test_reexpansion_reproduces_residual():
    # blocks minus leftover equals the residual, for any valid pairing
    for eq in (
        FactorialEquation((14, 5, 2), (16,)),
        FactorialEquation((10, 6, 4, 2), (12, 8)),
        FactorialEquation((8, 3), (9,)),  # non-holding: still an identity on vectors
    ):
        for pairing in all_pairings(eq):
            df = to_delta_form(eq, pairing)
            acc = ExpVec()
            for j, i in enumerate(pairing.indices):
                acc = acc + factorial_expvec(eq.rhs[j]) - factorial_expvec(eq.lhs[i - 1])
            for a in df.leftover:
                acc = acc - factorial_expvec(a)
            assert acc == residual(eq)


def test_default_pairing_deterministic_and_valid():
    eq = FactorialEquation((10, 6, 4, 2), (12, 8))
    p = default_pairing(eq)
    assert p.indices == (1, 2)
    p.validate_for(eq)
    # no valid pairing when s > t
    assert default_pairing(FactorialEquation((5,), (7, 6))) is None


# ---------------------------------------------------------------- N(c)

def test_in_nc_examples():
    eq = FactorialEquation((14, 5, 2), (16,))
    assert in_nc(eq, Pairing((1,)), 1)  # s = 1: no gap-ratio constraint
    with pytest.raises(EquationError):
        in_nc(FactorialEquation((8, 3), (9,)), Pairing((1,)), 1)  # not a solution


def test_in_nc_ratio_on_s2_solution():
    # 7!7!6!6! = 10!10! is nontrivial with s = 2
    eq = FactorialEquation((7, 7, 6, 6), (10, 10))
    rec = verify(eq)
    assert rec.holds and rec.classification == NONTRIVIAL
    # pairing (1,2): gaps (3,3) -> ratio 1, in N(c) for every c >= 1
    assert in_nc(eq, Pairing((1, 2)), 1)
    # pairing (1,3): gaps (3,4) -> ratio 4/3 > 1 but <= 2
    assert not in_nc(eq, Pairing((1, 3)), 1)
    assert in_nc(eq, Pairing((1, 3)), 2)


def test_in_nc_rejects_trivial_solution():
    eq = FactorialEquation((23, 4), (24,))
    assert verify(eq).classification == TRIVIAL
    assert not in_nc(eq, Pairing((1,)), 5)
