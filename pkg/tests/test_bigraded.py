from math import comb

import pytest

import oracle
from conftest import ideal
from ghilb.algebra import AlgebraError, Ring, random_linear_combination
from ghilb.bigraded import (
    BigradedModel,
    BigradedTable,
    CiupercaTuple,
    bigraded_h,
    bigraded_table,
    ciuperca_coefficients,
    classical_singh,
    fit_bivariate,
    fit_grid,
    hyperplane_invariance_check,
    singh_check,
    thm34_probe,
    verify_prop24,
)
from ghilb.genhilbert import ModuleSpec, UnstableData
from ghilb.ideals import Ideal, InfiniteLength

XY = Ring(["x", "y"])
M = Ideal.maximal(XY)


def h10_by_enumeration(gens, s, t, n=2):
    """lambda(I^t / (m^{s+1} I^t + I^{t+1})) for a monomial I, counting monomials."""
    low = oracle.mono_power(gens, t)
    high = oracle.mono_power(gens, t + 1)
    emax = max(sum(g) for g in gens)
    count = 0
    for deg in range(emax * t + s + 1):
        for u in oracle.monomials(n, deg):
            inside = any(all(a >= b for a, b in zip(u, g)) for g in low)
            if not inside:
                continue
            # u lies in m^{s+1} I^t exactly when u/g has degree > s for some g in I^t dividing it
            top = any(all(a >= b for a, b in zip(u, g)) and deg - sum(g) > s for g in low)
            nxt = any(all(a >= b for a, b in zip(u, g)) for g in high)
            count += not (top or nxt)
    return count


@pytest.mark.parametrize("mode", ["truncate", "explicit"])
def test_h10_matches_enumeration(mode):
    I = ideal(XY, "x^2", "x*y")
    model = BigradedModel(M, I, mode=mode)
    for s in range(4):
        for t in range(4):
            assert model.h10(s, t) == h10_by_enumeration([(2, 0), (1, 1)], s, t)


def test_small_values():
    I = ideal(XY, "x^2", "x*y")
    assert bigraded_h(M, I, None, 0, 0)[2] == 1
    for t in range(5):
        assert bigraded_h(M, M, None, 0, t)[1] == t + 1
    with pytest.raises(AlgebraError):
        bigraded_h(M, I, None, -1, 0)
    with pytest.raises(AlgebraError):
        bigraded_h(M, I, None, 0, -2)


def test_non_m_primary_q_rejected():
    with pytest.raises(InfiniteLength):
        BigradedModel(ideal(XY, "x"), ideal(XY, "x^2", "x*y"))


def test_modes_agree_on_grid():
    I = ideal(XY, "x^2", "x*y")
    a = bigraded_table(M, I, s_max=4, t_max=4, mode="truncate")
    b = bigraded_table(M, I, s_max=4, t_max=4, mode="explicit")
    assert a.h11 == b.h11 and a.h00 == b.h00


def test_synthetic_fits():
    const = fit_grid([[7] * 6 for _ in range(6)], 2)
    assert {k: v for k, v in const.coeffs.items() if v} == {(0, 0): 7}
    prod = fit_grid([[(s + 1) * (t + 1) for t in range(6)] for s in range(6)], 2)
    assert {k: v for k, v in prod.coeffs.items() if v} == {(1, 1): 1}
    assert (0, 0) in prod.corners


def test_fit_reports_late_agreement():
    grid = [[(s + 1) * (t + 1) + (5 if s == 0 else 0) for t in range(7)] for s in range(7)]
    fit = fit_grid(grid, 2)
    assert fit.a(1, 1) == 1 and min(c[0] for c in fit.corners) == 1


def test_fit_rejects_non_polynomial_grid():
    with pytest.raises(UnstableData):
        fit_grid([[2 ** (s + t) for t in range(6)] for s in range(6)], 2)


def test_table_invariants_and_shift_relations():
    I = ideal(XY, "x^2", "x*y")
    table = bigraded_table(M, I)
    assert table.invariant_violations() == []
    coeffs = fit_bivariate(table)
    assert table.fit_meta["shiftRelations"] is True
    assert {k: v for k, v in coeffs.items() if v} == {(0, 2): 2, (0, 1): -1, (1, 1): 1}
    assert table.to_json()["d"] == 2


def test_from_grid_identities():
    table = BigradedTable.from_grid([[comb(s + 2, 2) * (t + 1) for t in range(5)] for s in range(5)], 2)
    assert table.invariant_violations() == []


def test_ciuperca_tuples():
    I = ideal(XY, "x^2", "x*y")
    table = bigraded_table(M, I)
    cc = ciuperca_coefficients(table)
    assert cc.a0d == 2
    assert [len(tp.values) for tp in cc.tuples] == [1, 2, 3]
    with pytest.raises(ValueError):
        CiupercaTuple(1, (1,))


@pytest.mark.parametrize("gens,e0", [(("x", "y"), 1), (("x^2", "y^2"), 4), (("x^2", "x*y", "y^2"), 4)])
def test_m_primary_tuples(gens, e0):
    table = bigraded_table(M, ideal(XY, *gens))
    cc = ciuperca_coefficients(table)
    assert cc.a0d == e0
    for tp in cc.tuples:
        # (a(i, d-i), ..., a(1, d-i)) vanish for ideals of definition
        assert all(v == 0 for v in tp.values[:-1])


@pytest.mark.parametrize("gens,a0", [(("x", "y"), [1, 0, 0]), (("x^2", "x*y"), [2, -1, 0])])
def test_prop24_small(gens, a0):
    rep = verify_prop24(None, ideal(XY, *gens))
    assert rep.passed and rep.q_label == "m"
    assert rep.attempts[-1]["a0"] == a0


@pytest.mark.parametrize("mode", ["truncate", "explicit"])
@pytest.mark.parametrize("seed", [1, 2])
def test_singh_x2_xy(mode, seed):
    I = ideal(XY, "x^2", "x*y")
    x = random_linear_combination(I.gens, 1, seed).elements[0]
    rep = singh_check(None, I, None, x, 4, 4, mode=mode)
    assert rep.passed and len(rep.cells) == 25
    assert rep.beta == (0, 0)


def test_singh_m_primary_and_classical():
    I = ideal(XY, "x", "y")
    x = random_linear_combination(I.gens, 1, 3).elements[0]
    assert singh_check(None, I, None, x, 4, 4).passed
    assert classical_singh(I, None, x, 5)["pass"]
    with pytest.raises(AlgebraError):
        classical_singh(ideal(XY, "x^2", "x*y"), None, x, 3)


def test_singh_rejects_element_outside_I():
    I = ideal(XY, "x^2", "x*y")
    with pytest.raises(AlgebraError):
        singh_check(None, I, None, XY.var("y") ** 2, 2, 2)


def test_invariance_small():
    spec = ModuleSpec.make(ideal(XY, "x^2", "x*y"))
    steps = hyperplane_invariance_check(spec, [1, 2])
    assert all(st.passed for st in steps)
    assert all(st.j_before[0] == st.j_after[0] == 2 for st in steps)


def test_invariance_requires_full_spread():
    with pytest.raises(AlgebraError):
        hyperplane_invariance_check(ModuleSpec.make(ideal(XY, "x")), [1])


def test_thm34_principal_and_small():
    principal = ModuleSpec.make(ideal(XY, "x^2"))
    assert all(r["pass"] for r in thm34_probe(principal, None, [0, 2, 3], [1]))
    R3 = Ring(["x", "y", "z"])
    spec = ModuleSpec.make(ideal(R3, "x*y", "x*z"), ideal(R3, "y*z"))
    out = thm34_probe(spec, None, [1, 2], [1])
    assert {r["i"] for r in out} == set(range(1, spec.d))
    spec2 = ModuleSpec.make(ideal(XY, "x^2", "x*y"))
    rows = thm34_probe(spec2, None, [2, 3], [1, 2])
    assert rows and all(r["pass"] for r in rows)
