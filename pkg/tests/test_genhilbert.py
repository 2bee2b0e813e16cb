import pytest

from conftest import ideal
from ghilb.algebra import AlgebraError, Ring
from ghilb.genhilbert import (
    ModuleSpec,
    NonGenericSeed,
    UnstableData,
    analytic_spread,
    classical_consistency,
    epsilon0_epsilon1,
    gamma_length,
    generalized_series,
    j_coefficients,
    minimal_reduction,
    residual_series,
    section,
)
from ghilb.ideals import Ideal
from ghilb.series import RationalSeries

XY = Ring(["x", "y"])


def spec_of(*gens, ring=XY, A=None):
    return ModuleSpec.make(ideal(ring, *gens), A)


def test_gamma_lengths_small():
    s = spec_of("x^2", "x*y")
    assert [gamma_length(s, t) for t in range(7)] == [2 * t + 1 for t in range(7)]
    assert [gamma_length(spec_of("x"), t) for t in range(5)] == [0] * 5
    with pytest.raises(AlgebraError):
        gamma_length(s, -1)


@pytest.mark.parametrize("method", ["rees", "direct"])
def test_series_x2_xy(method):
    data = generalized_series(spec_of("x^2", "x*y"), 6, method=method)
    assert data.stable
    assert data.series.same_form(RationalSeries((1, 1), 3))
    assert data.j == (2, 1, 0) and data.r == 2
    assert data.cumulative == [(t + 1) ** 2 for t in range(7)]
    assert data.series.expand(7) == data.cumulative


def test_m_primary_is_classical():
    data = generalized_series(spec_of("x", "y"), 6)
    assert data.series.same_form(RationalSeries((1,), 3)) and data.r == 2
    R3 = Ring(["x", "y", "z"])
    assert generalized_series(ModuleSpec.make(Ideal.maximal(R3)), 5).series.same_form(RationalSeries((1,), 4))
    rep = classical_consistency(spec_of("x", "y"), 5)
    assert rep["pass"] and rep["gamma"] == [t + 1 for t in range(6)]
    assert classical_consistency(spec_of("x^2", "y^2"), 6)["pass"]
    with pytest.raises(AlgebraError):
        classical_consistency(spec_of("x"), 3)


def test_zero_torsion():
    data = generalized_series(spec_of("x"), 5)
    assert data.series.is_zero and data.j == (0, 0, 0)


def test_unstable_direct_data_is_flagged():
    R3 = Ring(["x", "y", "z"])
    spec = ModuleSpec.make(ideal(R3, "x^2", "x*y", "x*z"))
    data = generalized_series(spec, 3, method="direct")
    assert not data.stable and any("t_max" in n for n in data.notes)
    with pytest.raises(UnstableData):
        j_coefficients(data)


def test_rees_and_direct_agree_on_a_module():
    R3 = Ring(["x", "y", "z"])
    spec = ModuleSpec.make(ideal(R3, "x*y", "x*z"), ideal(R3, "y^2*z-z^3"))
    a = generalized_series(spec, 7, method="rees")
    b = generalized_series(spec, 7, method="direct")
    assert a.cumulative == b.cumulative
    assert b.stable and a.series == b.series and a.j == b.j


def test_module_spec_checks():
    with pytest.raises(AlgebraError):
        spec_of("x^2+y")
    assert spec_of("x").d == 2


SUITE = [("x",), ("x^2", "x*y"), ("x", "y")]


@pytest.mark.parametrize("gens", SUITE)
def test_j0_nonzero_iff_full_spread(gens):
    spec = spec_of(*gens)
    j = generalized_series(spec, 6).j
    assert (j[0] != 0) == (analytic_spread(spec.I) == spec.d)


def test_spread_small():
    assert analytic_spread(ideal(XY, "x", "y")) == 2
    assert analytic_spread(ideal(XY, "x^2", "x*y")) == 2
    assert analytic_spread(ideal(XY, "x")) == 1
    assert analytic_spread(ideal(XY, "x^2", "x*y"), method="rees") == 2
    with pytest.raises(AlgebraError):
        analytic_spread(ideal(XY, "x", "y^2"))


def test_spread_routes_agree(module_b):
    assert analytic_spread(module_b.I, method="elimination") == analytic_spread(module_b.I, method="rees") == 4


def test_reduction_of_regular_sequence():
    red = minimal_reduction(ideal(XY, "x", "y"), seed=3)
    assert red.reduction_number == 0 and red.lengths == [0] and red.spread == 2


def test_reduction_x2_xy():
    # two generators and spread 2: the general reduction is I itself
    red = minimal_reduction(ideal(XY, "x^2", "x*y"), seed=1)
    assert red.reduction_number == 0 and red.lengths == [0]
    # (x^3, x^2y, y^3): I/J has one class in degree 3 and one in degree 4
    red = minimal_reduction(ideal(XY, "x^3", "x^2*y", "y^3"), seed=1)
    assert red.spread == 2 and red.lengths[0] == 2 and red.reduction_number is not None
    # outside the m-primary case lambda(I/J) can be infinite, reported as None
    R3 = Ring(["x", "y", "z"])
    red = minimal_reduction(ideal(R3, "x^2", "y^2", "x*y"), seed=1)
    assert red.lengths[0] is None and red.reduction_number == 1


def test_sections_small():
    spec = spec_of("x^2", "x*y")
    assert section(spec, 0, 1) is spec
    sec = section(spec, 1, 7)
    assert sec.d == 1 and len(sec.sections) == 1
    with pytest.raises(AlgebraError):
        section(spec, 3, 1)


def test_residual_zero_when_spread_is_small():
    assert residual_series(spec_of("x"), 1).is_zero


def test_residual_x2_xy():
    # M-bar = R/((xi) : I^inf) is a line; I restricted to it is the square of its maximal ideal
    for seed in (1, 2, 3):
        assert residual_series(spec_of("x^2", "x*y"), seed, 6).same_form(RationalSeries((2,), 2))


def test_eps0_small():
    # m/m^2 is spanned by x and y
    out = epsilon0_epsilon1(spec_of("x", "y"), 1)
    assert out["epsilon0"] == 2


# -- paper-scale examples that run in seconds ----------------------------------

def test_example_a_series_and_eps(module_a):
    data = generalized_series(module_a, 6)
    assert data.series.same_form(RationalSeries((0, 1, 1, 1, 1), 6))
    assert data.epsilon[1] == 1
    assert epsilon0_epsilon1(module_a, 1)["epsilon0"] == 1


def test_example_b_series_and_eps(module_b):
    data = generalized_series(module_b, 8)
    assert data.series.same_form(RationalSeries((0, 4, 1, 6, -3), 5))
    assert data.j == (8, 12, 1, -6, -3)
    assert epsilon0_epsilon1(module_b, 2)["epsilon0"] == 4


@pytest.mark.parametrize("seed", [1, 2])
def test_example_b_sections(module_b, seed):
    two = generalized_series(section(module_b, 2, seed))
    three = generalized_series(section(module_b, 3, seed))
    assert two.series.same_form(RationalSeries((0, 4, 4), 3))
    assert three.series.same_form(RationalSeries((0, 7, 1), 2))


def test_nongeneric_section_is_flagged():
    # a "general" element that is a zero divisor: sectioning (x^2, x*y) on R/(x) does not drop d
    R3 = Ring(["x", "y", "z"])
    spec = ModuleSpec.make(ideal(R3, "x*y", "x*z"), ideal(R3, "y*z"))
    try:
        s = section(spec, 2, 1)
    except NonGenericSeed:
        return
    assert s.d == spec.d - 2
