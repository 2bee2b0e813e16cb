import pytest

import oracle
from conftest import poly
from ghilb.algebra import GREVLEX, LEX, Ring
from ghilb.groebner import (
    BudgetExceeded,
    groebner_basis,
    hilbert_numerator_monomial,
    is_groebner,
    normal_form,
)
from ghilb.series import RationalSeries


def test_normal_forms(xy):
    G = groebner_basis([poly(xy, "x^2")])
    assert normal_form(poly(xy, "x^2*y"), G).is_zero()
    G = groebner_basis([poly(xy, "x^2"), poly(xy, "x*y")])
    assert normal_form(poly(xy, "y^3"), G) == poly(xy, "y^3")
    G = groebner_basis([poly(xy, "x^2-y^2")])
    assert normal_form(poly(xy, "x^2+y^2"), G) == poly(xy, "2*y^2")


def test_basis_of_variables(xy):
    G = groebner_basis([xy.var("x"), xy.var("y")])
    assert sorted(G.lead_monomials) == [(0, 1), (1, 0)]


def test_lex_nonhomogeneous(xy):
    # x*y = 1 and x^2 = y force x = x^2*y = y^2 and then y^3 = 1
    G = groebner_basis([poly(xy, "x^2-y"), poly(xy, "x*y-1")], LEX)
    assert sorted(G.elements, key=lambda f: f.degree()) == [poly(xy, "x-y^2"), poly(xy, "y^3-1")]
    assert is_groebner(G)


def test_idempotent_and_reduced():
    R = Ring(["x", "y", "z", "v"])
    gens = [poly(R, t) for t in ("x^2-y*v", "x*y-z*v", "y^2-x*z", "x*z-v^2")]
    G = groebner_basis(gens)
    H = groebner_basis(G.elements)
    assert G.elements == H.elements
    leads = G.lead_monomials
    for i, a in enumerate(leads):
        for j, b in enumerate(leads):
            if i != j:
                assert not all(x <= y for x, y in zip(a, b))
    assert all(g.leading_term(GREVLEX)[1] == 1 for g in G)


def test_minors_b_membership_matches_oracle(module_b):
    I = module_b.I
    R = I.ring
    G = I.gb()
    gens = [f.coeffs for f in I.gens]
    n = R.nvars
    checked = 0
    for d in range(2, 6):
        for m in oracle.monomials(n, d):
            f = R.monomial(m)
            assert G.contains(f) == oracle.in_ideal(gens, {m: 1}, n)
            checked += 1
    # a couple of non-monomial elements, one in the ideal and one not
    g = I.gens[0] * R.var(0) + I.gens[1] * R.var(3)
    assert G.contains(g) and oracle.in_ideal(gens, g.coeffs, n)
    h = g + R.monomial((0, 0, 0, 3))
    assert not G.contains(h) and not oracle.in_ideal(gens, h.coeffs, n)
    assert checked > 0


def test_budget(module_b):
    gens = list(module_b.I.gens)
    with pytest.raises(BudgetExceeded):
        groebner_basis(gens, LEX, budget=3)
    assert is_groebner(groebner_basis(gens, LEX))


def test_hilbert_numerators():
    assert hilbert_numerator_monomial([], 2) == [1]
    assert hilbert_numerator_monomial([(2, 0), (1, 1)]) == [1, 0, -2, 1]
    assert hilbert_numerator_monomial([(1, 0)]) == [1, -1]
    # non-minimal input is minimalized
    assert hilbert_numerator_monomial([(2, 0), (1, 1), (3, 1)]) == [1, 0, -2, 1]


@pytest.mark.parametrize("gens", [
    [(2, 0, 0), (1, 1, 0), (0, 1, 2)],
    [(1, 1, 1)],
    [(3, 0, 0), (0, 3, 0), (0, 0, 3)],
    [(1, 0, 0), (0, 2, 1)],
])
def test_numerator_matches_enumeration(gens):
    s = RationalSeries(tuple(hilbert_numerator_monomial(gens, 3)), 3)
    assert s.expand(11) == oracle.dims_by_degree_monomial(gens, 3, 10)
