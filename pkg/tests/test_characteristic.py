from fractions import Fraction

import pytest

from newton_forest.characteristic import (
    R_and_delta_bar,
    build_poset,
    characteristic_numbers,
    h_products,
    path_dead_end_product,
    rational_divides,
    rational_gcd,
)
from newton_forest.local_invariants import vertex_ledger
from newton_forest.report import Analysis
from newton_forest.tree_io import fixture_T_A, fixture_T_B, fixture_T_C, fixture_T_D


def test_rational_gcd_basic():
    assert rational_gcd([Fraction(1, 2), Fraction(1, 3)]) == Fraction(1, 6)
    assert rational_gcd([]) == 0
    assert rational_gcd([Fraction(0)]) == 0


def test_rational_gcd_multiples():
    for x in (Fraction(3, 7), Fraction(-5, 4), Fraction(2)):
        assert rational_gcd([x, 2 * x, 5 * x]) == abs(x)


def test_rational_gcd_with_integers_matches_int_gcd():
    assert rational_gcd([6, 10, 15]) == 1
    assert rational_gcd([6, 10]) == 2
    assert rational_gcd([0, 4, 6]) == 2


def test_rational_divides():
    assert rational_divides(Fraction(3, 2), 6)
    assert not rational_divides(Fraction(3, 2), 2)
    assert rational_divides(0, 0)
    assert not rational_divides(0, 1)


def test_poset_T_A_empty():
    assert build_poset(fixture_T_A()).elements == ()


def test_poset_T_D():
    t = fixture_T_D()
    poset = build_poset(t)
    e = t.edge_between("v0", "w")
    assert set(poset.elements) == {("v0", e), ("w", e)}
    assert poset.minimal == {("v0", e), ("w", e)}
    assert not poset.comparable(("v0", e), ("w", e))


def test_alpha_products_T_D():
    t = fixture_T_D()
    assert path_dead_end_product(t, "v0", "w") == 2
    assert path_dead_end_product(t, "v0", "w", include_y=False) == 1
    assert path_dead_end_product(t, "v0", "w", include_x=False) == 2
    assert path_dead_end_product(t, "w", "w", include_x=False, include_y=False) == 1
    assert path_dead_end_product(t, "w", "w") == 2


def test_characteristic_numbers_T_D():
    t = fixture_T_D()
    chars = characteristic_numbers(t)
    e = t.edge_between("v0", "w")
    assert chars.c("w", e) == 6
    assert chars.M("w", e) == 1
    assert chars.c("v0", e) == Fraction(3, 2)
    assert chars.M("v0", e) == 4
    assert chars.eta("w", e) == 0
    assert chars.eta("v0", e) == Fraction(3, 2)
    assert chars.pairs[("w", e)].nonpositive
    assert not chars.pairs[("v0", e)].nonpositive


def test_minimal_pair_at_bare_root():
    # the far end of the only positive edge is a non-node root of valency 1,
    # so the characteristic number equals its multiplicity
    t = fixture_T_D()
    chars = characteristic_numbers(t)
    e = t.edge_between("v0", "w")
    assert chars.c("w", e) == 6  # N at the root


def test_p_and_p_prime_split():
    t = fixture_T_D()
    chars = characteristic_numbers(t)
    e = t.edge_between("v0", "w")
    assert chars.pairs[("v0", e)].p == 6
    assert chars.pairs[("v0", e)].p_prime == 0
    assert chars.pairs[("w", e)].p == 0
    assert chars.pairs[("w", e)].p_prime == 6


def test_R_and_delta_bar_T_D():
    t = fixture_T_D()
    ledger = vertex_ledger(t)
    chars = characteristic_numbers(t, ledger=ledger)
    e = t.edge_between("v0", "w")
    R, bar = R_and_delta_bar(t, ledger, chars, "w", [e])
    assert R == 1
    assert bar == -4
    R, bar = R_and_delta_bar(t, ledger, chars, "v0", [e])
    assert R == Fraction(3, 4)
    R, bar = R_and_delta_bar(t, ledger, chars, "v0", [])
    assert R == 0
    assert bar == -5


def test_R_rejects_foreign_edges():
    t = fixture_T_D()
    ledger = vertex_ledger(t)
    chars = characteristic_numbers(t, ledger=ledger)
    dead = t.edge_between("w", "ow")
    with pytest.raises(ValueError):
        R_and_delta_bar(t, ledger, chars, "w", [dead])


def test_h_products_singleton_is_x():
    from newton_forest.multiplicity import compute_x, compute_x_hat

    for t in (fixture_T_B(1, 2), fixture_T_C((1, 2, 3)), fixture_T_D()):
        for w in sorted(t.vertices):
            for alpha in sorted(t.arrows1):
                h, h_hat = h_products(t, w, [alpha])
                assert h == compute_x(t, w, alpha)
                assert h_hat == compute_x_hat(t, w, alpha)


def test_h_products_T_B_both_arrows():
    t = fixture_T_B(1, 2)
    h, h_hat = h_products(t, "v0", ["t1", "t2"])
    assert h == 1 and h_hat == 1


def test_h_products_T_C_own_fan():
    t = fixture_T_C((1, 2, 3))
    h, h_hat = h_products(t, "u2", ["t2_1", "t2_2"])
    assert h == -2  # dead end (1) times the root-edge decoration (-2)
    assert h_hat == 1


def test_h_products_need_arrows():
    with pytest.raises(ValueError):
        h_products(fixture_T_A(), "v0", [])


def test_monotonicity_on_chain():
    # three-vertex skeleton from the analysis pipeline of a generated tree
    from newton_forest.oracle_gen import GeneratorConfig, generate

    tree = generate(GeneratorConfig(seed=11, max_cells=40))
    a = Analysis.build(tree)
    for top in a.poset.elements:
        for bot in a.poset.elements:
            if a.poset.precedes(bot, top):
                assert a.chars.pairs[top].c <= a.chars.pairs[bot].c
                assert a.chars.pairs[top].eta >= a.chars.pairs[bot].eta
