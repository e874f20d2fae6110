from fractions import Fraction

import pytest

from newton_forest.errors import GenerationError
from newton_forest.multiplicity import multiplicities
from newton_forest.oracle_gen import (
    GeneratorConfig,
    generate,
    oracle_N,
    oracle_c,
    oracle_delta_tilde_N,
)
from newton_forest.report import Analysis
from newton_forest.tree_io import fixture_T_D, fixture_corpus, serialize
from newton_forest.tree_model import validate_axioms


def test_oracle_N_matches_engine_on_fixtures():
    for name, tree in fixture_corpus().items():
        table = multiplicities(tree)
        for v in sorted(tree.vertices | tree.arrows0):
            assert oracle_N(tree, v) == table.N[v], (name, v)


def test_oracle_c_T_D():
    t = fixture_T_D()
    e = t.edge_between("v0", "w")
    assert oracle_c(t, "v0", e) == Fraction(3, 2)
    assert oracle_c(t, "w", e) == 6


def test_oracle_c_rejects_bad_pairs():
    t = fixture_T_D()
    with pytest.raises(ValueError):
        oracle_c(t, "u", t.edge_between("w", "u"))


def test_oracle_delta_tilde_T_D():
    assert oracle_delta_tilde_N(fixture_T_D()) == -4


def test_oracle_delta_tilde_fixtures():
    from newton_forest.local_invariants import global_ledger

    for name, tree in fixture_corpus().items():
        assert oracle_delta_tilde_N(tree) == global_ledger(tree).delta_tilde_N, name


def test_generate_reproducible():
    a = generate(GeneratorConfig(seed=42, max_cells=40))
    b = generate(GeneratorConfig(seed=42, max_cells=40))
    assert serialize(a) == serialize(b)
    c = generate(GeneratorConfig(seed=43, max_cells=40))
    assert serialize(c) != serialize(a)


def test_generated_trees_validate():
    from newton_forest.multiplicity import classify

    for seed in range(25):
        tree = generate(GeneratorConfig(seed=seed, max_cells=40))
        assert validate_axioms(tree) == []
        info = classify(tree)
        assert info.generic and info.minimally_complete
        assert len(tree.cells) <= 40


def test_generate_rational_filter():
    import math

    tree = generate(GeneratorConfig(seed=5, max_cells=40, rational=True))
    a = Analysis.build(tree)
    assert a.glob.delta_tilde_N == 0
    degs = [a.info.degree[u] for u in sorted(a.glob.script_D)]
    assert math.gcd(*degs) == 1


def test_generate_target_filter():
    tree = generate(GeneratorConfig(seed=2, max_cells=40, target_delta_tilde=2))
    assert Analysis.build(tree).glob.delta_tilde_N == 2


def test_generation_budget_error():
    with pytest.raises(GenerationError) as err:
        generate(
            GeneratorConfig(
                seed=0, max_cells=40, target_delta_tilde=999, max_attempts=50
            )
        )
    assert err.value.attempts == 50


def test_oracle_agreement_on_generated():
    for seed in (3, 17, 31):
        tree = generate(GeneratorConfig(seed=seed, max_cells=40))
        a = Analysis.build(tree)
        for v in sorted(tree.vertices | tree.arrows0):
            assert oracle_N(tree, v) == a.table.N[v]
        for (u, e), data in a.chars.pairs.items():
            assert oracle_c(tree, u, e) == data.c
        assert oracle_delta_tilde_N(tree) == a.glob.delta_tilde_N


def test_coverage_over_a_small_corpus():
    # the acceptance corpus asserts this over 1000 seeds; keep a quick gate here
    seen = {"single": 0, "brush": 0, "omega0": 0, "omega1": 0, "omega2": 0, "multi": 0}
    for seed in range(150):
        tree = generate(GeneratorConfig(seed=seed, max_cells=40))
        a = Analysis.build(tree)
        seen["single"] += len(a.glob.script_N) == 1
        seen["brush"] += a.struct.is_brush
        seen[f"omega{len(a.struct.Omega)}"] += 1
        seen["multi"] += any(len(d.classes) >= 2 for d in a.decompositions.values())
    assert all(count > 0 for count in seen.values()), seen
