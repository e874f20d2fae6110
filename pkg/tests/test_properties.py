"""Property-based checks over generated trees and the rational gcd."""

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from newton_forest.characteristic import rational_divides, rational_gcd
from newton_forest.classify_audit import audit_failures, theorem_audit
from newton_forest.multiplicity import compute_x, compute_x_hat, multiplicities
from newton_forest.oracle_gen import GeneratorConfig, generate
from newton_forest.report import Analysis
from newton_forest.tree_io import parse, serialize
from newton_forest.tree_model import validate_axioms

TREE_SETTINGS = settings(
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)

rationals = st.fractions(
    min_value=-50, max_value=50, max_denominator=12
)


@given(st.lists(rationals, max_size=6))
def test_rational_gcd_generates_the_module(xs):
    g = rational_gcd(xs)
    assert g >= 0
    for x in xs:
        assert rational_divides(g, x)
    # g itself is an integer combination witness: gcd(xs + [g]) == g
    assert rational_gcd(list(xs) + [g]) == g


@given(rationals, st.lists(rationals, min_size=1, max_size=5))
def test_rational_gcd_scales(a, xs):
    assert rational_gcd([a * x for x in xs]) == abs(a) * rational_gcd(xs)


@given(rationals, st.lists(st.integers(-9, 9), min_size=1, max_size=5))
def test_rational_gcd_of_multiples(x, ms):
    values = [x] + [m * x for m in ms]
    assert rational_gcd(values) == abs(x)


def _tree(seed: int):
    return generate(GeneratorConfig(seed=seed, max_cells=36))


@TREE_SETTINGS
@given(st.integers(0, 5000))
def test_generated_trees_are_valid_and_roundtrip(seed):
    tree = _tree(seed)
    assert validate_axioms(tree) == []
    assert serialize(parse(serialize(tree))) == serialize(tree)


@TREE_SETTINGS
@given(st.integers(0, 5000))
def test_path_properties(seed):
    tree = _tree(seed)
    ids = tree.cell_ids()
    root = tree.root
    for x in ids[:6]:
        assert tree.path(x, x) == (x,)
        for y in ids[:6]:
            p = tree.path(x, y)
            assert p[0] == x and p[-1] == y
            assert tree.path(y, x) == p[::-1]
            if x != y:
                below = tree.less_than(x, y)
                above = tree.less_than(y, x)
                assert not (below and above)
                assert below == (x in tree.path(root, y)[:-1])


@TREE_SETTINGS
@given(st.integers(0, 5000))
def test_x_factorization_property(seed):
    tree = _tree(seed)
    table = multiplicities(tree)
    for v in sorted(tree.vertices)[:5]:
        for b in sorted(tree.arrows1)[:5]:
            step = tree.path(v, b)[1]
            e = tree.edge_between(v, step)
            assert compute_x(tree, v, b) == tree.Q(e, v) * compute_x_hat(tree, v, b)
            assert table.x[(v, b)] == compute_x(tree, v, b)


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.integers(0, 5000))
def test_audits_hold_on_arbitrary_generated_trees(seed):
    tree = _tree(seed)
    assert audit_failures(theorem_audit(tree)) == []


@settings(max_examples=15, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.integers(0, 5000))
def test_decomposition_covering_property(seed):
    tree = _tree(seed)
    a = Analysis.build(tree)
    for z, dec in a.decompositions.items():
        covered = set()
        for cls in dec.classes:
            assert not (covered & cls.Y)
            covered |= cls.Y
        if dec.classes:
            assert covered == set(a.glob.script_N) - set(a.struct.V_bar[z])
