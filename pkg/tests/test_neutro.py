import itertools

import pytest

from dsmfuse.errors import ValidationError, ZeroSum
from dsmfuse.lattice import Frame, Model, exclusivity
from dsmfuse.mass import PreciseMass, SubunitarySet, parse_set
from dsmfuse.neutro import (
    NeutrosophicTriple,
    TripleMass,
    nconorm,
    nconorm_fusion,
    nl_conjunction,
    nl_disjunction,
    nl_negation,
    nnorm,
    nnorm_fusion,
    normalize_triple,
    ns_complement,
    ns_difference,
    ns_intersection,
    ns_union,
)
from dsmfuse.rules import TCONORMS, TNORMS, dsm_classic

F3 = Frame(("th1", "th2", "th3"))
TH1, TH2, TH3 = F3.atom(1), F3.atom(2), F3.atom(3)

GRID = [0.0, 0.25, 0.5, 0.75, 1.0]


def points(t):
    return tuple(round(x, 9) for x in t.as_points())


# --- triples --------------------------------------------------------------------

def test_triple_coercion_and_points():
    t = NeutrosophicTriple.of(0.6, 0.1, 0.3)
    assert t.is_point
    assert t.as_points() == (0.6, 0.1, 0.3)
    s = NeutrosophicTriple.of(parse_set("[0.2,0.4]"), 0.1, 0.0)
    assert not s.is_point


def test_component_sum_not_forced_to_one():
    t = NeutrosophicTriple.of(0.9, 0.8, 0.7)
    assert t.component_sum() == pytest.approx(2.4)


def test_normalize_triple():
    t = normalize_triple(NeutrosophicTriple.of(0.5, 0.25, 0.25))
    assert points(t) == (0.5, 0.25, 0.25)
    t = normalize_triple(NeutrosophicTriple.of(1.0, 0.5, 0.5))
    assert points(t) == (0.5, 0.25, 0.25)
    with pytest.raises(ZeroSum):
        normalize_triple(NeutrosophicTriple.of(0.0, 0.0, 0.0))


# --- connectors ------------------------------------------------------------------

def test_negation_flips_componentwise():
    t = NeutrosophicTriple.of(0.6, 0.1, 0.3)
    assert points(nl_negation(t)) == (0.4, 0.9, 0.7)
    assert points(ns_complement(t)) == (0.4, 0.9, 0.7)


def test_conjunction_is_componentwise_product():
    a = NeutrosophicTriple.of(0.6, 0.1, 0.3)
    b = NeutrosophicTriple.of(0.5, 0.3, 0.2)
    assert points(nl_conjunction(a, b)) == (0.3, 0.03, 0.06)
    assert points(ns_intersection(a, b)) == (0.3, 0.03, 0.06)


def test_disjunction_is_probabilistic_sum():
    a = NeutrosophicTriple.of(0.6, 0.1, 0.3)
    b = NeutrosophicTriple.of(0.5, 0.3, 0.2)
    expect = (0.6 + 0.5 - 0.3, 0.1 + 0.3 - 0.03, 0.3 + 0.2 - 0.06)
    assert points(nl_disjunction(a, b)) == tuple(round(x, 9) for x in expect)
    assert points(ns_union(a, b)) == points(nl_disjunction(a, b))


def test_difference_subtracts_the_overlap():
    a = NeutrosophicTriple.of(0.6, 0.1, 0.3)
    b = NeutrosophicTriple.of(0.5, 0.3, 0.2)
    assert points(ns_difference(a, b)) == (0.3, 0.07, 0.24)


def test_connectors_clamp_to_the_unit_interval():
    a = NeutrosophicTriple.of(parse_set("[0.8,1.0]"), 0.0, 1.0)
    b = NeutrosophicTriple.of(parse_set("[0.9,1.0]"), 0.0, 1.0)
    c = nl_disjunction(a, b)
    assert c.truth.sup <= 1.0
    assert c.falsehood.sup <= 1.0


def test_set_valued_connector_arithmetic():
    a = NeutrosophicTriple.of(parse_set("[0.2,0.4]"), 0.1, 0.0)
    b = NeutrosophicTriple.of(parse_set("[0.5,0.5]"), 0.2, 0.0)
    c = nl_conjunction(a, b)
    assert c.truth.approx_equal(parse_set("[0.1,0.2]"))


# --- shaped kernels -----------------------------------------------------------------

@pytest.mark.parametrize("kind", sorted(TNORMS))
def test_nnorm_axioms_on_the_grid(kind):
    f = TNORMS[kind]
    for x, y in itertools.product(GRID, GRID):
        assert f(x, y) == pytest.approx(f(y, x))
        assert 0.0 <= f(x, y) <= 1.0
        assert f(x, 1.0) == pytest.approx(x)
    for x, y, z in itertools.product(GRID, GRID, GRID):
        assert f(f(x, y), z) == pytest.approx(f(x, f(y, z)))
        if y <= z:
            assert f(x, y) <= f(x, z) + 1e-12


@pytest.mark.parametrize("kind", sorted(TCONORMS))
def test_nconorm_axioms_on_the_grid(kind):
    g = TCONORMS[kind]
    for x, y in itertools.product(GRID, GRID):
        assert g(x, y) == pytest.approx(g(y, x))
        assert 0.0 <= g(x, y) <= 1.0
        assert g(x, 0.0) == pytest.approx(x)
    for x, y, z in itertools.product(GRID, GRID, GRID):
        assert g(g(x, y), z) == pytest.approx(g(x, g(y, z)))
        if y <= z:
            assert g(x, y) <= g(x, z) + 1e-12


def test_triple_kernels_apply_componentwise():
    a = NeutrosophicTriple.of(0.6, 0.1, 0.3)
    b = NeutrosophicTriple.of(0.5, 0.3, 0.2)
    assert points(nnorm("algebraic", a, b)) == (0.3, 0.03, 0.06)
    assert points(nnorm("min", a, b)) == (0.5, 0.1, 0.2)
    assert points(nconorm("max", a, b)) == (0.6, 0.3, 0.3)
    assert points(nconorm("bounded", a, b)) == (1.0, 0.4, 0.5)


# --- fusion ---------------------------------------------------------------------------

def sample_sources():
    m1 = TripleMass(F3, {TH1: NeutrosophicTriple.of(0.6, 0.1, 0.3),
                         TH2: NeutrosophicTriple.of(0.8, 0.0, 0.2)})
    m2 = TripleMass(F3, {TH1: NeutrosophicTriple.of(0.5, 0.3, 0.2),
                         TH2: NeutrosophicTriple.of(0.7, 0.2, 0.1)})
    return m1, m2


def test_conjunctive_triple_fusion_normalized_values():
    m1, m2 = sample_sources()
    r = nnorm_fusion("algebraic", [m1, m2])
    got = {el.expr(style="ascii"): points(v) for el, v in r.mass.items()}
    assert got["th1"] == pytest.approx((0.769231, 0.076923, 0.153846), abs=1e-6)
    assert got["th2"] == pytest.approx((0.965517, 0.0, 0.034483), abs=1e-6)
    assert got["th1&th2"] == pytest.approx((0.901099, 0.021978, 0.076923), abs=1e-6)


def test_disjunctive_triple_fusion_normalized_values():
    m1, m2 = sample_sources()
    r = nconorm_fusion("algebraic", [m1, m2])
    got = {el.expr(style="ascii"): points(v) for el, v in r.mass.items()}
    assert got["th1"] == pytest.approx((0.496894, 0.229814, 0.273292), abs=1e-6)
    assert got["th2"] == pytest.approx((0.661972, 0.140845, 0.197183), abs=1e-6)
    assert got["th1|th2"] == pytest.approx((0.576052, 0.187702, 0.236246), abs=1e-6)


def test_exclusive_model_moves_the_product_to_the_union():
    m1, m2 = sample_sources()
    model = Model.hybrid(F3, [exclusivity(F3, 1, 2)])
    r = nnorm_fusion("algebraic", [m1, m2], model=model)
    got = {el.expr(style="ascii"): points(v) for el, v in r.mass.items()}
    assert got["th1|th2"] == pytest.approx((0.901099, 0.021978, 0.076923), abs=1e-6)
    assert r.conflict == pytest.approx(0.82)


def test_raw_fusion_bridges_to_the_precise_conjunctive_rule():
    # with truth components forming a proper mass, the unnormalized truth
    # channel of the algebraic fusion is exactly the conjunctive consensus
    t1 = PreciseMass(F3, {TH1: 0.3, TH2: 0.7})
    t2 = PreciseMass(F3, {TH1: 0.6, TH2: 0.4})
    m1 = TripleMass(F3, {TH1: NeutrosophicTriple.of(0.3, 0.2, 0.1),
                         TH2: NeutrosophicTriple.of(0.7, 0.0, 0.3)})
    m2 = TripleMass(F3, {TH1: NeutrosophicTriple.of(0.6, 0.5, 0.2),
                         TH2: NeutrosophicTriple.of(0.4, 0.1, 0.0)})
    raw = nnorm_fusion("algebraic", [m1, m2], normalize=False)
    classic = dsm_classic([t1, t2])
    for el, v in raw.mass.items():
        assert v.truth.as_point() == classic.mass.mass(el)


def test_triple_mass_validation():
    bad_component = TripleMass(F3, {TH1: NeutrosophicTriple.of(1.2, 0.0, 0.0)})
    assert bad_component.validate()
    on_empty = TripleMass(F3, {F3.empty(): NeutrosophicTriple.of(0.5, 0.2, 0.3)})
    assert on_empty.validate()
    set_valued = TripleMass(
        F3, {TH1: NeutrosophicTriple.of(parse_set("[0.1,0.2]"), 0.0, 0.0)}
    )
    assert set_valued.validate()
    with pytest.raises(ValidationError):
        bad_component.check()


def test_fusion_rejects_mismatched_sources():
    m1, _ = sample_sources()
    other = TripleMass(Frame(("a", "b")),
                       {Frame(("a", "b")).atom(1): NeutrosophicTriple.of(1, 0, 0)})
    with pytest.raises(Exception):
        nnorm_fusion("algebraic", [m1, other])
    with pytest.raises(ValidationError):
        nnorm_fusion("algebraic", [m1, sample_sources()[0], sample_sources()[1]])
