import random

import pytest

from dsmfuse.decision import (
    bel,
    bel_improved,
    cpt,
    decide,
    gpt,
    pl,
    pl_improved,
)
from dsmfuse.errors import EmptyArgument, EmptyCandidates, ModelNotShafer
from dsmfuse.lattice import (
    Frame,
    Model,
    dsm_cardinality,
    enumerate_hyper_power_set,
    exclusivity,
)
from dsmfuse.mass import PreciseMass
from dsmfuse.rules import dempster, dsm_hybrid, smets

F3 = Frame(("th1", "th2", "th3"))
TH1, TH2, TH3 = F3.atom(1), F3.atom(2), F3.atom(3)
SHAFER = Model.shafer(F3)
THIRD_RULED_OUT = Model.shafer(F3, [TH3])


def reports():
    m1 = PreciseMass(F3, {TH1: 0.1, TH2: 0.4, TH3: 0.2, TH1 | TH2: 0.3})
    m2 = PreciseMass(F3, {TH1: 0.5, TH2: 0.1, TH3: 0.3, TH1 | TH2: 0.1})
    return m1, m2


def random_shafer_mass(rng):
    els = [el for el in SHAFER.alive_elements() if not el.is_empty]
    chosen = rng.sample(els, 3)
    weights = [rng.random() + 1e-3 for _ in chosen]
    t = sum(weights)
    return PreciseMass(F3, {el: w / t for el, w in zip(chosen, weights)})


# --- belief and plausibility -----------------------------------------------------

def test_bel_pl_on_a_known_mass():
    m = PreciseMass(F3, {TH1: 0.4, TH1 | TH2: 0.3, TH1 | TH2 | TH3: 0.3})
    assert bel(m, TH1, SHAFER) == pytest.approx(0.4)
    assert bel(m, TH1 | TH2, SHAFER) == pytest.approx(0.7)
    assert pl(m, TH3, SHAFER) == pytest.approx(0.3)
    assert pl(m, TH1, SHAFER) == pytest.approx(1.0)


def test_bel_pl_match_containment_scan():
    rng = random.Random(21)
    for _ in range(30):
        m = random_shafer_mass(rng)
        for a in SHAFER.alive_elements():
            ra = SHAFER.reduce(a)
            expect_bel = sum(v for el, v in m.items()
                             if not SHAFER.reduce(el).is_empty
                             and SHAFER.reduce(el).bits & ~ra.bits == 0)
            expect_pl = sum(v for el, v in m.items()
                            if SHAFER.reduce(el).bits & ra.bits)
            assert bel(m, a, SHAFER) == pytest.approx(expect_bel, abs=1e-12)
            assert pl(m, a, SHAFER) == pytest.approx(expect_pl, abs=1e-12)


def test_bel_never_exceeds_pl():
    rng = random.Random(22)
    for _ in range(30):
        m = random_shafer_mass(rng)
        for a in SHAFER.alive_elements():
            if SHAFER.reduce(a).is_empty:
                continue
            assert bel(m, a, SHAFER) <= pl(m, a, SHAFER) + 1e-12


def test_weighted_bel_pl():
    m = PreciseMass(F3, {TH1: 0.4, TH1 | TH2: 0.6})
    # under Shafer C(th1)=1, C(th1|th2)=2
    assert bel_improved(m, TH1 | TH2, SHAFER) == pytest.approx(0.4 * 1 / 2 + 0.6)
    assert pl_improved(m, TH1, SHAFER) == pytest.approx(0.4 + 0.6 * 1 / 2)
    with pytest.raises(EmptyArgument):
        bel_improved(m, TH3, THIRD_RULED_OUT)
    with pytest.raises(EmptyArgument):
        pl_improved(m, TH3, THIRD_RULED_OUT)


# --- pignistic spread ---------------------------------------------------------------

def test_pignistic_of_the_normalized_consensus():
    m1, m2 = reports()
    r = dempster(THIRD_RULED_OUT, [m1, m2])
    dist = gpt(r.model, r.mass)
    assert dist.prob(TH1) == pytest.approx(0.642857, abs=1e-6)
    assert dist.prob(TH2) == pytest.approx(0.357143, abs=1e-6)
    assert dist.prob(TH1 | TH2) == pytest.approx(1.0, abs=1e-9)
    d = decide(dist)
    assert d.choice == THIRD_RULED_OUT.reduce(TH1)
    assert not d.tie


def test_pignistic_matches_expansion_oracle():
    rng = random.Random(23)
    model = Model.hybrid(F3, [exclusivity(F3, 1, 3)])
    els = [el for el in model.alive_elements() if not el.is_empty]
    for _ in range(20):
        chosen = rng.sample(els, 3)
        weights = [rng.random() + 1e-3 for _ in chosen]
        t = sum(weights)
        m = PreciseMass(F3, {el: w / t for el, w in zip(chosen, weights)})
        dist = gpt(model, m)
        for a in model.alive_elements():
            expect = 0.0
            for x, v in m.items():
                cx = dsm_cardinality(model, x)
                if cx == 0:
                    continue
                expect += v * dsm_cardinality(model, a & x) / cx
            assert dist.prob(a) == pytest.approx(expect, abs=1e-12)


def test_pignistic_is_additive():
    rng = random.Random(24)
    model = Model.free(F3)
    els = [el for el in enumerate_hyper_power_set(F3) if not el.is_empty]
    for _ in range(20):
        chosen = rng.sample(els, 3)
        weights = [rng.random() + 1e-3 for _ in chosen]
        t = sum(weights)
        m = PreciseMass(F3, {el: w / t for el, w in zip(chosen, weights)})
        dist = gpt(model, m)
        x, y = rng.choice(els), rng.choice(els)
        assert dist.prob(x | y) == pytest.approx(
            dist.prob(x) + dist.prob(y) - dist.prob(x & y), abs=1e-9
        )


def test_vacuous_mass_spreads_by_cardinality():
    model = Model.hybrid(F3, [exclusivity(F3, 1, 3), exclusivity(F3, 2, 3)])
    m = PreciseMass.vacuous(F3)
    r = dsm_hybrid(model, [m, m])
    dist = gpt(r.model, r.mass)
    assert dist.prob(TH3) == pytest.approx(0.25)
    assert dist.prob(TH1) == pytest.approx(0.5)
    assert dist.prob(TH1 & TH2) == pytest.approx(0.25)
    assert dist.prob(TH1 | TH2) == pytest.approx(0.75)


def test_bel_betp_pl_sandwich():
    rng = random.Random(25)
    for _ in range(30):
        m = random_shafer_mass(rng)
        dist = gpt(SHAFER, m)
        for i in range(1, 4):
            a = F3.atom(i)
            assert bel(m, a, SHAFER) - 1e-9 <= dist.prob(a) <= pl(m, a, SHAFER) + 1e-9


def test_classical_transform_agrees_under_shafer():
    rng = random.Random(26)
    for _ in range(20):
        m = random_shafer_mass(rng)
        g = gpt(SHAFER, m)
        c = cpt(SHAFER, m)
        assert dict(g.items()) == dict(c.items())


def test_classical_transform_routes_conflict_to_empty():
    m1, m2 = reports()
    r = smets(THIRD_RULED_OUT, [m1, m2])
    dist = cpt(THIRD_RULED_OUT, r.mass)
    assert dist.prob(F3.empty()) == pytest.approx(0.65)
    assert dist.prob(TH1) == pytest.approx(0.225)
    assert dist.prob(TH2) == pytest.approx(0.125)
    g = gpt(THIRD_RULED_OUT, r.mass)
    assert g.prob(F3.empty()) == 0.0
    assert any("skipped" in w for w in g.warnings)


def test_classical_transform_rejects_overlapping_models():
    m = PreciseMass.vacuous(F3)
    with pytest.raises(ModelNotShafer):
        cpt(Model.free(F3), m)


# --- decisions ------------------------------------------------------------------------

def test_decide_ranking_and_candidates():
    m1, m2 = reports()
    r = dsm_hybrid(THIRD_RULED_OUT, [m1, m2])
    dist = gpt(r.model, r.mass)
    d = decide(dist)
    assert d.choice == THIRD_RULED_OUT.reduce(TH1)
    assert [c.expr(style="ascii") for c, _ in d.ranking] == ["th1", "th2"]
    limited = decide(dist, candidates=[TH2])
    assert limited.choice == THIRD_RULED_OUT.reduce(TH2)


def test_decide_flags_exact_ties():
    m = PreciseMass(F3, {TH1: 0.5, TH2: 0.5})
    dist = gpt(SHAFER, m)
    d = decide(dist)
    assert d.tie
    assert d.choice == SHAFER.reduce(TH1)


def test_decide_needs_candidates():
    f = Frame(("a",))
    dead = Model.hybrid(f, [f.atom(1)])
    m = PreciseMass(f, {f.atom(1): 1.0})
    dist = gpt(dead, m)
    with pytest.raises(EmptyCandidates):
        decide(dist)
