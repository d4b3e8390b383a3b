"""Combination rules for precise and imprecise mass functions.

All conjunctive rules walk the same deterministic stream of focal-element
tuples (the cartesian product of each source's focal elements in
(cardinality, bit pattern) order) and differ only in where a tuple's mass
lands:

- the classic rule keeps every free-lattice intersection;
- the transfer rule reroutes mass whose intersection the model forbids,
  either to the union of the hypotheses involved or, when every component
  is itself forbidden, to the union of their component hypotheses, falling
  back to total ignorance;
- dempster normalizes the forbidden mass away, smets parks it on the empty
  element, yager parks it on total ignorance;
- dubois_prade retries the pairwise union and drops mass whose union is
  also forbidden, leaving a subnormal output with a warning.

The imprecise variants run the identical stream with set-valued products
and sums, so point-valued inputs reproduce the precise results to the
bit.
"""

from dataclasses import dataclass
from itertools import product

from .errors import (
    DegenerateNormalization,
    FewerThanTwoSources,
    FrameMismatch,
    NotASubset,
    TotalConflict,
    ValidationError,
)
from .lattice import Model, component_union, dsm_cardinality, upward_closure
from .mass import ImpreciseMass, PreciseMass, SubunitarySet, is_admissible

_NEAR_ZERO = 1e-12

# Where a forbidden intersection's mass goes: the union of the hypotheses
# its canonical form mentions, or the plain union of the focal elements.
S3_COMPONENTS = "components"
S3_UNION = "union"


@dataclass(frozen=True)
class FusionReport:
    """Outcome of one combination: the fused mass plus bookkeeping."""

    rule: str
    model: Model
    mass: object
    conflict: object
    warnings: tuple = ()

    def mass_of(self, element):
        """Fused mass of an element, looked up modulo the model (the output
        is keyed by reduced elements)."""
        return self.mass.mass(self.model.reduce(element))


# --- shared plumbing ---------------------------------------------------------

def _prepare(sources, rule, imprecise=False, exactly=None):
    wanted = ImpreciseMass if imprecise else PreciseMass
    if len(sources) < 2:
        raise FewerThanTwoSources(f"{rule} needs at least two sources")
    if exactly is not None and len(sources) != exactly:
        raise ValidationError([f"{rule} combines exactly {exactly} sources, got {len(sources)}"])
    frame = sources[0].frame
    warnings = []
    for i, m in enumerate(sources):
        if not isinstance(m, wanted):
            raise TypeError(f"{rule} expects {wanted.__name__}, got {type(m).__name__}")
        if m.frame != frame:
            raise FrameMismatch("sources live on different frames")
        problems = m.validate()
        if problems:
            raise ValidationError([f"source {i + 1}: {p}" for p in problems])
        if imprecise and not is_admissible(m):
            warnings.append(f"source {i + 1} is not admissible; fusing anyway")
    return frame, warnings


def _focal_items(m):
    if isinstance(m, ImpreciseMass):
        return [(el, s) for el, s in m.items() if not (s.is_point and s.as_point() == 0.0)]
    return [(el, v) for el, v in m.items() if v != 0.0]


def _tuple_stream(sources):
    """Deterministic cartesian product of focal items, with the tuple's
    combined value folded left so precise and imprecise runs agree."""
    for combo in product(*(_focal_items(m) for m in sources)):
        els = [el for el, _ in combo]
        v = combo[0][1]
        for _, vi in combo[1:]:
            v = v * vi
        yield els, v


def _meet_all(els):
    x = els[0]
    for e in els[1:]:
        x = x & e
    return x


def _join_all(els):
    x = els[0]
    for e in els[1:]:
        x = x | e
    return x


def _zero_like(sources):
    return SubunitarySet.point(0.0) if isinstance(sources[0], ImpreciseMass) else 0.0


def _wrap(sources, frame, acc, allows_empty_focal=False):
    cls = ImpreciseMass if isinstance(sources[0], ImpreciseMass) else PreciseMass
    return cls(frame, acc, allows_empty_focal)


def _conflict_total(conflict):
    return conflict.sup if isinstance(conflict, SubunitarySet) else conflict


def _route(model, els, s3_target, it_reduced):
    """Landing site for one tuple: ("alive"|"transfer", reduced element)."""
    inter = _meet_all(els)
    reduced = model.reduce(inter)
    if reduced.bits:
        return "alive", reduced
    if inter.bits == 0:
        # Focal elements keyed by reduced representatives have lost their
        # dead parts, so the raw meet can bottom out even though the free
        # meet never does. Rebuild it; the canonical form needs it.
        inter = _meet_all([upward_closure(e) for e in els])
    if all(model.is_model_empty(e) for e in els):
        target = model.reduce(_join_all([component_union(e) for e in els]))
    elif s3_target == S3_COMPONENTS:
        target = model.reduce(component_union(inter))
    else:
        target = model.reduce(_join_all(els))
    if not target.bits:
        target = it_reduced
    return "transfer", target


def _transfer_engine(model, sources, s3_target, value=None):
    """Conjunctive walk with rerouting of forbidden mass.

    value, when given, replaces the plain product for two-source rules
    (the T-norm variants); it must accept two mass values.
    """
    model.check_not_degenerate()
    it_reduced = model.reduce(model.frame.total_ignorance())
    zero = _zero_like(sources)
    acc = {}
    conflict = zero
    warnings = []
    for els, v in _tuple_stream(sources):
        if value is not None:
            v = value(els)
        kind, key = _route(model, els, s3_target, it_reduced)
        if kind == "transfer":
            conflict = conflict + v
        acc[key] = acc.get(key, zero) + v
    return acc, conflict, warnings


def _conjunctive_split(model, sources):
    """Alive mass per reduced element plus the total forbidden mass."""
    zero = _zero_like(sources)
    alive = {}
    dead = zero
    for els, v in _tuple_stream(sources):
        reduced = model.reduce(_meet_all(els))
        if reduced.bits:
            alive[reduced] = alive.get(reduced, zero) + v
        else:
            dead = dead + v
    return alive, dead


# --- classic and transfer rules ----------------------------------------------

def dsm_classic(sources):
    """Conjunctive consensus on the free lattice; never any conflict."""
    frame, warnings = _prepare(sources, "dsm_classic")
    model = Model.free(frame)
    acc, conflict, extra = _transfer_engine(model, sources, S3_COMPONENTS)
    return FusionReport("dsm_classic", model, _wrap(sources, frame, acc), conflict,
                        tuple(warnings + extra))


def dsm_hybrid(model, sources, s3_target=S3_COMPONENTS):
    """Conjunctive consensus with forbidden mass rerouted under the model."""
    frame, warnings = _prepare(sources, "dsm_hybrid")
    _check_model(model, frame)
    acc, conflict, extra = _transfer_engine(model, sources, s3_target)
    return FusionReport("dsm_hybrid", model, _wrap(sources, frame, acc), conflict,
                        tuple(warnings + extra))


def dsm_classic_imprecise(sources):
    frame, warnings = _prepare(sources, "dsm_classic_imprecise", imprecise=True)
    model = Model.free(frame)
    acc, conflict, extra = _transfer_engine(model, sources, S3_COMPONENTS)
    return FusionReport("dsm_classic_imprecise", model, _wrap(sources, frame, acc), conflict,
                        tuple(warnings + extra))


def dsm_hybrid_imprecise(model, sources, s3_target=S3_COMPONENTS):
    frame, warnings = _prepare(sources, "dsm_hybrid_imprecise", imprecise=True)
    _check_model(model, frame)
    acc, conflict, extra = _transfer_engine(model, sources, s3_target)
    return FusionReport("dsm_hybrid_imprecise", model, _wrap(sources, frame, acc), conflict,
                        tuple(warnings + extra))


def _check_model(model, frame):
    if model.frame != frame:
        raise FrameMismatch("model frame differs from the sources' frame")


def dempster(model, sources):
    """Conjunctive consensus normalized by the non-conflicting mass."""
    frame, warnings = _prepare(sources, "dempster")
    _check_model(model, frame)
    model.check_not_degenerate()
    alive, dead = _conjunctive_split(model, sources)
    if 1.0 - dead <= _NEAR_ZERO:
        raise TotalConflict(f"sources are fully conflicting (k12={dead})")
    scale = 1.0 - dead
    acc = {el: v / scale for el, v in alive.items()}
    return FusionReport("dempster", model, _wrap(sources, frame, acc), dead, tuple(warnings))


def smets(model, sources):
    """Conjunctive consensus with the conflicting mass kept on the empty
    element (open-world reading)."""
    frame, warnings = _prepare(sources, "smets")
    _check_model(model, frame)
    model.check_not_degenerate()
    alive, dead = _conjunctive_split(model, sources)
    if dead > 0.0:
        alive[frame.empty()] = alive.get(frame.empty(), 0.0) + dead
    return FusionReport("smets", model, _wrap(sources, frame, alive, allows_empty_focal=True),
                        dead, tuple(warnings))


def yager(model, sources):
    """Conjunctive consensus with the conflicting mass moved to total
    ignorance."""
    frame, warnings = _prepare(sources, "yager")
    _check_model(model, frame)
    model.check_not_degenerate()
    alive, dead = _conjunctive_split(model, sources)
    if dead > 0.0:
        it = model.reduce(frame.total_ignorance())
        alive[it] = alive.get(it, 0.0) + dead
    return FusionReport("yager", model, _wrap(sources, frame, alive), dead, tuple(warnings))


def dubois_prade(model, sources):
    """Pairwise rule: keep live intersections, retry the union for
    forbidden ones, drop mass whose union is forbidden too (subnormal
    output plus a warning, no renormalization)."""
    frame, warnings = _prepare(sources, "dubois_prade", exactly=2)
    _check_model(model, frame)
    model.check_not_degenerate()
    acc = {}
    dead = 0.0
    lost = 0.0
    for els, v in _tuple_stream(sources):
        reduced = model.reduce(_meet_all(els))
        if reduced.bits:
            acc[reduced] = acc.get(reduced, 0.0) + v
            continue
        dead += v
        union = model.reduce(_join_all(els))
        if union.bits:
            acc[union] = acc.get(union, 0.0) + v
        else:
            lost += v
    out_warnings = list(warnings)
    if lost > 0.0:
        out_warnings.append(
            f"mass {lost:.6f} fell on forbidden unions; output is subnormal"
            f" (total {1.0 - lost:.6f})"
        )
    return FusionReport("dubois_prade", model, _wrap(sources, frame, acc), dead,
                        tuple(out_warnings))


def disjunctive(sources, model=None):
    """Union consensus: each tuple's mass lands on the join of its focal
    elements."""
    frame, warnings = _prepare(sources, "disjunctive")
    if model is None:
        model = Model.free(frame)
    _check_model(model, frame)
    model.check_not_degenerate()
    acc = {}
    for els, v in _tuple_stream(sources):
        key = model.reduce(_join_all(els))
        acc[key] = acc.get(key, 0.0) + v
    return FusionReport("disjunctive", model, _wrap(sources, frame, acc), 0.0, tuple(warnings))


# --- similarity degrees --------------------------------------------------------

def degree_of_intersection(model, x, y):
    """Shared fraction of two elements: |x meet y| / |x join y| under the
    model's cardinality. Both elements forbidden counts as identical (1)."""
    cu = dsm_cardinality(model, x | y)
    if cu == 0:
        return 1.0
    return dsm_cardinality(model, x & y) / cu


def degree_of_union(model, x, y):
    """Complementary fraction: (|x join y| - |x meet y|) / |x join y|."""
    cu = dsm_cardinality(model, x | y)
    if cu == 0:
        return 0.0
    return (cu - dsm_cardinality(model, x & y)) / cu


def degree_of_inclusion(model, x, y):
    """|x| / |y| when the model makes x a subset of y."""
    rx = model.reduce(x)
    ry = model.reduce(y)
    if rx.bits & ~ry.bits:
        raise NotASubset(f"{x.expr()} is not contained in {y.expr()} under the model")
    if ry.bits == 0:
        return 1.0
    return rx.bits.bit_count() / ry.bits.bit_count()


# --- degree-weighted (improved) rules ----------------------------------------

def _normalize_acc(acc, rule):
    total = sum(acc.values())
    if total <= _NEAR_ZERO:
        raise DegenerateNormalization(f"{rule}: every weighted product vanished")
    return {el: v / total for el, v in acc.items()}, total


def dsmc_improved(sources, model=None):
    """Classic conjunctive rule with each product weighted by how much the
    pair actually overlaps, renormalized at the end."""
    frame, warnings = _prepare(sources, "dsmc_improved", exactly=2)
    if model is None:
        model = Model.free(frame)
    _check_model(model, frame)
    acc = {}
    conflict = 0.0
    for (x, y), v in _pairs(sources):
        reduced = model.reduce(x & y)
        if not reduced.bits:
            # Weight 0 except for the all-forbidden corner; either way the
            # classic-with-degrees rule keeps no mass on forbidden elements.
            conflict += v
            continue
        w = degree_of_intersection(model, x, y)
        if w:
            acc[reduced] = acc.get(reduced, 0.0) + w * v
    acc, _ = _normalize_acc(acc, "dsmc_improved")
    return FusionReport("dsmc_improved", model, PreciseMass(frame, acc), conflict,
                        tuple(warnings))


def disjunctive_improved(sources, model=None):
    """Union rule weighted by how much the pair differs, renormalized."""
    frame, warnings = _prepare(sources, "disjunctive_improved", exactly=2)
    if model is None:
        model = Model.free(frame)
    _check_model(model, frame)
    acc = {}
    for (x, y), v in _pairs(sources):
        w = degree_of_union(model, x, y)
        if w:
            key = model.reduce(x | y)
            acc[key] = acc.get(key, 0.0) + w * v
    acc, _ = _normalize_acc(acc, "disjunctive_improved")
    return FusionReport("disjunctive_improved", model, PreciseMass(frame, acc), 0.0,
                        tuple(warnings))


def dsmh_improved(model, sources, s3_target=S3_COMPONENTS):
    """Transfer rule with overlap-weighted live mass and difference-weighted
    rerouted mass; the all-forbidden transfer keeps full weight."""
    frame, warnings = _prepare(sources, "dsmh_improved", exactly=2)
    _check_model(model, frame)
    model.check_not_degenerate()
    it_reduced = model.reduce(model.frame.total_ignorance())
    acc = {}
    conflict = 0.0
    for (x, y), v in _pairs(sources):
        kind, key = _route(model, [x, y], s3_target, it_reduced)
        if kind == "alive":
            w = degree_of_intersection(model, x, y)
        elif model.is_model_empty(x) and model.is_model_empty(y):
            conflict += v
            w = 1.0
        else:
            conflict += v
            w = degree_of_union(model, x, y)
        if w:
            acc[key] = acc.get(key, 0.0) + w * v
    acc, _ = _normalize_acc(acc, "dsmh_improved")
    return FusionReport("dsmh_improved", model, PreciseMass(frame, acc), conflict,
                        tuple(warnings))


def _pairs(sources):
    for els, v in _tuple_stream(sources):
        yield (els[0], els[1]), v


# --- T-norm / T-conorm substitutes ---------------------------------------------

TNORMS = {
    "algebraic": lambda x, y: x * y,
    "bounded": lambda x, y: max(0.0, x + y - 1.0),
    "min": min,
}

TCONORMS = {
    "algebraic": lambda x, y: x + y - x * y,
    "bounded": lambda x, y: min(1.0, x + y),
    "max": max,
}


def tnorm_fusion(norm, sources, model=None, s3_target=S3_COMPONENTS):
    """Conjunctive fusion with the product replaced by a T-norm.

    The algebraic T-norm is the product itself, so its output needs no
    normalization and equals dsm_classic; the min and bounded variants are
    normalized after the model transfer.
    """
    if norm not in TNORMS:
        raise ValidationError([f"unknown T-norm {norm!r}"])
    frame, warnings = _prepare(sources, "tnorm", exactly=2)
    if model is None:
        model = Model.free(frame)
    _check_model(model, frame)
    fn = TNORMS[norm]
    m1, m2 = sources
    value = {}
    for (x, vx) in _focal_items(m1):
        for (y, vy) in _focal_items(m2):
            value[(x.bits, y.bits)] = fn(vx, vy)
    acc, conflict, extra = _transfer_engine(
        model, sources, s3_target, value=lambda els: value[(els[0].bits, els[1].bits)]
    )
    if norm != "algebraic":
        acc, _ = _normalize_acc(acc, f"tnorm[{norm}]")
    return FusionReport(f"tnorm[{norm}]", model, PreciseMass(frame, acc), conflict,
                        tuple(warnings + extra))


def tconorm_fusion(conorm, sources, model=None):
    """Disjunctive fusion with the product replaced by a T-conorm; every
    variant is normalized since the summed values overshoot 1."""
    if conorm not in TCONORMS:
        raise ValidationError([f"unknown T-conorm {conorm!r}"])
    frame, warnings = _prepare(sources, "tconorm", exactly=2)
    if model is None:
        model = Model.free(frame)
    _check_model(model, frame)
    model.check_not_degenerate()
    fn = TCONORMS[conorm]
    acc = {}
    for (x, vx) in _focal_items(sources[0]):
        for (y, vy) in _focal_items(sources[1]):
            key = model.reduce(x | y)
            acc[key] = acc.get(key, 0.0) + fn(vx, vy)
    acc, _ = _normalize_acc(acc, f"tconorm[{conorm}]")
    return FusionReport(f"tconorm[{conorm}]", model, PreciseMass(frame, acc), 0.0,
                        tuple(warnings))
