"""Mass functions, precise and imprecise, plus subunitary set arithmetic.

A precise mass maps lattice elements to reals summing to 1. An imprecise
mass maps elements to subunitary sets: finite unions of points and
intervals inside [0, 1]. The three set operators used by the imprecise
rules are pointwise images: + (Minkowski sum), - (every difference of a
left point and a right point), * (every product). A result endpoint is
closed exactly when some pair of operand endpoints attaining it is
closed-closed, with one refinement: a zero product is attained as soon as
either operand attains zero.

Endpoints are plain floats. Point-valued sets therefore run the same float
operations as the precise rules, which keeps the imprecise rules an exact
superset of the precise ones.
"""

import re
from dataclasses import dataclass

from .errors import (
    EmptyOperand,
    FrameMismatch,
    ParseError,
    SelectionOutsideSet,
    ValidationError,
    ZeroTotalMass,
)

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class Piece:
    """One maximal run of a subunitary set: an interval or a point."""

    lower: float
    upper: float
    lower_closed: bool = True
    upper_closed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "lower", float(self.lower))
        object.__setattr__(self, "upper", float(self.upper))
        if self.lower > self.upper:
            raise ValueError(f"piece bounds out of order: {self.lower} > {self.upper}")
        if self.lower == self.upper:
            # A degenerate interval that is attained is a point; the
            # arithmetic below never produces an unattained one.
            object.__setattr__(self, "lower_closed", True)
            object.__setattr__(self, "upper_closed", True)

    @property
    def is_point(self):
        return self.lower == self.upper

    def contains(self, x, tol=DEFAULT_TOL):
        lo_ok = x >= self.lower - tol if self.lower_closed else x > self.lower
        up_ok = x <= self.upper + tol if self.upper_closed else x < self.upper
        return lo_ok and up_ok


def _merge(pieces):
    """Coalesce overlapping or touching pieces into maximal runs."""
    pieces = sorted(pieces, key=lambda p: (p.lower, not p.lower_closed, p.upper))
    out = []
    for p in pieces:
        if out:
            cur = out[-1]
            touches = p.lower < cur.upper or (
                p.lower == cur.upper and (p.lower_closed or cur.upper_closed)
            )
            if touches:
                if p.upper > cur.upper:
                    up, upc = p.upper, p.upper_closed
                elif p.upper == cur.upper:
                    up, upc = cur.upper, cur.upper_closed or p.upper_closed
                else:
                    up, upc = cur.upper, cur.upper_closed
                out[-1] = Piece(cur.lower, up, cur.lower_closed, upc)
                continue
        out.append(p)
    return out


class SubunitarySet:
    """Finite union of disjoint points and intervals, kept sorted/merged."""

    __slots__ = ("pieces",)

    def __init__(self, pieces):
        pieces = _merge(pieces)
        if not pieces:
            raise EmptyOperand("subunitary set needs at least one piece")
        object.__setattr__(self, "pieces", tuple(pieces))

    def __setattr__(self, name, value):
        raise AttributeError("SubunitarySet is immutable")

    @classmethod
    def point(cls, x):
        return cls([Piece(x, x)])

    @classmethod
    def interval(cls, lower, upper, lower_closed=True, upper_closed=True):
        return cls([Piece(lower, upper, lower_closed, upper_closed)])

    @property
    def inf(self):
        return self.pieces[0].lower

    @property
    def sup(self):
        return self.pieces[-1].upper

    @property
    def is_point(self):
        return len(self.pieces) == 1 and self.pieces[0].is_point

    def as_point(self):
        if not self.is_point:
            raise ValueError(f"{self} is not a single point")
        return self.pieces[0].lower

    def contains(self, x, tol=DEFAULT_TOL):
        return any(p.contains(x, tol) for p in self.pieces)

    def within_unit(self, tol=DEFAULT_TOL):
        return self.inf >= -tol and self.sup <= 1 + tol

    def _binary(self, other, op):
        return SubunitarySet([op(a, b) for a in self.pieces for b in other.pieces])

    def __add__(self, other):
        return self._binary(other, _piece_add)

    def __sub__(self, other):
        return self._binary(other, _piece_sub)

    def __mul__(self, other):
        if self.inf < 0 or other.inf < 0:
            raise ValueError("product defined for nonnegative sets only")
        return self._binary(other, _piece_mul)

    def clamp01(self):
        """Pointwise image under min(1, max(0, .))."""
        out = []
        for p in self.pieces:
            lo, loc = p.lower, p.lower_closed
            up, upc = p.upper, p.upper_closed
            if lo < 0:
                lo, loc = 0.0, True
            if up > 1:
                up, upc = 1.0, True
            if up < 0:
                lo = up = 0.0
            if lo > 1:
                lo = up = 1.0
            out.append(Piece(min(lo, up), up, loc, upc))
        return SubunitarySet(out)

    def intersection(self, other):
        """Set intersection, or None when disjoint."""
        out = []
        for a in self.pieces:
            for b in other.pieces:
                lo = max(a.lower, b.lower)
                if a.lower > b.lower:
                    loc = a.lower_closed
                elif b.lower > a.lower:
                    loc = b.lower_closed
                else:
                    loc = a.lower_closed and b.lower_closed
                up = min(a.upper, b.upper)
                if a.upper < b.upper:
                    upc = a.upper_closed
                elif b.upper < a.upper:
                    upc = b.upper_closed
                else:
                    upc = a.upper_closed and b.upper_closed
                if lo < up or (lo == up and loc and upc):
                    out.append(Piece(lo, up, loc, upc))
        return SubunitarySet(out) if out else None

    def approx_equal(self, other, tol=1e-6):
        if len(self.pieces) != len(other.pieces):
            return False
        for a, b in zip(self.pieces, other.pieces):
            if a.lower_closed != b.lower_closed or a.upper_closed != b.upper_closed:
                return False
            if abs(a.lower - b.lower) > tol or abs(a.upper - b.upper) > tol:
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, SubunitarySet):
            return NotImplemented
        return self.pieces == other.pieces

    def __hash__(self):
        return hash(self.pieces)

    def __repr__(self):
        return format_set(self)


def _piece_add(a, b):
    return Piece(
        a.lower + b.lower,
        a.upper + b.upper,
        a.lower_closed and b.lower_closed,
        a.upper_closed and b.upper_closed,
    )


def _piece_sub(a, b):
    return Piece(
        a.lower - b.upper,
        a.upper - b.lower,
        a.lower_closed and b.upper_closed,
        a.upper_closed and b.lower_closed,
    )


def _piece_mul(a, b):
    lo = a.lower * b.lower
    up = a.upper * b.upper
    loc = a.lower_closed and b.lower_closed
    if lo == 0.0 and not loc:
        # Zero is attained as soon as either factor attains it.
        loc = (a.lower == 0.0 and a.lower_closed) or (b.lower == 0.0 and b.lower_closed)
    return Piece(lo, up, loc, a.upper_closed and b.upper_closed)


def sum_sets(sets):
    sets = list(sets)
    if not sets:
        raise EmptyOperand("nothing to sum")
    acc = sets[0]
    for s in sets[1:]:
        acc = acc + s
    return acc


# --- text form ---------------------------------------------------------------

_NUM = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"
_INTERVAL_RE = re.compile(rf"([\[\(])\s*({_NUM})\s*,\s*({_NUM})\s*([\]\)])")
_BRACES_RE = re.compile(rf"\{{\s*({_NUM})(?:\s*,\s*({_NUM}))*\s*\}}")
_POINT_RE = re.compile(rf"({_NUM})")


def parse_set(text):
    """Parse the union-of-pieces syntax, e.g. "[0.1,0.2]u{0.3}" or "0.5".

    Pieces are intervals with [ ] (closed) or ( ) (open) ends, brace lists
    of points, or bare numbers; they are joined with "u" (or the union
    sign). Case of the joiner does not matter.
    """
    parts = re.split(r"\s*(?:[uU]|∪)\s*", text.strip())
    pieces = []
    for part in parts:
        part = part.strip()
        if not part:
            raise ParseError(f"empty piece in set {text!r}")
        m = _INTERVAL_RE.fullmatch(part)
        if m:
            try:
                piece = Piece(
                    float(m.group(2)), float(m.group(3)), m.group(1) == "[", m.group(4) == "]"
                )
            except ValueError as exc:
                raise ParseError(f"bad set {text!r}: {exc}") from None
            pieces.append(piece)
            continue
        if part.startswith("{") and part.endswith("}"):
            inner = part[1:-1]
            for num in inner.split(","):
                num = num.strip()
                if not _POINT_RE.fullmatch(num):
                    raise ParseError(f"bad point {num!r} in set {text!r}")
                x = float(num)
                pieces.append(Piece(x, x))
            continue
        if _POINT_RE.fullmatch(part):
            x = float(part)
            pieces.append(Piece(x, x))
            continue
        raise ParseError(f"cannot parse set piece {part!r}")
    try:
        return SubunitarySet(pieces)
    except ValueError as exc:
        raise ParseError(f"bad set {text!r}: {exc}") from None


def _fmt_num(x, precision):
    if precision is None:
        return repr(x)  # shortest text that parses back to the same float
    return f"{x:.{precision}f}"


def format_set(s, precision=None, style="ascii"):
    """Render a set in the same syntax parse_set accepts.

    Runs of adjacent points share one brace group, matching the usual
    written form {a,b}.
    """
    joiner = "u" if style == "ascii" else "∪"
    chunks = []
    run = []
    for p in list(s.pieces) + [None]:
        if p is not None and p.is_point:
            run.append(p)
            continue
        if run:
            chunks.append("{" + ",".join(_fmt_num(q.lower, precision) for q in run) + "}")
            run = []
        if p is not None:
            lo = "[" if p.lower_closed else "("
            up = "]" if p.upper_closed else ")"
            chunks.append(f"{lo}{_fmt_num(p.lower, precision)},{_fmt_num(p.upper, precision)}{up}")
    return joiner.join(chunks)


# --- mass functions ----------------------------------------------------------

def _sort_key(element):
    return (element.bits.bit_count(), element.bits)


class _MassBase:
    __slots__ = ("frame", "_masses", "allows_empty_focal")

    def __init__(self, frame, masses, allows_empty_focal=False):
        object.__setattr__(self, "frame", frame)
        object.__setattr__(self, "allows_empty_focal", allows_empty_focal)
        store = {}
        for el, value in masses.items():
            if el.frame != frame:
                raise FrameMismatch("focal element belongs to a different frame")
            store[el] = value
        object.__setattr__(
            self, "_masses", dict(sorted(store.items(), key=lambda kv: _sort_key(kv[0])))
        )

    def __setattr__(self, name, value):
        raise AttributeError("mass functions are immutable")

    def items(self):
        return list(self._masses.items())

    def elements(self):
        return list(self._masses.keys())

    def __len__(self):
        return len(self._masses)

    def __contains__(self, element):
        return element in self._masses

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return (self.frame == other.frame
                and self._masses == other._masses
                and self.allows_empty_focal == other.allows_empty_focal)

    def __hash__(self):
        return hash((type(self).__name__, self.frame, tuple(self._masses.items())))


class PreciseMass(_MassBase):
    """Mass function with one real per focal element."""

    def mass(self, element):
        return self._masses.get(element, 0.0)

    @classmethod
    def vacuous(cls, frame):
        return cls(frame, {frame.total_ignorance(): 1.0})

    def total(self):
        return sum(self._masses.values())

    def validate(self, tol=DEFAULT_TOL):
        """List of problems; empty when the mass is a well-formed gbba."""
        problems = []
        for el, v in self._masses.items():
            if v < -tol:
                problems.append(f"negative mass {v} on {el.expr()}")
            if el.bits == 0 and v > tol and not self.allows_empty_focal:
                problems.append(f"mass {v} on the empty element")
        t = self.total()
        if abs(t - 1.0) > tol:
            problems.append(f"total mass {t} differs from 1")
        return problems

    def check(self, tol=DEFAULT_TOL):
        problems = self.validate(tol)
        if problems:
            raise ValidationError(problems)
        return self

    def normalize(self):
        t = self.total()
        if abs(t) < 1e-15:
            raise ZeroTotalMass("mass sums to zero")
        return PreciseMass(
            self.frame,
            {el: v / t for el, v in self._masses.items()},
            self.allows_empty_focal,
        )

    def __repr__(self):
        inner = ", ".join(f"{el.expr()}: {v:g}" for el, v in self._masses.items())
        return "PreciseMass({" + inner + "})"


class ImpreciseMass(_MassBase):
    """Mass function with one subunitary set per focal element."""

    def mass(self, element):
        got = self._masses.get(element)
        return got if got is not None else SubunitarySet.point(0.0)

    def validate(self, tol=DEFAULT_TOL):
        problems = []
        for el, s in self._masses.items():
            if not isinstance(s, SubunitarySet):
                problems.append(f"value on {el.expr()} is not a set")
                continue
            if not s.within_unit(tol):
                problems.append(f"set on {el.expr()} leaves [0,1]: {format_set(s)}")
            if el.bits == 0 and not self.allows_empty_focal and not s.contains(0.0, tol):
                problems.append(f"empty element carries nonzero set {format_set(s)}")
        return problems

    def check(self, tol=DEFAULT_TOL):
        problems = self.validate(tol)
        if problems:
            raise ValidationError(problems)
        return self

    def __repr__(self):
        inner = ", ".join(f"{el.expr()}: {format_set(s)}" for el, s in self._masses.items())
        return "ImpreciseMass({" + inner + "})"


def lift(m):
    """Precise mass viewed as an imprecise one with point sets."""
    return ImpreciseMass(
        m.frame,
        {el: SubunitarySet.point(v) for el, v in m.items()},
        m.allows_empty_focal,
    )


def to_precise(mi, selection, tol=DEFAULT_TOL):
    """Pick one point per focal set; raises when a pick misses its set."""
    out = {}
    for el, s in mi.items():
        if el not in selection:
            raise SelectionOutsideSet(f"no selection for {el.expr()}")
        x = selection[el]
        if not s.contains(x, tol):
            raise SelectionOutsideSet(f"{x} not in {format_set(s)} for {el.expr()}")
        out[el] = x
    return PreciseMass(mi.frame, out, mi.allows_empty_focal)


def is_admissible(mi, tol=DEFAULT_TOL):
    """True when one point per focal set can sum to exactly 1."""
    sets = [s for _, s in mi.items()]
    if not sets:
        return False
    return sum_sets(sets).contains(1.0, tol)


def admissibility_witness(mi, tol=DEFAULT_TOL):
    """A selection proving admissibility, or None.

    Works backwards over the focal elements: at each step the remaining
    target is intersected with what the earlier prefix can still reach, so
    any point picked there extends to a full witness.
    """
    entries = mi.items()
    if not entries:
        return None
    prefix = [SubunitarySet.point(0.0)]
    for _, s in entries:
        prefix.append(prefix[-1] + s)
    if not prefix[-1].contains(1.0, tol):
        return None
    for snap in (True, False):
        witness = _witness_pass(entries, prefix, tol, snap)
        if witness is not None and abs(sum(witness.values()) - 1.0) <= tol * 4 * len(entries):
            return witness
    return None


def _witness_pass(entries, prefix, tol, snap):
    witness = {}
    target = 1.0
    # Snapping picks to clean endpoints drifts the target a little, so the
    # window widens with the number of focal elements.
    slack = tol * (len(entries) + 1)
    for j in range(len(entries) - 1, -1, -1):
        el, s = entries[j]
        window = SubunitarySet.interval(target - slack, target + slack)
        candidates = s.intersection(window - prefix[j])
        if candidates is None:
            return None
        witness[el] = _pick_point(candidates, s if snap else None, slack)
        target -= witness[el]
    return witness


def _pick_point(candidates, original, slack):
    p = candidates.pieces[0]
    if p.is_point or p.lower_closed:
        x = p.lower
    elif p.upper_closed:
        x = p.upper
    else:
        x = (p.lower + p.upper) / 2.0
    if original is None:
        return x
    # Prefer an attained endpoint of the original set when one sits within
    # the window; picks like 0.499999999 become 0.5.
    for q in original.pieces:
        for bound, closed in ((q.lower, q.lower_closed), (q.upper, q.upper_closed)):
            if closed and abs(x - bound) <= 2 * slack and candidates.contains(bound, 2 * slack):
                return bound
    return x
