"""Weight schemes over 0/1-preimage relations and their query lower bounds.

A scheme places a positive weight w(x, y) on each pair of a relation
R between A (0-inputs) and B (1-inputs) of a function, plus directional
weights w'(x, y, i) for every coordinate i where the pair differs, subject
to w'(x, y, i) * w'(y, x, i) >= w(x, y)^2.  The reciprocal of the largest
geometric-mean load is then a bound on bounded-error quantum query cost.

Protocol (duck-typed, shared with the composed schemes):
    f            BooleanFunction
    a_side       sorted tuple of 0-input indices appearing in pairs
    b_side       sorted tuple of 1-input indices appearing in pairs
    pair_count   number of pairs in the relation
    iter_pairs() yields (x, y) with x in a_side, y in b_side
    weight(x, y) pair weight (either argument order)
    wprime(x, y, i)      directional weight, first argument's direction
    sweep_pairs(side)    yields (source, records) grouped per source, where
                         each record is (partner, w, diffs) and diffs is a
                         tuple of (i, fwd, bwd) over differing coordinates,
                         fwd being w'(source, partner, i)
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .boolfn import BooleanFunction, var_bit
from .weights import ONE, ZERO, ExactWeight, exact_sum, sqrt_value


class SchemeError(ValueError):
    """A scheme is malformed or a scheme operation cannot proceed."""


VIOLATION_CAP = 100


@dataclass(frozen=True)
class Violation:
    """One failed scheme requirement, located by pair and coordinate."""

    kind: str  # "side", "weight", "directional", "constraint", "coverage"
    x: int
    y: int | None
    i: int | None
    message: str

    def __str__(self) -> str:
        loc = f"pair ({self.x}, {self.y})" if self.y is not None else f"input {self.x}"
        if self.i is not None:
            loc += f", coordinate {self.i}"
        return f"[{self.kind}] {loc}: {self.message}"


# ---- explicit schemes ------------------------------------------------------


class ExplicitScheme:
    """A scheme stored as literal pair and directional-weight tables.

    pairs: iterable of (x, y, w, wp) where wp maps each differing
    coordinate i to a pair (w'(x,y,i), w'(y,x,i)).  Duplicate (x, y)
    entries are rejected.  Weights may be given as ExactWeight, int, or
    Fraction; a missing coordinate entry is treated as a zero directional
    weight (and will fail verification).
    """

    def __init__(self, f: BooleanFunction, pairs):
        self.f = f
        size = 1 << f.arity
        self._w: dict[tuple[int, int], ExactWeight] = {}
        self._wp: dict[tuple[int, int], dict[int, tuple[ExactWeight, ExactWeight]]] = {}
        a_group: dict[int, list[int]] = {}
        b_group: dict[int, list[int]] = {}
        for x, y, w, wp in pairs:
            if not (0 <= x < size and 0 <= y < size):
                raise SchemeError(f"pair ({x}, {y}) out of range for arity {f.arity}")
            if x == y:
                raise SchemeError(f"pair ({x}, {x}) relates an input to itself")
            key = (x, y)
            if key in self._w or (y, x) in self._w:
                raise SchemeError(f"duplicate pair ({x}, {y})")
            diff = x ^ y
            table = {}
            for i, (fwd, bwd) in wp.items():
                if not diff & var_bit(f.arity, i):
                    raise SchemeError(
                        f"pair ({x}, {y}) agrees at coordinate {i}; "
                        "directional weights apply only where the pair differs"
                    )
                table[i] = (ExactWeight.of(fwd), ExactWeight.of(bwd))
            for i in range(1, f.arity + 1):
                if diff & var_bit(f.arity, i) and i not in table:
                    table[i] = (ZERO, ZERO)
            self._w[key] = ExactWeight.of(w)
            self._wp[key] = table
            a_group.setdefault(x, []).append(y)
            b_group.setdefault(y, []).append(x)
        if not self._w:
            raise SchemeError("a scheme needs at least one pair")
        self._a_group = {x: tuple(ys) for x, ys in a_group.items()}
        self._b_group = {y: tuple(xs) for y, xs in b_group.items()}
        self.a_side = tuple(sorted(a_group))
        self.b_side = tuple(sorted(b_group))

    @property
    def pair_count(self) -> int:
        return len(self._w)

    def iter_pairs(self):
        yield from self._w

    def weight(self, x: int, y: int) -> ExactWeight:
        w = self._w.get((x, y))
        if w is None:
            w = self._w.get((y, x))
        if w is None:
            raise SchemeError(f"({x}, {y}) is not in the relation")
        return w

    def wprime(self, x: int, y: int, i: int) -> ExactWeight:
        entry = self._wp.get((x, y))
        if entry is not None:
            pick = 0
        else:
            entry = self._wp.get((y, x))
            pick = 1
        if entry is None:
            raise SchemeError(f"({x}, {y}) is not in the relation")
        if i not in entry:
            raise SchemeError(f"pair ({x}, {y}) does not differ at coordinate {i}")
        return entry[i][pick]

    def b_partners(self, x: int) -> tuple[int, ...]:
        return self._a_group.get(x, ())

    def a_partners(self, y: int) -> tuple[int, ...]:
        return self._b_group.get(y, ())

    def sweep_pairs(self, side: str):
        if side == "a":
            for source in self.a_side:
                records = []
                for partner in self._a_group[source]:
                    w = self._w[(source, partner)]
                    wp = self._wp[(source, partner)]
                    diffs = tuple((i, fb[0], fb[1]) for i, fb in sorted(wp.items()))
                    records.append((partner, w, diffs))
                yield source, records
        elif side == "b":
            for source in self.b_side:
                records = []
                for partner in self._b_group[source]:
                    w = self._w[(partner, source)]
                    wp = self._wp[(partner, source)]
                    diffs = tuple((i, fb[1], fb[0]) for i, fb in sorted(wp.items()))
                    records.append((partner, w, diffs))
                yield source, records
        else:
            raise ValueError(f"side must be 'a' or 'b', not {side!r}")


class ScaledScheme:
    """A scheme with every A-to-B directional weight multiplied by a factor
    and every B-to-A directional weight divided by it.

    Pair weights and the products w'(x,y,i)*w'(y,x,i) are untouched, so
    validity is preserved while the two side loads trade against each other.
    """

    def __init__(self, base, factor: ExactWeight):
        if factor.is_zero:
            raise SchemeError("scale factor must be positive")
        self.base = base
        self.factor = factor
        self._a_set = frozenset(base.a_side)

    @property
    def f(self) -> BooleanFunction:
        return self.base.f

    @property
    def a_side(self):
        return self.base.a_side

    @property
    def b_side(self):
        return self.base.b_side

    @property
    def pair_count(self) -> int:
        return self.base.pair_count

    def iter_pairs(self):
        return self.base.iter_pairs()

    def weight(self, x: int, y: int) -> ExactWeight:
        return self.base.weight(x, y)

    def wprime(self, x: int, y: int, i: int) -> ExactWeight:
        w = self.base.wprime(x, y, i)
        return w * self.factor if x in self._a_set else w / self.factor

    def b_partners(self, x: int):
        return self.base.b_partners(x)

    def a_partners(self, y: int):
        return self.base.a_partners(y)

    def sweep_pairs(self, side: str):
        s = self.factor
        inv = ONE / s
        if side == "a":
            for source, records in self.base.sweep_pairs("a"):
                yield source, [
                    (p, w, tuple((i, f * s, b * inv) for i, f, b in d))
                    for p, w, d in records
                ]
        else:
            for source, records in self.base.sweep_pairs(side):
                yield source, [
                    (p, w, tuple((i, f * inv, b * s) for i, f, b in d))
                    for p, w, d in records
                ]


# ---- verification ----------------------------------------------------------


def verify(scheme, limit: int = VIOLATION_CAP) -> list[Violation]:
    """Check the defining requirements; an empty list means valid.

    Checks side membership (A inside the 0-preimage, B inside the
    1-preimage, no overlap), weight positivity, and the product constraint
    w'(x,y,i) * w'(y,x,i) >= w(x,y)^2 at every differing coordinate.  All
    comparisons are exact.  Reporting stops after `limit` violations.
    """
    out: list[Violation] = []
    f = scheme.f
    tab = f.table
    for x in scheme.a_side:
        if tab[x] != 0:
            out.append(Violation("side", x, None, None, "A-side input is not a 0-input"))
            if len(out) >= limit:
                return out
    for y in scheme.b_side:
        if tab[y] != 1:
            out.append(Violation("side", y, None, None, "B-side input is not a 1-input"))
            if len(out) >= limit:
                return out

    arity = f.arity
    checked: dict[tuple[ExactWeight, ExactWeight, ExactWeight], bool] = {}
    for source, records in scheme.sweep_pairs("a"):
        for partner, w, diffs in records:
            if w.is_zero:
                out.append(Violation("weight", source, partner, None, "pair weight is zero"))
                if len(out) >= limit:
                    return out
                continue
            mask = 0
            for i, fwd, bwd in diffs:
                mask |= var_bit(arity, i)
                key = (fwd, bwd, w)
                ok = checked.get(key)
                if ok is None:
                    if fwd.is_zero or bwd.is_zero:
                        ok = False
                    else:
                        ok = fwd * bwd >= w * w
                    checked[key] = ok
                if not ok:
                    kind = "directional" if fwd.is_zero or bwd.is_zero else "constraint"
                    out.append(
                        Violation(
                            kind,
                            source,
                            partner,
                            i,
                            f"w'*w' = {fwd * bwd} < w^2 = {w * w}",
                        )
                    )
                    if len(out) >= limit:
                        return out
            if mask != source ^ partner:
                out.append(
                    Violation(
                        "coverage",
                        source,
                        partner,
                        None,
                        "directional weights do not cover exactly the differing coordinates",
                    )
                )
                if len(out) >= limit:
                    return out
    return out


# ---- loads and the bound ---------------------------------------------------


@dataclass
class LoadReport:
    """Aggregate weights and loads of a scheme.

    v_a and v_b are the per-side maxima of v(x, i) / wt(x); v_max is their
    geometric mean and bound its reciprocal.  Values are ExactWeight when
    the sums stay within one radicand, float otherwise.  wt and v maps are
    kept only when requested (they can be large for composed schemes).
    """

    v_a: object
    v_b: object
    v_max: object
    bound: object
    wt_min: object
    wt_max: object
    v_lo: object
    v_hi: object
    wt: dict | None = None
    v: dict | None = None


def _less(a, b) -> bool:
    if isinstance(a, ExactWeight) and isinstance(b, ExactWeight):
        return a < b
    return float(a) < float(b)


def _ratio(num, den):
    if isinstance(num, ExactWeight) and isinstance(den, ExactWeight):
        return num / den
    return float(num) / float(den)


def _geometric_mean(a, b):
    if isinstance(a, ExactWeight) and isinstance(b, ExactWeight):
        prod = a * b
        if prod.u == 1:
            return ExactWeight.sqrt_of(prod.rational)
        return math.sqrt(float(prod))
    return math.sqrt(float(a) * float(b))


def _reciprocal(v):
    if isinstance(v, ExactWeight):
        return ONE / v
    return 1.0 / v


def loads(scheme, *, keep_maps: bool = True) -> LoadReport:
    """Weights wt(x), loads v(x, i), side maxima, and the bound.

    wt(x) sums the pair weights at x; v(x, i) sums the directional weights
    from x over partners differing at i.  Sweeps one side at a time with
    per-source accumulation, so memory stays flat when maps are not kept.
    """
    if not scheme.a_side or not scheme.b_side:
        raise SchemeError("loads need a nonempty relation on both sides")
    wt_map: dict | None = {} if keep_maps else None
    v_map: dict | None = {} if keep_maps else None
    side_best = {}
    wt_min = wt_max = None
    v_lo = v_hi = None
    for side in ("a", "b"):
        best = None
        for source, records in scheme.sweep_pairs(side):
            if not records:
                continue
            wt = exact_sum([w for _, w, _ in records])
            per_i: dict[int, list] = {}
            for _, _, diffs in records:
                for i, fwd, _ in diffs:
                    per_i.setdefault(i, []).append(fwd)
            local_max = None
            for i, vals in per_i.items():
                v = exact_sum(vals)
                if v_map is not None:
                    v_map[(source, i)] = v
                if local_max is None or _less(local_max, v):
                    local_max = v
                if v_lo is None or _less(v, v_lo):
                    v_lo = v
                if v_hi is None or _less(v_hi, v):
                    v_hi = v
            ratio = _ratio(local_max, wt)
            if best is None or _less(best, ratio):
                best = ratio
            if wt_map is not None:
                wt_map[source] = wt
            if wt_min is None or _less(wt, wt_min):
                wt_min = wt
            if wt_max is None or _less(wt_max, wt):
                wt_max = wt
        if best is None:
            raise SchemeError(f"side {side!r} has no pairs")
        side_best[side] = best
    v_a, v_b = side_best["a"], side_best["b"]
    if (isinstance(v_a, ExactWeight) and v_a.is_zero) or (
        isinstance(v_b, ExactWeight) and v_b.is_zero
    ):
        raise SchemeError("degenerate scheme: a side load is zero")
    v_max = _geometric_mean(v_a, v_b)
    return LoadReport(
        v_a=v_a,
        v_b=v_b,
        v_max=v_max,
        bound=_reciprocal(v_max),
        wt_min=wt_min,
        wt_max=wt_max,
        v_lo=v_lo,
        v_hi=v_hi,
        wt=wt_map,
        v=v_map,
    )


def balance(scheme, report: LoadReport | None = None):
    """Rescale directional weights so that both side loads equal v_max.

    Multiplies every w'(x, y, i) with x on the A side by sqrt(v_b/v_a) and
    divides the opposite direction by the same factor.  Returns the scheme
    unchanged when it is already balanced.
    """
    rep = report if report is not None else loads(scheme, keep_maps=False)
    v_a, v_b = rep.v_a, rep.v_b
    if not (isinstance(v_a, ExactWeight) and isinstance(v_b, ExactWeight)):
        raise SchemeError("cannot balance exactly: side loads are not exact")
    if v_a.is_zero or v_b.is_zero:
        raise SchemeError("degenerate scheme: a side load is zero")
    if v_a == v_b:
        return scheme
    ratio = v_b / v_a
    if ratio.u != 1:
        raise SchemeError(f"load ratio {ratio} has no exact square root")
    return ScaledScheme(scheme, ExactWeight.sqrt_of(ratio.rational))


# ---- unweighted relation bound ---------------------------------------------


@dataclass(frozen=True)
class RelationBound:
    """Partner-count parameters of a bare relation and the bound they give."""

    m: int
    m_prime: int
    l: int
    l_prime: int
    bound: ExactWeight


def _check_sides(f: BooleanFunction, a, b):
    bad_a = [x for x in a if f.table[x] != 0]
    bad_b = [y for y in b if f.table[y] != 1]
    if bad_a or bad_b:
        raise SchemeError(
            f"side membership violated: {bad_a} not 0-inputs, {bad_b} not 1-inputs"
        )


def relation_bound(f: BooleanFunction, a, b, relation) -> RelationBound:
    """Min partner counts, max per-coordinate counts, and sqrt(mm'/(ll')).

    m and m' are the minimum partner counts over A and B; l is the largest
    number of partners of one A-side input all differing from it at one
    coordinate, l' the B-side analogue.
    """
    a = tuple(a)
    b = tuple(b)
    _check_sides(f, a, b)
    a_set, b_set = set(a), set(b)
    if not relation:
        raise SchemeError("empty relation")
    n = f.arity
    deg_a: dict[int, int] = {x: 0 for x in a}
    deg_b: dict[int, int] = {y: 0 for y in b}
    cnt_a: dict[tuple[int, int], int] = {}
    cnt_b: dict[tuple[int, int], int] = {}
    for x, y in relation:
        if x not in a_set or y not in b_set:
            raise SchemeError(f"pair ({x}, {y}) leaves the declared sides")
        deg_a[x] += 1
        deg_b[y] += 1
        diff = x ^ y
        for i in range(1, n + 1):
            if diff & var_bit(n, i):
                cnt_a[(x, i)] = cnt_a.get((x, i), 0) + 1
                cnt_b[(y, i)] = cnt_b.get((y, i), 0) + 1
    m = min(deg_a.values())
    m_prime = min(deg_b.values())
    l = max(cnt_a.values())
    l_prime = max(cnt_b.values())
    from fractions import Fraction

    bound = ExactWeight.sqrt_of(Fraction(m * m_prime, l * l_prime))
    return RelationBound(m, m_prime, l, l_prime, bound)


def unit_scheme(f: BooleanFunction, a, b, relation) -> ExplicitScheme:
    """The scheme with w = w' = 1 everywhere on the given relation."""
    _check_sides(f, tuple(a), tuple(b))
    n = f.arity
    pairs = []
    for x, y in relation:
        wp = {}
        diff = x ^ y
        for i in range(1, n + 1):
            if diff & var_bit(n, i):
                wp[i] = (ONE, ONE)
        pairs.append((x, y, ONE, wp))
    return ExplicitScheme(f, pairs)


# ---- built-in schemes -------------------------------------------------------


def sensitive_partition(f: BooleanFunction, index: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Variables whose single flip changes f at the input, and the rest."""
    n = f.arity
    sens, insens = [], []
    for i in range(1, n + 1):
        if f.table[index ^ var_bit(n, i)] != f.table[index]:
            sens.append(i)
        else:
            insens.append(i)
    return tuple(sens), tuple(insens)


def _scheme_f4() -> ExplicitScheme:
    """Scheme on the 4-bit base with bound 5/2.

    Every input has exactly two sensitive variables, and flipping either
    the sensitive pair or the insensitive pair as a block changes the
    value.  Pairs at distance 1 get w = w' = 1.  Pairs at distance 2 get
    w = 2/3 with w'(u, v, i) = 1/3 where i is sensitive for u and 4/3
    where it is insensitive (the two directions always meet 1/3 * 4/3 =
    (2/3)^2 exactly, because a sensitive coordinate of one endpoint is
    insensitive for the other).
    """
    from .boolfn import block_mask, f4

    f = f4()
    third = ExactWeight(1, 3)
    four_third = ExactWeight(4, 3)
    two_third = ExactWeight(2, 3)
    pairs = []
    for x in range(16):
        if f.table[x] != 0:
            continue
        sens, insens = sensitive_partition(f, x)
        for i in sens:
            pairs.append((x, x ^ var_bit(4, i), ONE, {i: (ONE, ONE)}))
        for group in (sens, insens):
            mask = block_mask(4, group)
            y = x ^ mask
            wp = {}
            for i in group:
                fwd = third if i in sens else four_third
                bwd = four_third if i in sens else third
                wp[i] = (fwd, bwd)
            pairs.append((x, y, two_third, wp))
    return ExplicitScheme(f, pairs)


def _scheme_nae3() -> ExplicitScheme:
    """Scheme on 3-bit not-all-equal with bound 3/sqrt(2).

    A = {000, 111}, B = the remaining six inputs, R = A x B.  Pairs at
    distance 1 get w = 2 with w' = 2*sqrt(2) from the A side and sqrt(2)
    from the B side; pairs at distance 2 get w = 1 with sqrt(2)/2 and
    sqrt(2).
    """
    from .boolfn import nae3

    f = nae3()
    r2 = ExactWeight.sqrt_of(2)
    two_r2 = ExactWeight(2) * r2
    half_r2 = ExactWeight(1, 2) * r2
    pairs = []
    for x in (0, 7):
        for y in range(8):
            if f.table[y] != 1:
                continue
            diff = x ^ y
            dist = diff.bit_count()
            w = ExactWeight(2) if dist == 1 else ONE
            fwd = two_r2 if dist == 1 else half_r2
            wp = {}
            for i in range(1, 4):
                if diff & var_bit(3, i):
                    wp[i] = (fwd, r2)
            pairs.append((x, y, w, wp))
    return ExplicitScheme(f, pairs)


def _scheme_h6() -> ExplicitScheme:
    """Scheme on the 6-bit function with bound sqrt(39)/2.

    A = the all-zero input plus the ten weight-3 0-inputs; B = the six
    weight-1 inputs.  The all-zero input pairs with each weight-1 input at
    w = w' = 1.  Each weight-3 0-input pairs with the three weight-1
    inputs inside its support at w = 1/8, with w' = 1/32 from the triple
    side and 1/2 from the weight-1 side.

    The side loads come out at v_A = 1/6 and v_B = 8/13; their geometric
    mean is 2/sqrt(39), so the bound is sqrt(39)/2.  (A doubled load of
    4/sqrt(39) sometimes quoted for this construction is not what the
    explicit sums here give.)
    """
    from .boolfn import H6_ZERO_TRIPLES, block_mask, h6

    f = h6()
    eighth = ExactWeight(1, 8)
    fwd = ExactWeight(1, 32)
    bwd = ExactWeight(1, 2)
    pairs = []
    zero = 0
    for i in range(1, 7):
        e = var_bit(6, i)
        pairs.append((zero, e, ONE, {i: (ONE, ONE)}))
    for triple in H6_ZERO_TRIPLES:
        x = block_mask(6, triple)
        for i in triple:
            y = var_bit(6, i)
            wp = {}
            for j in triple:
                if j != i:
                    wp[j] = (fwd, bwd)
            pairs.append((x, y, eighth, wp))
    return ExplicitScheme(f, pairs)


_SCHEME_BUILDERS = {"f4": _scheme_f4, "nae3": _scheme_nae3, "h6": _scheme_h6}

SCHEME_NAMES = tuple(_SCHEME_BUILDERS)


def builtin_scheme(name: str) -> ExplicitScheme:
    """Construct a named built-in scheme: f4, nae3, or h6."""
    try:
        builder = _SCHEME_BUILDERS[name]
    except KeyError:
        raise KeyError(f"unknown scheme {name!r}; choose from {SCHEME_NAMES}") from None
    return builder()


# ---- scheme files -----------------------------------------------------------


def save_scheme(scheme, path) -> None:
    """Write a scheme to JSON with exact weight strings."""
    doc = {
        "arity": scheme.f.arity,
        "table": "".join(str(b) for b in scheme.f.table),
        "a": list(scheme.a_side),
        "b": list(scheme.b_side),
        "pairs": [],
    }
    for source, records in scheme.sweep_pairs("a"):
        for partner, w, diffs in records:
            doc["pairs"].append(
                {
                    "x": source,
                    "y": partner,
                    "w": str(w),
                    "wp": {str(i): [str(fwd), str(bwd)] for i, fwd, bwd in diffs},
                }
            )
    Path(path).write_text(json.dumps(doc, indent=1))


def load_scheme(path) -> ExplicitScheme:
    """Read a scheme from JSON; weights are parsed exactly, never as floats."""
    path = Path(path)
    doc = json.loads(path.read_text())
    if "path" in doc:
        from .boolfn import load_table

        f = load_table((path.parent / doc["path"]).resolve())
    else:
        f = BooleanFunction.from_bits(doc["table"])
        if f.arity != doc["arity"]:
            raise SchemeError(
                f"declared arity {doc['arity']} but table has arity {f.arity}"
            )
    declared_a, declared_b = set(doc["a"]), set(doc["b"])
    pairs = []
    for rec in doc["pairs"]:
        x, y = rec["x"], rec["y"]
        if x not in declared_a or y not in declared_b:
            raise SchemeError(f"pair ({x}, {y}) outside the declared sides")
        w = ExactWeight.parse(rec["w"])
        wp = {
            int(i): (ExactWeight.parse(fb[0]), ExactWeight.parse(fb[1]))
            for i, fb in rec["wp"].items()
        }
        pairs.append((x, y, w, wp))
    return ExplicitScheme(f, pairs)
