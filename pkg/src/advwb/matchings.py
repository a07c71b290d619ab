"""Disjoint perfect matchings between preimages of the iterated 4-bit base.

Two families of 3^d perfect matchings between the 0- and 1-preimages of
the d-fold iterate of the 4-bit base function.  Taking one family's
union as a relation and running the unit-weight counting bound on it
yields sqrt(9/2)^d, which is what the weighted schemes are measured
against.

Every input of the base function has exactly two sensitive variables,
one at an odd position and one at an even position, and flipping both
at once also changes the value.  The three base matchings flip,
respectively, the odd-position sensitive variable, the even-position
one, and the sensitive pair of one chosen endpoint; the two families
differ only in which endpoint (the 1-input for the first family, the
0-input for the second) donates its pair to the third matching.  That
choice is what keeps the per-coordinate pair count at 1 on the family's
protected side.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .adversary import RelationBound, relation_bound
from .boolfn import BooleanFunction, f4, iterate, var_bit
from .weights import ExactWeight

MAX_MATCHING_DEPTH = 2


class MatchingError(ValueError):
    """A matching failed to be a bijection, or a depth is unsupported."""


@dataclass(frozen=True, eq=False)
class MatchingSet:
    """One family of 3^d perfect matchings for the depth-d iterate.

    Pairs are stored 0-input first: matching t maps a_side[i] to
    partners[t][i].  set_id records which family (1 protects the
    0-preimage side, 2 the 1-preimage side).
    """

    d: int
    set_id: int
    f: BooleanFunction
    a_side: tuple[int, ...]
    b_side: tuple[int, ...]
    partners: tuple[np.ndarray, ...]

    @property
    def matching_count(self) -> int:
        return len(self.partners)

    @property
    def matching_size(self) -> int:
        return len(self.a_side)

    def pairs(self, t: int) -> list[tuple[int, int]]:
        """The ordered (0-input, 1-input) pairs of matching t."""
        arr = self.partners[t]
        return [(x, int(arr[i])) for i, x in enumerate(self.a_side)]

    def partner(self, t: int, x: int) -> int:
        """Partner of 0-input x in matching t."""
        i = self._a_pos().get(x)
        if i is None:
            raise MatchingError(f"{x} is not a 0-input")
        return int(self.partners[t][i])

    def _a_pos(self) -> dict[int, int]:
        pos = getattr(self, "_pos_cache", None)
        if pos is None:
            pos = {x: i for i, x in enumerate(self.a_side)}
            object.__setattr__(self, "_pos_cache", pos)
        return pos


def _sensitive_mask(f: BooleanFunction, x: int) -> tuple[int, int, int]:
    """(odd-position bit, even-position bit, both) for a base input."""
    fx = f.table[x]
    odd = even = 0
    for i in range(1, f.arity + 1):
        bit = var_bit(f.arity, i)
        if f.table[x ^ bit] != fx:
            if i % 2:
                if odd:
                    raise MatchingError(
                        f"input {x} has two odd-position sensitive variables"
                    )
                odd = bit
            else:
                if even:
                    raise MatchingError(
                        f"input {x} has two even-position sensitive variables"
                    )
                even = bit
    if not odd or not even:
        raise MatchingError(f"input {x} lacks an odd/even sensitive variable split")
    return odd, even, odd | even


def _base_maps(set_id: int) -> tuple[BooleanFunction, tuple[dict[int, int], ...]]:
    """The three depth-1 matchings as 0-input -> 1-input maps."""
    f = f4()
    zeros = [x for x in range(16) if f.table[x] == 0]
    ones = [x for x in range(16) if f.table[x] == 1]
    m1 = {x: x ^ _sensitive_mask(f, x)[0] for x in zeros}
    m2 = {x: x ^ _sensitive_mask(f, x)[1] for x in zeros}
    if set_id == 1:
        m3 = {y ^ _sensitive_mask(f, y)[2]: y for y in ones}
    else:
        m3 = {x: x ^ _sensitive_mask(f, x)[2] for x in zeros}
    for m in (m1, m2, m3):
        if sorted(m) != zeros or sorted(m.values()) != ones:
            raise MatchingError("base matching is not a bijection between preimages")
    return f, (m1, m2, m3)


def build_matchings(d: int, set_id: int) -> MatchingSet:
    """Construct family set_id (1 or 2) of 3^d matchings at depth d."""
    if set_id not in (1, 2):
        raise MatchingError(f"set_id must be 1 or 2, not {set_id}")
    if not 1 <= d <= MAX_MATCHING_DEPTH:
        raise MatchingError(
            f"depth {d} not materializable (supported: 1..{MAX_MATCHING_DEPTH})"
        )
    base_f, own = _base_maps(set_id)
    if d == 1:
        a_side = tuple(sorted(own[0]))
        b_side = tuple(sorted(own[0].values()))
        partners = tuple(
            np.array([m[x] for x in a_side], dtype=np.int64) for m in own
        )
        ms = MatchingSet(1, set_id, base_f, a_side, b_side, partners)
        _validate(ms)
        return ms

    # Depth 2: matching index t = g*3 + k pairs pattern-level matching g
    # with block-level matching k.  Differing blocks recurse into the
    # family that protects the block on this family's protected side.
    fwd = {s: _base_maps(s)[1] for s in (1, 2)}
    inv = {
        s: tuple({y: x for x, y in m.items()} for m in ms) for s, ms in fwd.items()
    }
    f2 = iterate(base_f, 2)
    tab2 = f2.table
    a_side = tuple(x for x in range(1 << 16) if tab2[x] == 0)
    b_side = tuple(x for x in range(1 << 16) if tab2[x] == 1)
    base_tab = base_f.table
    a_pos = {x: i for i, x in enumerate(a_side)}
    size = len(a_side)
    partners = []
    sources = a_side if set_id == 1 else b_side
    for g in range(3):
        own_fwd = own[g]
        own_inv = {y: x for x, y in own_fwd.items()}
        for k in range(3):
            arr = np.full(size, -1, dtype=np.int64)
            for src in sources:
                blocks = [(src >> shift) & 15 for shift in (12, 8, 4, 0)]
                pattern = 0
                for b in blocks:
                    pattern = (pattern << 1) | base_tab[b]
                if set_id == 1:
                    other = own_fwd[pattern]
                else:
                    other = own_inv[pattern]
                diff = pattern ^ other
                out = 0
                for j, shift in enumerate((12, 8, 4, 0)):
                    u = blocks[j]
                    if not (diff >> (3 - j)) & 1:
                        out = (out << 4) | u
                    elif set_id == 1:
                        # protect the 0-side: block family chosen by the
                        # 0-input's block value
                        v = fwd[1][k][u] if base_tab[u] == 0 else inv[2][k][u]
                        out = (out << 4) | v
                    else:
                        # protect the 1-side: chosen by the 1-input's block
                        v = inv[2][k][u] if base_tab[u] == 1 else fwd[1][k][u]
                        out = (out << 4) | v
                if set_id == 1:
                    arr[a_pos[src]] = out
                else:
                    arr[a_pos[out]] = src
            partners.append(arr)
    ms = MatchingSet(2, set_id, f2, a_side, b_side, tuple(partners))
    _validate(ms)
    return ms


def _validate(ms: MatchingSet) -> None:
    """Bijection per matching, pairwise disjointness across the family."""
    b_set = set(ms.b_side)
    seen: set[tuple[int, int]] = set()
    for t, arr in enumerate(ms.partners):
        vals = set(int(v) for v in arr)
        if len(vals) != len(arr) or not vals <= b_set:
            raise MatchingError(f"matching {t} is not a bijection onto the 1-preimage")
        for i, x in enumerate(ms.a_side):
            key = (x, int(arr[i]))
            if key in seen:
                raise MatchingError(f"pair {key} appears in two matchings")
            seen.add(key)


@dataclass(frozen=True)
class MatchingCheck:
    """Exhaustively counted relation parameters for one family's union."""

    set_id: int
    m: int
    m_prime: int
    l: int
    l_prime: int
    bound: ExactWeight
    disjoint: bool
    matching_count: int
    matching_size: int

    @classmethod
    def of(cls, ms: MatchingSet) -> MatchingCheck:
        pairs = [p for t in range(ms.matching_count) for p in ms.pairs(t)]
        rb: RelationBound = relation_bound(ms.f, ms.a_side, ms.b_side, pairs)
        return cls(
            set_id=ms.set_id,
            m=rb.m,
            m_prime=rb.m_prime,
            l=rb.l,
            l_prime=rb.l_prime,
            bound=rb.bound,
            disjoint=len(set(pairs)) == len(pairs),
            matching_count=ms.matching_count,
            matching_size=ms.matching_size,
        )


def check_matchings(d: int) -> dict[int, MatchingCheck]:
    """Build both families at depth d and count their relation parameters."""
    return {s: MatchingCheck.of(build_matchings(d, s)) for s in (1, 2)}


def export_matchings(ms: MatchingSet, directory: str | Path) -> list[Path]:
    """Write one text file per matching, one "x_index y_index" line per pair."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    width = len(str(ms.matching_count - 1))
    out = []
    for t in range(ms.matching_count):
        path = directory / f"set{ms.set_id}_d{ms.d}_matching{t:0{width}d}.txt"
        lines = [f"{x} {y}" for x, y in ms.pairs(t)]
        path.write_text("\n".join(lines) + "\n")
        out.append(path)
    return out
