"""Composed schemes for iterated functions."""

import random

import pytest

from advwb.adversary import (
    SchemeError,
    balance,
    builtin_scheme,
    load_scheme,
    loads,
    save_scheme,
    verify,
)
from advwb.boolfn import ArityError, f4, iterate, nae3, var_bit
from advwb.compose import (
    ComposedScheme,
    block_index,
    check_claim1,
    check_claim2,
    check_corollary,
    compose_scheme,
    predicted_bound,
)
from advwb.weights import ExactWeight, exact_sum


def test_block_index():
    assert block_index(1, 4, 2) == (1, 1)
    assert block_index(4, 4, 2) == (1, 4)
    assert block_index(5, 4, 2) == (2, 1)
    assert block_index(16, 4, 2) == (4, 4)
    assert block_index(7, 3, 2) == (3, 1)
    with pytest.raises(ValueError):
        block_index(0, 4, 2)
    with pytest.raises(ValueError):
        block_index(17, 4, 2)
    with pytest.raises(ValueError):
        block_index(1, 4, 0)


def test_compose_rejects_mismatched_schemes():
    with pytest.raises(SchemeError):
        compose_scheme(builtin_scheme("f4"), builtin_scheme("nae3"))
    with pytest.raises(SchemeError):
        compose_scheme(builtin_scheme("nae3"), builtin_scheme("f4"))


def test_compose_rejects_unbalanced_input():
    from advwb.adversary import ExplicitScheme
    from advwb.weights import ONE

    lopsided = ExplicitScheme(nae3(), [(0, 1, ONE, {3: (ExactWeight(2), ONE)})])
    assert verify(lopsided) == []
    with pytest.raises(SchemeError, match="balance"):
        compose_scheme(lopsided, lopsided)


def test_compose_arity_cap():
    bal = balance(builtin_scheme("h6"))
    with pytest.raises(ArityError):
        compose_scheme(bal, bal)  # 36 variables


def test_nae3_squared_full():
    g = builtin_scheme("nae3")
    c = compose_scheme(g, g)
    assert c.depth == 2
    assert c.arity == 9
    assert c.f == iterate(nae3(), 2)
    assert len(c.a_side) == 224 and len(c.b_side) == 288
    assert c.pair_count == 4896
    assert verify(c) == []
    rep = loads(c, keep_maps=False)
    assert rep.bound == ExactWeight(9, 2)
    assert rep.bound == predicted_bound(g, 2)
    assert c.predicted_bound == ExactWeight(9, 2)


def _nae3_pattern(x: int) -> int:
    tab = nae3().table
    return (tab[(x >> 6) & 7] << 2) | (tab[(x >> 3) & 7] << 1) | tab[x & 7]


def test_nae3_squared_claims():
    g = builtin_scheme("nae3")
    c = compose_scheme(g, g)
    for x in c.a_side + c.b_side:
        assert check_corollary(c, x)


def test_nae3_squared_claim2_sampled():
    g = builtin_scheme("nae3")
    c = compose_scheme(g, g)
    rng = random.Random(7)
    for x, y in rng.sample(list(c.iter_pairs()), 50):
        z = _nae3_pattern(y)
        diff = x ^ y
        for i in range(1, 10):
            if diff & var_bit(9, i):
                assert check_claim2(c, x, z, i)


def test_claim_checks_reject_non_partners():
    g = builtin_scheme("nae3")
    c = compose_scheme(g, g)
    x = c.a_side[0]
    with pytest.raises(SchemeError):
        check_claim1(c, x, _nae3_pattern(x))  # own pattern is never a partner
    # a coordinate in a block where the patterns agree is rejected
    for x, y in c.iter_pairs():
        z = _nae3_pattern(y)
        agreeing = [
            j for j in (1, 2, 3) if not (x ^ y) & (0b111 << (3 * (3 - j)))
        ]
        if agreeing:
            i = 3 * (agreeing[0] - 1) + 1
            with pytest.raises(SchemeError):
                check_claim2(c, x, z, i)
            break


def test_composed_constraint_holds_with_equality():
    g = builtin_scheme("nae3")
    c = compose_scheme(g, g)
    rng = random.Random(11)
    for x, y in rng.sample(list(c.iter_pairs()), 60):
        w = c.weight(x, y)
        diff = x ^ y
        for i in range(1, 10):
            if diff & var_bit(9, i):
                assert c.wprime(x, y, i) * c.wprime(y, x, i) == w * w


def test_sweep_matches_point_queries():
    g = builtin_scheme("nae3")
    c = compose_scheme(g, g)
    seen = 0
    for source, records in c.sweep_pairs("a"):
        for partner, w, diffs in records:
            assert w == c.weight(source, partner)
            for i, fwd, bwd in diffs:
                assert fwd == c.wprime(source, partner, i)
                assert bwd == c.wprime(partner, source, i)
            seen += 1
        if seen > 200:
            break
    assert seen > 200


def test_weight_errors():
    g = builtin_scheme("nae3")
    c = compose_scheme(g, g)
    a0, b0 = c.a_side[0], c.b_side[0]
    with pytest.raises(SchemeError):
        c.weight(a0, c.a_side[1])
    x, y = next(iter(c.iter_pairs()))
    agree = next(i for i in range(1, 10) if not (x ^ y) & var_bit(9, i))
    with pytest.raises(SchemeError):
        c.wprime(x, y, agree)
    with pytest.raises(ValueError):
        c.wprime(x, y, 10)


def test_f4_squared_construction():
    s = builtin_scheme("f4")
    c = compose_scheme(s, s)
    assert c.arity == 16
    assert c.f == iterate(f4(), 2)
    assert len(c.a_side) == 32768 and len(c.b_side) == 32768
    assert c.pair_count == 1310720
    assert c.predicted_bound == ExactWeight(25, 4)
    assert predicted_bound(s, 5) == ExactWeight(5, 2) ** 5

    # spot-check one source sweep against the point API
    source, records = next(iter(c.sweep_pairs("a")))
    assert exact_sum([r[1] for r in records]) == ExactWeight(10, 3) ** 5
    for partner, w, diffs in records[:5]:
        assert w == c.weight(source, partner)
        for i, fwd, bwd in diffs:
            assert fwd == c.wprime(source, partner, i)
            assert bwd == c.wprime(partner, source, i)


def test_predicted_bound_validations():
    with pytest.raises(ValueError):
        predicted_bound(builtin_scheme("f4"), 0)


def test_composed_scheme_round_trips_through_files(tmp_path):
    g = builtin_scheme("nae3")
    c = compose_scheme(g, g)
    path = tmp_path / "nae3sq.scheme.json"
    save_scheme(c, path)
    back = load_scheme(path)
    assert back.f == c.f
    assert back.pair_count == c.pair_count
    assert verify(back) == []
    assert loads(back, keep_maps=False).bound == ExactWeight(9, 2)
