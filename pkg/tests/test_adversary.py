"""Weight schemes: verification, loads, balancing, and files."""

from fractions import Fraction

import pytest

from advwb.adversary import (
    ExplicitScheme,
    ScaledScheme,
    SchemeError,
    balance,
    builtin_scheme,
    load_scheme,
    loads,
    relation_bound,
    save_scheme,
    sensitive_partition,
    unit_scheme,
    verify,
)
from advwb.boolfn import f4, h6, nae3, parity, save_table
from advwb.weights import ONE, ExactWeight


def test_f4_scheme_values():
    s = builtin_scheme("f4")
    assert s.pair_count == 32
    assert verify(s) == []
    rep = loads(s)
    ten_thirds = ExactWeight(10, 3)
    assert rep.wt_min == ten_thirds and rep.wt_max == ten_thirds
    assert rep.v_lo == ExactWeight(4, 3) and rep.v_hi == ExactWeight(4, 3)
    assert rep.v_a == ExactWeight(2, 5) and rep.v_b == ExactWeight(2, 5)
    assert rep.v_max == ExactWeight(2, 5)
    assert rep.bound == ExactWeight(5, 2)
    assert all(rep.wt[x] == ten_thirds for x in s.a_side + s.b_side)
    assert all(v == ExactWeight(4, 3) for v in rep.v.values())
    # equal side loads: balancing is a no-op
    assert balance(s, rep) is s


def test_nae3_scheme_values():
    s = builtin_scheme("nae3")
    assert s.pair_count == 12
    assert verify(s) == []
    rep = loads(s)
    assert all(rep.wt[x] == ExactWeight(9) for x in s.a_side)
    assert all(rep.wt[y] == ExactWeight(3) for y in s.b_side)
    assert rep.v_lo == ExactWeight(1, 1, 2)
    assert rep.v_hi == ExactWeight(3, 1, 2)
    assert rep.v_max == ExactWeight(1, 3, 2)
    assert rep.bound == ExactWeight(3, 2, 2)


def test_h6_scheme_values():
    s = builtin_scheme("h6")
    assert s.pair_count == 36
    assert verify(s) == []
    rep = loads(s)
    assert rep.wt_min == ExactWeight(3, 8)
    assert rep.wt_max == ExactWeight(6)
    assert rep.v_a == ExactWeight(1, 6)
    assert rep.v_b == ExactWeight(8, 13)
    assert rep.v_max == ExactWeight(2, 39, 39)
    assert rep.bound == ExactWeight(1, 2, 39)
    assert rep.bound.decimal(6) == "3.122499"


def test_balance_h6_preserves_invariants():
    base = builtin_scheme("h6")
    before = loads(base)
    bal = balance(base)
    assert isinstance(bal, ScaledScheme)
    after = loads(bal)
    assert after.v_a == after.v_b == before.v_max
    assert after.v_max == before.v_max
    assert after.bound == before.bound
    # pair weights and directional products survive the rescaling
    for x, y in list(base.iter_pairs())[:10]:
        assert bal.weight(x, y) == base.weight(x, y)
        diff = x ^ y
        for i in range(1, 7):
            if diff & (1 << (6 - i)):
                assert bal.wprime(x, y, i) * bal.wprime(y, x, i) == base.wprime(
                    x, y, i
                ) * base.wprime(y, x, i)
    # delegation
    assert bal.f == base.f
    assert bal.a_side == base.a_side and bal.b_side == base.b_side
    assert bal.pair_count == base.pair_count


def test_scheme_construction_errors():
    g = nae3()
    with pytest.raises(SchemeError):
        ExplicitScheme(g, [])
    with pytest.raises(SchemeError):
        ExplicitScheme(g, [(0, 0, ONE, {})])
    with pytest.raises(SchemeError):
        ExplicitScheme(g, [(0, 9, ONE, {})])
    with pytest.raises(SchemeError):
        ExplicitScheme(
            g,
            [(0, 1, ONE, {3: (ONE, ONE)}), (0, 1, ONE, {3: (ONE, ONE)})],
        )
    with pytest.raises(SchemeError):
        # coordinate 1 agrees on the pair (000, 001)
        ExplicitScheme(g, [(0, 1, ONE, {1: (ONE, ONE)})])


def test_weight_lookup_errors():
    s = builtin_scheme("nae3")
    with pytest.raises(SchemeError):
        s.weight(0, 7)  # both zero inputs, never paired
    x, y = next(iter(s.iter_pairs()))
    agree = next(i for i in range(1, 4) if not (x ^ y) & (1 << (3 - i)))
    with pytest.raises(SchemeError):
        s.wprime(x, y, agree)


def test_verify_reports_violations():
    g = nae3()
    # product of directional weights below the squared pair weight
    bad = ExplicitScheme(g, [(0, 1, ExactWeight(2), {3: (ONE, ONE)})])
    kinds = {v.kind for v in verify(bad)}
    assert "constraint" in kinds

    zero_w = ExplicitScheme(g, [(0, 1, 0, {3: (ONE, ONE)})])
    assert {v.kind for v in verify(zero_w)} == {"weight"}

    # (000, 011) differ at coordinates 2 and 3 but only 2 is weighted
    missing = ExplicitScheme(g, [(0, 3, ONE, {2: (ONE, ONE)})])
    assert "directional" in {v.kind for v in verify(missing)}

    sides = ExplicitScheme(g, [(1, 2, ONE, {2: (ONE, ONE), 3: (ONE, ONE)})])
    assert "side" in {v.kind for v in verify(sides)}


def test_verify_respects_limit():
    g = nae3()
    pairs = [(0, y, ExactWeight(5), {i: (ONE, ONE) for i in (1, 2, 3) if (0 ^ y) & (1 << (3 - i))}) for y in (1, 2, 3, 4, 5, 6)]
    bad = ExplicitScheme(g, pairs)
    assert len(verify(bad, limit=3)) == 3


def test_relation_bound_matches_unit_scheme():
    f = parity(2)
    a, b = (0, 3), (1, 2)
    relation = [(0, 1), (0, 2), (3, 1), (3, 2)]
    rb = relation_bound(f, a, b, relation)
    assert (rb.m, rb.m_prime, rb.l, rb.l_prime) == (2, 2, 1, 1)
    assert rb.bound == ExactWeight(2)
    unit = unit_scheme(f, a, b, relation)
    assert verify(unit) == []
    assert loads(unit).bound == rb.bound


def test_relation_bound_input_checks():
    f = parity(2)
    with pytest.raises(SchemeError):
        relation_bound(f, (1,), (2,), [(1, 2)])  # 1 is a 1-input
    with pytest.raises(SchemeError):
        relation_bound(f, (0,), (1,), [])
    with pytest.raises(SchemeError):
        relation_bound(f, (0,), (1,), [(3, 1)])  # 3 not on the declared side


def test_sensitive_partition():
    f = f4()
    sens, insens = sensitive_partition(f, 0)
    assert sens == (1, 2) and insens == (3, 4)
    for x in range(16):
        s, ins = sensitive_partition(f, x)
        assert len(s) == 2 and len(ins) == 2
        assert sorted(s + ins) == [1, 2, 3, 4]


@pytest.mark.parametrize("name", ["f4", "nae3", "h6"])
def test_scheme_file_round_trip(name, tmp_path):
    s = builtin_scheme(name)
    path = tmp_path / f"{name}.scheme.json"
    save_scheme(s, path)
    back = load_scheme(path)
    assert back.f == s.f
    assert back.a_side == s.a_side and back.b_side == s.b_side
    assert back.pair_count == s.pair_count
    for x, y in s.iter_pairs():
        assert back.weight(x, y) == s.weight(x, y)
        diff = x ^ y
        n = s.f.arity
        for i in range(1, n + 1):
            if diff & (1 << (n - i)):
                assert back.wprime(x, y, i) == s.wprime(x, y, i)
    before, after = loads(s), loads(back)
    assert (before.bound, before.v_max) == (after.bound, after.v_max)


def test_scheme_file_with_external_table(tmp_path):
    import json

    s = builtin_scheme("f4")
    path = tmp_path / "f4.scheme.json"
    save_scheme(s, path)
    doc = json.loads(path.read_text())
    del doc["table"]
    doc["path"] = "f4.tbl"
    path.write_text(json.dumps(doc))
    save_table(f4(), tmp_path / "f4.tbl")
    back = load_scheme(path)
    assert back.f == f4()
    assert loads(back).bound == ExactWeight(5, 2)


def test_load_scheme_rejects_stray_pairs(tmp_path):
    import json

    s = builtin_scheme("f4")
    path = tmp_path / "bad.scheme.json"
    save_scheme(s, path)
    doc = json.loads(path.read_text())
    doc["a"] = doc["a"][1:]  # first source is no longer declared
    path.write_text(json.dumps(doc))
    with pytest.raises(SchemeError):
        load_scheme(path)


def test_balanced_scheme_saves_and_loads(tmp_path):
    bal = balance(builtin_scheme("h6"))
    path = tmp_path / "h6bal.scheme.json"
    save_scheme(bal, path)
    back = load_scheme(path)
    rep = loads(back)
    assert rep.v_a == rep.v_b == ExactWeight(2, 39, 39)
    assert rep.bound == ExactWeight(1, 2, 39)
