import itertools

import pytest
from hypothesis import given, settings, strategies as st

from conftest import DATASETS, dataset
from kfv import parse_poly
from kfv.belyi import (
    BUDGET, EXHAUSTED, FOUND, RamificationProfile, canonical_permutation, check_riemann_hurwitz,
    compose, cycle_type, format_partition, is_transitive, isotope_profile, parse_partition,
    parse_profile, profile_from_framework, realizable_as_permutation_triple, verify_rational_belyi,
)


def prof(n, a, b, c):
    return RamificationProfile(n, a, b, c)


def brute_force_realizable(p):
    """Exhaustive S_n search; only for n <= 6."""
    n = p.n
    perms = list(itertools.permutations(range(n)))
    by_type = {}
    for s in perms:
        by_type.setdefault(cycle_type(s), []).append(list(s))
    for s0 in by_type.get(p.over0, []):
        for s1 in by_type.get(p.over1, []):
            prod = compose(s1, s0)
            if cycle_type(prod) == p.overinf and is_transitive([s0, s1], n):
                return True
    return False


# -- profiles ---------------------------------------------------------------

def test_partition_round_trip():
    assert parse_partition("3^5,1") == (3, 3, 3, 3, 3, 1)
    assert format_partition((13, 1, 1, 1)) == "13,1^3"


def test_profile_spec_parses():
    p = parse_profile("deg=16 over0=2^8 over1=13,1^3 overInf=3^5,1")
    assert p == prof(16, [2] * 8, [13, 1, 1, 1], [3] * 5 + [1])
    assert parse_profile(str(p)) == p


@pytest.mark.parametrize("text", ["deg=4 over0=2,2 over1=2,2", "deg=4 over0=2,1 over1=4 overInf=4",
                                  "deg=4 over0=4 over1=4 overInf=4 extra=1"])
def test_bad_profile_specs(text):
    with pytest.raises(ValueError):
        parse_profile(text)


@pytest.mark.parametrize("p, ok", [
    (prof(16, [2] * 8, [13, 1, 1, 1], [3] * 5 + [1]), True),
    (prof(13, [3] * 4 + [1], [5] + [1] * 8, [13]), True),
    (prof(28, [2] * 14, [3] * 9 + [1], [23] + [1] * 5), True),
    (prof(2, [2], [2], [2]), False),
])
def test_riemann_hurwitz(p, ok):
    assert check_riemann_hurwitz(p) is ok


@pytest.mark.parametrize("k", range(2, 7))
def test_isotope_profiles_satisfy_riemann_hurwitz(k):
    p = isotope_profile(k)
    assert check_riemann_hurwitz(p)
    assert p.over0.count(3) == 6 - k and p.over0.count(1) == 3 * k - 5


def test_isotope_endpoints():
    assert isotope_profile(2) == prof(13, [3] * 4 + [1], [5] + [1] * 8, [13])
    assert isotope_profile(4) == prof(13, [3, 3] + [1] * 7, [9] + [1] * 4, [13])
    assert isotope_profile(6) == prof(13, [1] * 13, [13], [13])
    with pytest.raises(ValueError):
        isotope_profile(7)


# -- framework profiles -----------------------------------------------------

def test_first_framework_profiles(first):
    m = first.framework()
    assert profile_from_framework(m, 8).key() == prof(16, [2] * 8, [3] * 5 + [1], [13, 1, 1, 1]).key()
    assert profile_from_framework(m, 5).key() == prof(13, [3] * 4 + [1], [5] + [1] * 8, [13]).key()


def test_second_framework_profile(second):
    m = second.framework()
    want = prof(28, [2] * 14, [3] * 9 + [1], [23] + [1] * 5).key()
    keys = {profile_from_framework(m, E).key() for E in m.types if m.types[E].kind == 1
            and len(m.target.neighbors(m.types[E].target)) == 3}
    assert want in keys


@pytest.mark.parametrize("name", DATASETS)
def test_every_trivalent_profile_satisfies_riemann_hurwitz(name):
    m = dataset(name).framework()
    for E, t in m.types.items():
        if t.kind == 1 and len(m.target.neighbors(t.target)) == 3:
            assert check_riemann_hurwitz(profile_from_framework(m, E)), E


def test_profile_from_non_type1_rejected(first):
    m = first.framework()
    bad = next(E for E, t in m.types.items() if t.kind != 1)
    with pytest.raises(ValueError):
        profile_from_framework(m, bad)


# -- explicit rational maps -------------------------------------------------

def test_degree_sixteen_map(first):
    env = first.environment()
    p, r, w = env["p"], env["r"], parse_poly("w")
    assert (p * p - w * r ** 3).degree() == 3
    got = verify_rational_belyi(p * p, w * r ** 3)
    assert got.partitions() == ((2,) * 8, (13, 1, 1, 1), (3,) * 5 + (1,))


def test_degree_thirteen_map(first):
    q = first.environment()["q"]
    t = parse_poly("t")
    got = verify_rational_belyi(t * q ** 3, parse_poly("3^15"))
    assert got.partitions() == ((3,) * 4 + (1,), (5,) + (1,) * 8, (13,))
    assert got.partitions() == isotope_profile(2).partitions()


def test_t13_plus_one():
    got = verify_rational_belyi(parse_poly("t^13 + 1"), parse_poly("1"))
    assert got.partitions() == isotope_profile(6).partitions()


def test_degree_five_map():
    got = verify_rational_belyi(parse_poly("x^3*(x-5)^2"), parse_poly("108"))
    assert got.partitions() == ((3, 2), (2, 1, 1, 1), (5,))
    # the double point over 1 sits at x = 3
    f = parse_poly("x^3*(x-5)^2 - 108")
    assert f.subs({"x": parse_poly("3")}).is_zero()


def test_bundled_maps_match_framework_profiles():
    for name, E in [("first.kfw", 8), ("first.kfw", 5), ("isotope_k6.kfw", 5), ("three_dessin.kfw", 2)]:
        ff = dataset(name)
        env = ff.environment()
        block = ff.belyi[E]
        got = verify_rational_belyi(parse_poly(block.num, env), parse_poly(block.den, env))
        assert got.key() == profile_from_framework(ff.framework(), E).key(), (name, E)


def test_rational_map_errors():
    with pytest.raises(ValueError, match="share"):
        verify_rational_belyi(parse_poly("t^2 - 1"), parse_poly("t - 1"))
    with pytest.raises(ValueError):
        verify_rational_belyi(parse_poly("2"), parse_poly("3"))


# -- permutation triples ----------------------------------------------------

@pytest.mark.parametrize("p", [prof(5, [3, 2], [2, 1, 1, 1], [5]), isotope_profile(2)])
def test_search_finds(p):
    res = realizable_as_permutation_triple(p)
    assert res.status == FOUND
    s0, s1, sinf = res.witness
    assert compose(sinf, compose(s1, s0)) == list(range(p.n))
    assert tuple(cycle_type(s) for s in res.witness) == p.partitions()
    assert realizable_as_permutation_triple(p).witness == res.witness


def test_klein_profile_exhausted():
    res = realizable_as_permutation_triple(prof(4, [2, 2], [2, 2], [3, 1]))
    assert res.status == EXHAUSTED and res.witness is None
    assert not brute_force_realizable(prof(4, [2, 2], [2, 2], [3, 1]))


def test_budget_exceeded_is_reported():
    p = parse_profile("deg=23 over0=23 over1=5^2,3^4,1 overInf=7,1^16")
    assert check_riemann_hurwitz(p)
    assert realizable_as_permutation_triple(p, budget=50).status == BUDGET


def test_search_rejects_non_genus_zero():
    with pytest.raises(ValueError):
        realizable_as_permutation_triple(prof(2, [2], [2], [2]))


def test_canonical_permutation_has_type():
    assert cycle_type(canonical_permutation((3, 2, 1))) == (3, 2, 1)


def partitions_of(n):
    if n == 0:
        return [()]
    out = []

    def rec(rest, cap, acc):
        if rest == 0:
            out.append(tuple(acc))
            return
        for x in range(min(rest, cap), 0, -1):
            rec(rest - x, x, acc + [x])
    rec(n, n, [])
    return out


@st.composite
def genus_zero_profiles(draw):
    n = draw(st.integers(2, 6))
    parts = partitions_of(n)
    a = draw(st.sampled_from(parts))
    b = draw(st.sampled_from(parts))
    # RH fixes the number of parts over the third point
    need = n + 2 - len(a) - len(b)
    options = [c for c in parts if len(c) == need]
    c = draw(st.sampled_from(options)) if options else (n,)
    return prof(n, a, b, c)


@settings(max_examples=60)
@given(genus_zero_profiles())
def test_search_agrees_with_brute_force(p):
    if not check_riemann_hurwitz(p):
        return
    res = realizable_as_permutation_triple(p)
    assert (res.status == FOUND) == brute_force_realizable(p)
