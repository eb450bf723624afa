import itertools

import pytest
from hypothesis import given, settings, strategies as st

from eqk.errors import FreenessViolated, NotNormal, ParseError, SubgroupMismatch
from eqk.gset import (
    BASE,
    GSet,
    based,
    coinduce,
    count_equivariant_maps,
    double_coset_decompose_coinduction,
    double_coset_decompose_induction,
    equivariant_injections,
    gsets_up_to,
    induce,
    injection_gset,
    iso_test,
    multiple,
    orbit_count_burnside,
    orbit_gset,
    orbits_and_stabilizers,
    parse_gset,
    quotient_fixed_points,
    regular_gset,
    smash,
    trivial_gset,
    wedge,
)
from eqk.perm import build_group, enumerate_subgroups, normal_subgroups, quotient_group
from eqk.universe import parse_subgroup

from oracles import (
    action_laws_hold,
    brute_equivariant_injections,
    brute_equivariant_maps,
    brute_orbit_count,
)

GROUPS = ("C2", "C3", "C4", "C2xC2", "S3")


def _cases(max_points=4):
    out = []
    for name in GROUPS:
        G = build_group(name)
        for H in enumerate_subgroups(G):
            for X in gsets_up_to(H, max_points):
                out.append((G, H, X))
    return out


CASES = _cases()
case = st.sampled_from(CASES)


def test_gsets_up_to_counts():
    # a C2-set of size n is a fixed points plus b free orbits, a + 2b = n
    assert len(gsets_up_to(build_group("C2"), 3)) == 1 + 2 + 2
    # S3 transitive types have sizes 1, 2, 3, 6
    assert len(gsets_up_to(build_group("S3"), 3)) == 1 + 2 + 3


@given(case)
def test_action_laws(c):
    G, H, X = c
    assert action_laws_hold(X) and X.check_action()
    for Y in (based(X), induce(G, X), induce(G, based(X)), coinduce(G, X)):
        assert action_laws_hold(Y)


@given(case)
def test_burnside_orbit_count(c):
    _, _, X = c
    assert orbit_count_burnside(X) == brute_orbit_count(X) == len(orbits_and_stabilizers(X))


@given(case)
def test_induce_size(c):
    G, H, X = c
    assert len(induce(G, X).points) == (G.order // H.order) * len(X.points)


def test_induce_from_whole_group_is_identity():
    G = build_group("S3")
    for X in gsets_up_to(G, 4):
        assert iso_test(induce(G, X), X) is not None


def test_induce_and_coinduce_differ_on_point():
    G = build_group("C2")
    pt = trivial_gset(G.trivial(), ["x"])
    ind, co = induce(G, pt), coinduce(G, pt)
    assert len(ind.points) == 2 and len(co.points) == 1
    assert iso_test(ind, regular_gset(G)) is not None


@pytest.mark.parametrize("name", ["C2", "C3", "S3"])
def test_adjunctions_by_counting(name):
    G = build_group(name)
    Ys = gsets_up_to(G, 3)
    for H in enumerate_subgroups(G):
        for X in gsets_up_to(H, 2):
            ind, co = induce(G, X), coinduce(G, X)
            for Y in Ys:
                rY = Y.restrict(H)
                assert count_equivariant_maps(ind, Y) == count_equivariant_maps(X, rY)
                assert count_equivariant_maps(Y, co) == count_equivariant_maps(rY, X)


def test_count_maps_matches_brute():
    G = build_group("S3")
    sets = gsets_up_to(G, 3)
    for X, Y in itertools.product(sets, repeat=2):
        assert count_equivariant_maps(X, Y) == brute_equivariant_maps(X, Y)


def test_iso_examples():
    G = build_group("C2")
    assert iso_test(regular_gset(G), trivial_gset(G, [0, 1])) is None
    X = regular_gset(G)
    w = iso_test(X, X)
    assert w is not None and w.is_iso()
    S3 = build_group("S3")
    A3 = parse_subgroup(S3, "A3")
    Y = orbit_gset(S3, A3)
    Z = Y.relabel(["b", "a"])
    w = iso_test(Y, Z)
    assert w is not None and w.is_equivariant() and w.is_bijective()


def test_decomposition_two_double_cosets():
    S3 = build_group("S3")
    A3 = parse_subgroup(S3, "A3")
    pt = based(trivial_gset(A3, ["x"]))
    d = double_coset_decompose_induction(S3, A3, pt)
    assert len(d.reps) == 2 and len(d.summands) == 2
    assert len(d.lhs.points) == 3 and d.verify()


def test_decomposition_whole_group_single_summand():
    G = build_group("S3")
    X = based(regular_gset(G))
    d = double_coset_decompose_induction(G, G.full(), X)
    assert d.reps == [0] and d.verify()


@pytest.mark.parametrize("name", GROUPS)
def test_decompositions_verify(name):
    G = build_group(name)
    subs = enumerate_subgroups(G)
    for H in subs:
        for X in gsets_up_to(H, 3):
            for K in subs:
                assert double_coset_decompose_induction(G, K, X).verify()
                assert double_coset_decompose_coinduction(G, K, X).verify()


def test_injection_examples():
    C2 = build_group("C2")
    reg = regular_gset(C2)
    assert len(equivariant_injections(reg, multiple(reg, 2))) == 4
    E = trivial_gset(C2, [])
    assert len(injection_gset(E, reg).points) == 1
    triv = build_group("C1")
    assert len(injection_gset(trivial_gset(triv, [0, 1]), trivial_gset(triv, [0, 1, 2])).points) == 6
    assert len(injection_gset(multiple(reg, 2), reg).points) == 0


@pytest.mark.parametrize("name", ["C2", "C3", "S3"])
def test_fixed_injections_count_n_times_order(name):
    G = build_group(name)
    reg = regular_gset(G)
    for n in range(1, 4):
        assert len(equivariant_injections(reg, multiple(reg, n))) == n * G.order


@given(st.sampled_from(GROUPS), st.data())
@settings(max_examples=40)
def test_injections_match_brute(name, data):
    G = build_group(name)
    small = gsets_up_to(G, 3)
    M = data.draw(st.sampled_from(small))
    N = data.draw(st.sampled_from(gsets_up_to(G, 5)))
    H = data.draw(st.sampled_from(enumerate_subgroups(G)))
    assert equivariant_injections(M, N, H) == brute_equivariant_injections(M, N, H)
    inj = injection_gset(M, N)
    assert action_laws_hold(inj)
    assert len(inj.fixed_points(H)) == len(equivariant_injections(M, N, H))


def test_quotient_fixed_points_empty_wedge():
    C4 = build_group("C4")
    K = next(S for S in enumerate_subgroups(C4) if S.order == 2)
    Q, proj = quotient_group(C4, K)
    X = based(regular_gset(C4))
    res = quotient_fixed_points(C4, K, X, Q.full(), (Q, proj))
    assert res.direct == [0] and res.lifts == [] and res.verify()


def test_quotient_fixed_points_trivial_kernel():
    G = build_group("S3")
    K = G.trivial()
    Q, proj = quotient_group(G, K)
    X = based(regular_gset(G))
    for H in enumerate_subgroups(Q):
        res = quotient_fixed_points(G, K, X, H, (Q, proj))
        assert len(res.lifts) == 1 and res.verify()


def test_quotient_fixed_points_freeness_checked():
    C4 = build_group("C4")
    K = next(S for S in enumerate_subgroups(C4) if S.order == 2)
    Q, proj = quotient_group(C4, K)
    X = based(trivial_gset(C4, ["x"]))
    with pytest.raises(FreenessViolated):
        quotient_fixed_points(C4, K, X, Q.full(), (Q, proj))
    S3 = build_group("S3")
    t = parse_subgroup(S3, "<(01)>")
    with pytest.raises(NotNormal):
        quotient_fixed_points(S3, t, based(regular_gset(S3)), S3.full())


@pytest.mark.parametrize("name", ["C4", "C2xC2", "D8", "S3xC2"])
def test_quotient_fixed_points_free_cells(name):
    G = build_group(name)
    for K in normal_subgroups(G):
        Q, proj = quotient_group(G, K)
        cells = [orbit_gset(G, L) for L in enumerate_subgroups(G) if L.intersection(K).order == 1]
        for cell in cells[:4]:
            X = based(cell)
            for H in enumerate_subgroups(Q):
                assert quotient_fixed_points(G, K, X, H, (Q, proj)).verify()


def test_based_operations():
    G = build_group("C2")
    X = based(regular_gset(G))
    Y = based(trivial_gset(G, ["y"]))
    W = wedge([X, Y])
    assert W.points[0] == BASE and len(W.points) == 4
    S = smash(X, Y)
    assert len(S.points) == 1 + 2 * 1
    assert action_laws_hold(W) and action_laws_hold(S)


def test_literals():
    S3 = build_group("S3")
    X = parse_gset(S3, "orbits: G/A3 * 2, G/<(01)>")
    assert len(X.points) == 2 * 2 + 3 and brute_orbit_count(X) == 3
    assert len(parse_gset(S3, "orbits: G/#0").points) == 6
    assert len(parse_gset(S3, "regular").points) == 6
    assert len(parse_gset(S3, "trivial:3").points) == 3
    assert len(parse_gset(S3, "empty").points) == 0
    Y = parse_gset(build_group("C2"), "explicit: [[1, 0, 2]]")
    assert Y.act[1] == [1, 0, 2]
    for bad in ("orbits: A3", "orbits: G/#99", "explicit: [[0, 0]]", "explicit: [", "bogus",
                "trivial:x"):
        with pytest.raises(ParseError):
            parse_gset(S3 if not bad.startswith("explicit") else build_group("C2"), bad)


def test_mismatched_groups_rejected():
    G = build_group("C2")
    H = build_group("C3")
    with pytest.raises(SubgroupMismatch):
        induce(G, regular_gset(H))
    with pytest.raises(SubgroupMismatch):
        injection_gset(regular_gset(G), regular_gset(H))


def test_based_set_requires_basepoint_first():
    G = build_group("C2")
    with pytest.raises(ValueError):
        GSet(G, ["x", BASE], [[0, 1], [0, 1]], based=True)
