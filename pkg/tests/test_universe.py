import itertools

import pytest
from hypothesis import given, strategies as st

from eqk.errors import NotInFamily, NotNormal, ParseError, SubgroupMismatch
from eqk.gset import disjoint_union, gsets_up_to, orbits_and_stabilizers, regular_gset, trivial_gset
from eqk.perm import (
    build_group,
    direct_product,
    enumerate_homomorphisms,
    enumerate_subgroups,
    graph_subgroup,
    symmetric_group,
)
from eqk.universe import (
    admissible_pairs,
    embeds,
    family_membership,
    family_product,
    make_universe,
    parse_subgroup,
    parse_universe,
    transfer_admissible,
    twist,
    untwist,
    untwist_then_twist,
    vector_stabilizer,
    verify_embedding,
)

from oracles import brute_vector_stabilizers

GROUPS = ("C2", "C3", "C4", "C2xC2", "S3")


def universes(G):
    out = [make_universe(G, "complete"), make_universe(G, "trivial"),
           make_universe(G, "explicit", classes=[G.trivial()])]
    for N in enumerate_subgroups(G):
        if N.is_normal_in(G) and 1 < N.order < G.order:
            out.append(make_universe(G, "n_fixed", N=N))
    return out


CASES = [(name, U) for name in GROUPS for U in universes(build_group(name))]


def test_make_universe_examples():
    S3 = build_group("S3")
    A3 = parse_subgroup(S3, "A3")
    U = make_universe(S3, "n_fixed", N=A3)
    assert [L.order for L in U.classes] == [3, 6]
    assert make_universe(S3, "n_fixed", N=S3.trivial()) == make_universe(S3, "complete")
    assert make_universe(S3, "n_fixed", N=S3.full()) == make_universe(S3, "trivial")
    with pytest.raises(NotNormal):
        make_universe(S3, "n_fixed", N=parse_subgroup(S3, "<(01)>"))


def test_universe_literals():
    S3 = build_group("S3")
    assert parse_universe(S3, "complete").classes == make_universe(S3, "complete").classes
    assert len(parse_universe(S3, "nfixed:4").classes) == 2
    assert parse_universe(S3, "nfixed:A3") == parse_universe(S3, "nfixed:4")
    assert parse_universe(S3, "classes:[0, 5]").classes == (S3.trivial(), S3.full())
    assert parse_universe(S3, "free").classes == (S3.trivial(),)
    for bad in ("classes:[]", "classes:0", "wat", "nfixed:#99"):
        with pytest.raises(ParseError):
            parse_universe(S3, bad)


def test_subgroup_references():
    S3 = build_group("S3")
    assert parse_subgroup(S3, "1") == S3.trivial()
    assert parse_subgroup(S3, "G") == S3.full()
    assert parse_subgroup(S3, "#4").order == 3
    assert parse_subgroup(S3, "⟨(0 1 2)⟩") == parse_subgroup(S3, "A3")
    with pytest.raises(ParseError):
        parse_subgroup(S3, "3")


def test_embedding_examples():
    C2 = build_group("C2")
    triv = make_universe(C2, "trivial")
    assert embeds(C2.full(), trivial_gset(C2, []), triv)
    assert not embeds(C2.full(), regular_gset(C2), triv)
    e = C2.trivial()
    assert embeds(e, trivial_gset(e, range(5)), triv)


@pytest.mark.parametrize("name,U", CASES)
def test_embeds_matches_orbit_types_and_unions(name, U):
    G = U.group
    allowed = set()
    for L in U.classes:
        for g in range(G.order):
            allowed.add(frozenset(L.conjugate(g).elements))
    for H in enumerate_subgroups(G):
        sets = gsets_up_to(H, 3, nonempty=False)
        for M in sets:
            e = embeds(H, M, U)
            # an H-orbit with stabilizer S embeds iff S = H n L' for some L' in an allowed class
            ok = all(any(frozenset(o.stabilizer.elements) == frozenset(H.elements) & L for L in allowed)
                     for o in orbits_and_stabilizers(M))
            assert bool(e) == ok
            if e:
                assert verify_embedding(H, M, U, e)
        for M, N in itertools.product(sets[:6], repeat=2):
            assert bool(embeds(H, disjoint_union([M, N]), U)) == (bool(embeds(H, M, U)) and bool(embeds(H, N, U)))


def test_family_examples():
    C2 = build_group("C2")
    S2 = symmetric_group(2)
    P = direct_product(C2, S2)
    one_x_s2 = P.generate([P.pair(0, 1)])
    m = family_membership(one_x_s2, make_universe(C2, "complete"))
    assert not m and m.reason.startswith("NotAGraph")
    alpha = enumerate_homomorphisms(C2, S2)[1]
    diag = graph_subgroup(alpha)
    assert family_membership(diag, make_universe(C2, "complete"))
    assert not family_membership(diag, make_universe(C2, "trivial"))


def _oracle_member(L, U, n):
    """Graph test by coordinates, then look for an equivariant injection of the
    n-set into a big enough window."""
    P = L.parent
    pairs = [P.split(x) for x in L.elements]
    if any(a == 0 and b != 0 for a, b in pairs):
        return False
    from eqk.gset import GSet, equivariant_injections
    from eqk.perm import Subgroup

    H = Subgroup(U.group, [a for a, _ in pairs])
    Sn = symmetric_group(n)
    img = dict(pairs)
    nset = GSet(H, range(n), [list(Sn.elements[img[h]].images) for h in H.elements])
    return bool(equivariant_injections(nset, U.window(n).restrict(H)))


@pytest.mark.parametrize("name,U", [c for c in CASES if c[0] in ("C2", "C3", "S3")])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_family_against_oracle_and_closure(name, U, n):
    P = family_product(U, n)
    subs = enumerate_subgroups(P, cap=None)
    member = {S.elements: bool(family_membership(S, U)) for S in subs}
    for S in subs:
        assert member[S.elements] == _oracle_member(S, U, n)
        if member[S.elements]:
            for T in subs:
                if T.is_subgroup_of(S):
                    assert member[T.elements]
            for g in P.full().generators:
                assert member[S.conjugate(g).elements]


def test_untwist_twist():
    C2 = build_group("C2")
    U = make_universe(C2, "complete")
    free = next(c for c, L in enumerate(U.classes) if L.order == 1)
    tw = twist(C2.full(), [(free, 0, 0), (free, 0, 1)], U)
    assert tw.alpha.images[1] != 0  # diagonal graph of the swap
    w = untwist(tw.K, U)
    assert w.H == C2.full() and len(w.nset.points) == 2
    with pytest.raises(NotInFamily):
        untwist(tw.K, make_universe(C2, "trivial"))
    with pytest.raises(NotInFamily):
        twist(C2.full(), [(free, 0, 0)], U)
    # trivial H-set structure gives H x 1
    fixed = next(c for c, L in enumerate(U.classes) if L.order == 2)
    tw = twist(C2.full(), [(fixed, 0, 0), (fixed, 1, 0)], U)
    assert set(tw.alpha.images) == {0}


@pytest.mark.parametrize("name,U", [c for c in CASES if c[0] in ("C2", "S3")])
def test_round_trip_returns_conjugate(name, U):
    for n in (1, 2, 3):
        P = family_product(U, n)
        for K in enumerate_subgroups(P, cap=None):
            if family_membership(K, U):
                tw, x = untwist_then_twist(K, U)
                assert tw.K.conjugate(x) == K


def test_transfer_examples():
    C2 = build_group("C2")
    free = make_universe(C2, "explicit", classes=[C2.trivial()])
    r = transfer_admissible(C2.trivial(), C2.full(), free)
    assert r and vector_stabilizer(r.vector, C2.full(), free) == C2.trivial()
    with pytest.raises(SubgroupMismatch):
        transfer_admissible(C2.full(), C2.trivial(), free)


@pytest.mark.parametrize("name,U", CASES)
def test_transfer_special_universes(name, U):
    G = U.group
    for K in enumerate_subgroups(G):
        for H in enumerate_subgroups(K):
            a = bool(transfer_admissible(H, K, U))
            if U.name == "complete":
                assert a
            if U.name == "trivial":
                assert a == (H == K)


def _windowed(U):
    n1 = len(U.window(1).points)
    if 2 * n1 <= 12:
        return 2
    return 1 if n1 <= 10 else None


@pytest.mark.parametrize("name,U", CASES)
def test_transfer_matches_vector_search(name, U):
    copies = _windowed(U)
    if copies is None:
        pytest.skip("window too large for exhaustive vectors")
    for K in enumerate_subgroups(U.group):
        got = {S.elements for S in admissible_pairs(K, U)}
        assert got == brute_vector_stabilizers(K, U, copies)


@pytest.mark.parametrize("name,U", CASES)
def test_transfer_transitive(name, U):
    subs = enumerate_subgroups(U.group)
    for H, K, L in itertools.product(subs, repeat=3):
        if H.is_subgroup_of(K) and K.is_subgroup_of(L):
            if transfer_admissible(H, K, U) and transfer_admissible(K, L, U):
                assert transfer_admissible(H, L, U)


@given(st.sampled_from(CASES), st.data())
def test_transfer_witness_realizes_stabilizer(c, data):
    _, U = c
    K = data.draw(st.sampled_from(enumerate_subgroups(U.group)))
    H = data.draw(st.sampled_from(enumerate_subgroups(K)))
    r = transfer_admissible(H, K, U)
    if r:
        assert vector_stabilizer(r.vector, K, U) == H
        assert all(c < len(U.classes) for c, _, _ in r.vector)
