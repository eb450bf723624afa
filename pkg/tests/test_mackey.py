import itertools

import pytest
from hypothesis import given, settings, strategies as st

from eqk.errors import SubgroupMismatch, TransferNotAdmissible, WindowExceeded
from eqk.gset import regular_gset, trivial_gset
from eqk.injmonoid import UInjection, automorphisms, identity_inj, shift
from eqk.mackey import (
    MackeyElement,
    MackeyStructure,
    TomDieckModule,
    basis_report,
    burnside_oracle_check,
    canonical,
    find_semistability_witness,
    monoid_act_basis,
    tomdieck_basis,
)
from eqk.perm import build_group, conjugacy_classes_of_subgroups, enumerate_subgroups
from eqk.universe import make_universe, parse_subgroup, transfer_admissible

from oracles import brute_orbits_on_cosets, brute_transfer_basis_size

CORPUS = ("C1", "C2", "C3", "C4", "C6", "C2xC2", "S3", "D8", "Q8", "A4")


def _universes(G):
    return [make_universe(G, "complete"), make_universe(G, "trivial"),
            make_universe(G, "explicit", classes=[G.trivial()])]


def test_rank_examples():
    C2 = build_group("C2")
    empty = trivial_gset(C2, [])
    assert len(tomdieck_basis(C2.full(), empty, make_universe(C2, "complete"), 1)) == 2
    assert len(tomdieck_basis(C2.full(), empty, make_universe(C2, "trivial"), 1)) == 1
    free = make_universe(C2, "explicit", classes=[C2.trivial()])
    pt = trivial_gset(C2, [0])
    for T in range(1, 6):
        assert len(tomdieck_basis(C2.full(), pt, free, T)) == T
    S3 = build_group("S3")
    assert len(tomdieck_basis(S3.full(), trivial_gset(S3, []), make_universe(S3, "complete"), 1)) == 4


@pytest.mark.parametrize("name", CORPUS)
def test_burnside_rank_is_class_count(name):
    G = build_group(name)
    U = make_universe(G, "complete")
    empty = trivial_gset(G, [])
    for H in enumerate_subgroups(G):
        r = basis_report(H, empty, U, 1)
        assert r.rank == len(conjugacy_classes_of_subgroups(H)) and r.stable


@pytest.mark.parametrize("name", ["C2", "C3", "S3"])
@pytest.mark.parametrize("carrier", ["empty", "point", "regular"])
def test_basis_matches_pair_enumeration(name, carrier):
    G = build_group(name)
    M = {"empty": trivial_gset(G, []), "point": trivial_gset(G, [0]), "regular": regular_gset(G)}[carrier]
    for U in _universes(G):
        for H in enumerate_subgroups(G):
            for T in (1, 2):
                if carrier == "regular" and (T == 2 or G.order > 3):
                    continue   # too many raw injections for the pair enumeration
                got = len(tomdieck_basis(H, M, U, T))
                sub_of = {S.elements: S for S in enumerate_subgroups(H)}

                def adm(K):
                    return bool(transfer_admissible(sub_of[tuple(sorted(K))], H, U))

                assert got == brute_transfer_basis_size(H, M, U, T, adm)


def test_basis_rejects_foreign_carrier():
    G = build_group("C2")
    with pytest.raises(SubgroupMismatch):
        tomdieck_basis(G.full(), trivial_gset(build_group("C3"), []), make_universe(G, "complete"), 1)


def _elements(S, H, T=2):
    return [S.element(b) for b in tomdieck_basis(H, S.M, S.U, T)]


def _structures(name):
    G = build_group(name)
    out = []
    for U in _universes(G):
        for M in (trivial_gset(G, []), trivial_gset(G, [0])):
            out.append(MackeyStructure(U, M, window=2))
    return out


@pytest.mark.parametrize("name", ["C2", "C4", "S3"])
def test_identity_structure_maps(name):
    for S in _structures(name):
        for H in enumerate_subgroups(S.U.group):
            for x in _elements(S, H):
                assert S.res(H, x) == x
                assert S.tr(H, x) == x
                assert S.conj(0, x) == x
                for h in H.elements:
                    assert S.conj(h, x) == x


@pytest.mark.parametrize("name", ["C2", "C4", "C2xC2", "S3"])
def test_restriction_of_transfer_counts_index(name):
    G = build_group(name)
    S = MackeyStructure(make_universe(G, "complete"))
    e = G.trivial()
    for H in enumerate_subgroups(G):
        for K in enumerate_subgroups(H):
            x = S.res(e, S.tr(H, S.one(K)))
            assert sum(c for _, _, c in x.terms()) == H.order // K.order
            assert len(x.terms()) == 1


def test_transfer_gate():
    G = build_group("C2")
    S = MackeyStructure(make_universe(G, "trivial"))
    with pytest.raises(TransferNotAdmissible):
        S.tr(G.full(), S.one(G.trivial()))
    with pytest.raises(SubgroupMismatch):
        S.res(G.full(), S.one(G.trivial()))


def test_oracle_example():
    S3 = build_group("S3")
    U = make_universe(S3, "complete")
    A3 = parse_subgroup(S3, "A3")
    J = parse_subgroup(S3, "<(01)>")
    rep = burnside_oracle_check(U, S3.full(), A3, J)
    assert rep.passed
    # (01) swaps the two cosets of A3: a single free J-orbit
    assert [(K.order, c) for K, _, c in rep.via_structure.terms()] == [(1, 1)]
    rep = burnside_oracle_check(U, S3.full(), A3, S3.full())
    assert rep.via_structure == MackeyStructure(U).tr(S3.full(), MackeyStructure(U).one(A3))


@pytest.mark.parametrize("name", CORPUS)
def test_double_coset_formula_against_orbits(name):
    G = build_group(name)
    for U in _universes(G):
        S = MackeyStructure(U)
        subs = enumerate_subgroups(G)
        for K in subs:
            for H in subs:
                if not H.is_subgroup_of(K) or not transfer_admissible(H, K, U):
                    continue
                for J in subs:
                    if not J.is_subgroup_of(K):
                        continue
                    rep = burnside_oracle_check(U, K, H, J)
                    assert rep.passed
                    assert S.double_coset_sum(J, K, S.one(H)) == rep.via_structure
                    # stabilizers straight from the coset sets
                    expect = MackeyElement(J)
                    for stab in brute_orbits_on_cosets(K, H, J):
                        L = next(T for T in enumerate_subgroups(J) if set(T.elements) == stab)
                        b = canonical(J, L, (), S.M, U)
                        expect.add(b.inner, b.alpha, 1)
                    assert rep.via_orbits == expect


@pytest.mark.parametrize("name", ["C2", "C4", "C2xC2", "S3"])
def test_mackey_axioms(name):
    for S in _structures(name):
        G = S.U.group
        subs = enumerate_subgroups(G)
        for H in subs:
            for x in _elements(S, H):
                for J in subs:
                    if not J.is_subgroup_of(H):
                        continue
                    for I in subs:
                        if I.is_subgroup_of(J):
                            assert S.res(I, S.res(J, x)) == S.res(I, x)
                    for g in G.full().generators:
                        assert S.conj(g, S.res(J, x)) == S.res(J.conjugate(g), S.conj(g, x))
                for L in subs:
                    if H.is_subgroup_of(L) and transfer_admissible(H, L, S.U):
                        for g in G.full().generators:
                            assert S.conj(g, S.tr(L, x)) == S.tr(L.conjugate(g), S.conj(g, x))
                        for P in subs:
                            if L.is_subgroup_of(P) and transfer_admissible(L, P, S.U):
                                assert S.tr(P, S.tr(L, x)) == S.tr(P, x)
                for g, k in itertools.product(range(G.order), repeat=2):
                    assert S.conj(g, S.conj(k, x)) == S.conj(G.tab[g][k], x)


@st.composite
def injection_for(draw, U):
    window, tails = [], []
    for c in range(len(U.classes)):
        w, k = draw(st.integers(0, 2)), draw(st.integers(0, 2))
        targets = draw(st.permutations(range(w + k)))[:w]
        window.append([(t, draw(st.sampled_from(automorphisms(U, c)))) for t in targets])
        tails.append(k)
    return UInjection(U, window, tails)


STRUCTS = [S for name in ("C2", "C3", "S3") for S in _structures(name)]


@given(st.sampled_from(STRUCTS), st.data())
@settings(max_examples=40)
def test_action_commutes_with_structure_maps(S, data):
    phi = data.draw(injection_for(S.U))
    G = S.U.group
    subs = enumerate_subgroups(G)
    H = data.draw(st.sampled_from(subs))
    for x in _elements(S, H, 1):
        for J in subs:
            if J.is_subgroup_of(H):
                assert S.act(phi, S.res(J, x)) == S.res(J, S.act(phi, x))
            if H.is_subgroup_of(J) and transfer_admissible(H, J, S.U):
                assert S.act(phi, S.tr(J, x)) == S.tr(J, S.act(phi, x))
        for g in G.full().generators:
            assert S.act(phi, S.conj(g, x)) == S.conj(g, S.act(phi, x))
        assert S.act(identity_inj(S.U), x) == x


def test_action_trivial_for_empty_carrier():
    G = build_group("S3")
    U = make_universe(G, "complete")
    empty = trivial_gset(G, [])
    phi = shift(U, [(c, 0) for c in range(len(U.classes))])
    for H in enumerate_subgroups(G):
        for b in tomdieck_basis(H, empty, U, 1):
            assert monoid_act_basis(phi, b, empty, U) == b
        assert find_semistability_witness(H, empty, U) is None


@pytest.mark.parametrize("name", ["C2", "C3", "S3"])
def test_shift_moves_a_basis_element(name):
    G = build_group(name)
    U = make_universe(G, "complete")
    pt = trivial_gset(G, [0])
    w = find_semistability_witness(G.full(), pt, U)
    assert w is not None
    phi, b, img = w
    assert img != b and monoid_act_basis(phi, b, pt, U) == img
    with pytest.raises(WindowExceeded):
        monoid_act_basis(phi, b, pt, U, T=1)


def test_module_wrapper():
    G = build_group("C2")
    U = make_universe(G, "complete")
    A = TomDieckModule(G.full(), trivial_gset(G, [0]), U)
    assert not A.finite and len(A.basis(1)) == len(tomdieck_basis(G.full(), A.M, U, 1))
    assert TomDieckModule(G.full(), trivial_gset(G, []), U).finite
