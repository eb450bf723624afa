"""Acceptance suite: eleven properties over the fixed corpus of small groups.

Every criterion is deterministic. A report carries the number of cases, a few
aggregate counts and (on failure) up to five counterexample witnesses; run
times are measured against each criterion's limit but never printed, so that
reports are byte-identical across runs.
"""
from __future__ import annotations

import itertools
import json
import os
import random
import subprocess
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

from .errors import EqkError, FreenessViolated
from .gset import (
    GSet,
    based,
    disjoint_union,
    double_coset_decompose_induction,
    gsets_up_to,
    injection_fixed_points,
    iso_test,
    multiple,
    orbit_gset,
    quotient_fixed_points,
    regular_gset,
    trivial_gset,
)
from .injmonoid import (
    EmbeddingTypeModule,
    InjectionModule,
    SumModule,
    UInjection,
    automorphisms,
    compose_inj,
    conjugate,
    criterion_iii,
    criterion_v,
    is_shift_by,
    shift,
    triviality_check,
)
from .mackey import (
    MackeyElement,
    MackeyStructure,
    TomDieckModule,
    burnside_oracle_check,
    find_semistability_witness,
    monoid_act_basis,
    tomdieck_basis,
)
from .norm import (
    NormEmbedding,
    distribute_norm,
    distribute_smash_power,
    function_orbit_count,
    multiset_count,
    norm,
    norm_double_coset,
)
from .perm import (
    Group,
    Subgroup,
    build_group,
    conjugacy_classes_of_subgroups,
    double_cosets,
    enumerate_subgroups,
    normal_subgroups,
    quotient_group,
)
from .universe import (
    UniverseSpec,
    family_membership,
    family_product,
    make_universe,
    oracle_achievable,
    transfer_admissible,
)

CORPUS = ("C1", "C2", "C3", "C4", "C6", "C2xC2", "S3", "D8", "Q8", "A4")
MAX_WITNESSES = 5


def corpus_groups(names=CORPUS) -> list[Group]:
    return [build_group(n) for n in names]


def corpus_universes(G: Group) -> list[UniverseSpec]:
    """complete, trivial and ``n_fixed(N)`` for every normal ``N``."""
    out = [make_universe(G, "complete"), make_universe(G, "trivial")]
    out += [make_universe(G, "n_fixed", N=N) for N in normal_subgroups(G)]
    return out


@dataclass
class CriterionResult:
    number: int
    name: str
    limit: float | None
    cases: int = 0
    detail: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    failure_count: int = 0
    error: str | None = None
    elapsed: float = 0.0

    @property
    def over_time(self) -> bool:
        return self.limit is not None and self.elapsed > self.limit

    @property
    def passed(self) -> bool:
        return self.failure_count == 0 and self.error is None and not self.over_time

    def fail(self, witness: dict):
        self.failure_count += 1
        if len(self.failures) < MAX_WITNESSES:
            self.failures.append(witness)

    def to_dict(self) -> dict:
        d = {"id": self.number, "name": self.name, "passed": self.passed, "cases": self.cases,
             "failures": self.failure_count, "limit_seconds": self.limit, "detail": self.detail}
        if self.error is not None:
            d["error"] = self.error
        if self.over_time:
            d["time_limit_exceeded"] = True
        return d


def _sub(S: Subgroup) -> str:
    return S.label


# ---------------------------------------------------------------------------
# 1. double coset partition

def check_double_coset_partition(r: CriterionResult):
    for G in corpus_groups():
        tab = G.tab
        subs = enumerate_subgroups(G)
        for K in subs:
            for H in subs:
                r.cases += 1
                seen: set[int] = set()
                ok = True
                for d in double_cosets(G, K, H):
                    brute = {tab[tab[k][d.rep]][h] for k in K.elements for h in H.elements}
                    inter = K.intersection(H.conjugate(d.rep))
                    if (set(d.elements) != brute or seen & brute
                            or len(brute) != K.order * H.order // inter.order):
                        ok = False
                    seen |= brute
                if seen != set(range(G.order)):
                    ok = False
                if not ok:
                    r.fail({"G": G.name, "K": _sub(K), "H": _sub(H)})
    r.detail["groups"] = len(CORPUS)


# ---------------------------------------------------------------------------
# 2. induction decomposition

def check_induction_decomposition(r: CriterionResult):
    summands = 0
    for G in corpus_groups():
        subs = enumerate_subgroups(G)
        for H in subs:
            sets = [based(X) for X in gsets_up_to(H, 6)]
            for K in subs:
                for X in sets:
                    r.cases += 1
                    d = double_coset_decompose_induction(G, K, X)
                    summands += len(d.reps)
                    if not d.verify():
                        r.fail({"G": G.name, "K": _sub(K), "H": _sub(H), "X": X.to_dict()})
    r.detail["double_coset_summands"] = summands


# ---------------------------------------------------------------------------
# 3. fixed points of free quotients

QUOTIENT_GROUPS = ("C4", "C2xC2", "C6", "S3", "D8", "Q8", "C2xC2xC2", "S3xC2")


def _free_cells(gamma: Group, K: Subgroup) -> list[Subgroup]:
    return [c[0] for c in conjugacy_classes_of_subgroups(gamma, cap=None)
            if c[0].intersection(K).order == 1]


def _free_sets(gamma: Group, K: Subgroup, max_points: int = 12) -> list[GSet]:
    cells = _free_cells(gamma, K)
    out = []
    for i, L in enumerate(cells):
        out.append(based(orbit_gset(gamma, L)))
        for L2 in cells[i:]:
            if gamma.order // L.order + gamma.order // L2.order <= max_points:
                X = disjoint_union([orbit_gset(gamma, L), orbit_gset(gamma, L2)])
                out.append(based(X.relabel(range(len(X.points)))))
    return out


def check_free_quotients(r: CriterionResult):
    empty_wedges, c4_case, negatives = 0, False, 0
    for name in QUOTIENT_GROUPS:
        gamma = build_group(name)
        for K in normal_subgroups(gamma):
            Q, proj = quotient_group(gamma, K)
            qsubs = enumerate_subgroups(Q, cap=None)
            for X in _free_sets(gamma, K):
                for H in qsubs:
                    r.cases += 1
                    res = quotient_fixed_points(gamma, K, X, H, quotient=(Q, proj))
                    if not res.verify():
                        r.fail({"Gamma": name, "K": _sub(K), "H": list(H.elements), "X": X.to_dict()})
                        continue
                    if not res.lifts:
                        empty_wedges += 1
                        if (name == "C4" and K.order == 2 and H.order == 2 and len(res.direct) == 1
                                and len(X.points) == 5):
                            c4_case = True
            if K.order > 1:
                # the hypothesis is enforced: a non-free set is rejected
                X = based(orbit_gset(gamma, K))
                try:
                    quotient_fixed_points(gamma, K, X, Q.trivial(), quotient=(Q, proj))
                except FreenessViolated:
                    negatives += 1
                else:
                    r.fail({"Gamma": name, "K": _sub(K), "reason": "non-free set accepted"})
    r.detail.update(instances=r.cases, empty_wedge_instances=empty_wedges, c4_mod_c2_empty_wedge=c4_case,
                    freeness_rejections=negatives)
    if r.cases < 200:
        r.fail({"reason": f"only {r.cases} instances generated"})
    if not c4_case:
        r.fail({"reason": "the C4/C2 empty-wedge instance was not exercised"})


# ---------------------------------------------------------------------------
# 4. families

def _oracle_member(P: Group, L: Subgroup, U: UniverseSpec, n: int) -> bool:
    """Graph test from the product coordinates, embedding by exhaustive search."""
    from .gset import equivariant_injections
    from .perm import symmetric_group

    Sn = symmetric_group(n)
    first = {}
    for x in L.elements:
        g, s = P.split(x)
        if g in first:
            return False   # two elements over the same g: L meets Sigma_n
        first[g] = s
    G = U.group
    H = Subgroup(G, sorted(first), check=False)
    act = [list(Sn.elements[first[h]].images) for h in H.elements]
    nset = GSet(H, range(n), act)
    return bool(equivariant_injections(nset, U.window(max(n, 1)), H)) if n else True


def check_families(r: CriterionResult):
    members = 0
    for G in corpus_groups():
        for U in corpus_universes(G):
            for n in range(4):
                P = family_product(U, n)
                subs = enumerate_subgroups(P, cap=None)
                member = {}
                for L in subs:
                    r.cases += 1
                    m = bool(family_membership(L, U))
                    member[L.elements] = m
                    if m != _oracle_member(P, L, U, n):
                        r.fail({"G": G.name, "U": U.name, "n": n, "L": list(L.elements), "member": m})
                masks = [(L, L.mask) for L in subs]
                for L, mL in masks:
                    if not member[L.elements]:
                        continue
                    members += 1
                    for S, mS in masks:
                        if mS & mL == mS and not member[S.elements]:
                            r.fail({"G": G.name, "U": U.name, "n": n, "L": list(L.elements),
                                    "S": list(S.elements), "reason": "not closed under subgroups"})
                    for x in P.full().generators:
                        if not member[L.conjugate(x).elements]:
                            r.fail({"G": G.name, "U": U.name, "n": n, "L": list(L.elements), "g": x,
                                    "reason": "not closed under conjugation"})
    r.detail["members"] = members


# ---------------------------------------------------------------------------
# 5. transfer admissibility

def check_transfer_admissible(r: CriterionResult):
    admissible = 0
    for G in corpus_groups():
        subs = enumerate_subgroups(G)
        for U in corpus_universes(G):
            for K in subs:
                oracle = oracle_achievable(K, U)
                for H in subs:
                    if not H.is_subgroup_of(K):
                        continue
                    r.cases += 1
                    a = bool(transfer_admissible(H, K, U))
                    admissible += a
                    if a != (H.elements in oracle):
                        r.fail({"G": G.name, "U": U.name, "H": _sub(H), "K": _sub(K), "admissible": a})
                    if U.name == "complete" and not a:
                        r.fail({"G": G.name, "U": U.name, "H": _sub(H), "K": _sub(K),
                                "reason": "complete universe must admit every transfer"})
                    if U.name == "trivial" and a != (H == K):
                        r.fail({"G": G.name, "U": U.name, "H": _sub(H), "K": _sub(K),
                                "reason": "trivial universe admits exactly H = K"})
    r.detail["admissible_pairs"] = admissible


# ---------------------------------------------------------------------------
# 6. ranks

def check_ranks(r: CriterionResult):
    ranks = {}
    empty = lambda G: trivial_gset(G, [])

    def rank(G, kind, M, T=2, H=None):
        U = make_universe(G, kind) if kind != "free" else make_universe(G, "explicit", classes=[G.trivial()])
        return len(tomdieck_basis(H or G.full(), M, U, T))

    C2, S3 = build_group("C2"), build_group("S3")
    expected = {
        "C2/complete/empty": (rank(C2, "complete", empty(C2)), 2),
        "C2/trivial/empty": (rank(C2, "trivial", empty(C2)), 1),
        "S3/complete/empty": (rank(S3, "complete", empty(S3)), 4),
        "S3/subgroup-classes": (len(conjugacy_classes_of_subgroups(S3)), 4),
    }
    for G in corpus_groups():
        expected[f"{G.name}/complete/empty=classes"] = (rank(G, "complete", empty(G)),
                                                       len(conjugacy_classes_of_subgroups(G)))
    for G in (C2, S3):
        for T in range(1, 6):
            expected[f"{G.name}/free/point/T={T}"] = (rank(G, "free", trivial_gset(G, [0]), T), T)
    for key, (got, want) in expected.items():
        r.cases += 1
        ranks[key] = got
        if got != want:
            r.fail({"case": key, "rank": got, "expected": want})
    r.detail["ranks"] = ranks


# ---------------------------------------------------------------------------
# 7. Mackey double coset formula against orbits

def check_mackey_oracle(r: CriterionResult):
    by_universe: dict[str, int] = {}
    for G in corpus_groups():
        subs = enumerate_subgroups(G)
        for U in corpus_universes(G):
            S = MackeyStructure(U)
            for K in subs:
                for H in subs:
                    if not H.is_subgroup_of(K) or not transfer_admissible(H, K, U):
                        continue
                    for J in subs:
                        if not J.is_subgroup_of(K):
                            continue
                        r.cases += 1
                        kind = U.name.split(":")[0]
                        by_universe[kind] = by_universe.get(kind, 0) + 1
                        try:
                            rep = burnside_oracle_check(U, K, H, J)
                            ok = rep.passed and S.double_coset_sum(J, K, S.one(H)) == rep.via_structure
                        except EqkError as e:
                            r.fail({"G": G.name, "U": U.name, "K": _sub(K), "H": _sub(H), "J": _sub(J),
                                    "error": e.to_dict()})
                            continue
                        if not ok:
                            r.fail({"G": G.name, "U": U.name, **rep.to_dict()})
    r.detail["chains_by_universe"] = dict(sorted(by_universe.items()))


# ---------------------------------------------------------------------------
# 8. monoid action

def sample_injections(U: UniverseSpec, count: int, seed: int = 0) -> list[UInjection]:
    """Deterministic mixture of identities, tails, shifts, window injections and composites."""
    rng = random.Random(seed)
    C = len(U.classes)
    out = [UInjection.identity(U), UInjection.tail(U, {c: 1 for c in range(C)}),
           shift(U, [(0, 0)]), shift(U, [(c, 1) for c in range(C)])]
    while len(out) < count:
        kind = rng.randrange(3)
        if kind == 0:
            copies = [(c, i) for c in range(C) for i in range(3) if rng.random() < 0.4]
            out.append(shift(U, copies))
        elif kind == 1:
            window, tails = [], []
            for c in range(C):
                w, k = rng.randrange(3), rng.randrange(3)
                targets = rng.sample(range(w + k), w)
                auts = automorphisms(U, c)
                window.append([(t, rng.choice(auts)) for t in targets])
                tails.append(k)
            out.append(UInjection(U, window, tails))
        else:
            out.append(compose_inj(rng.choice(out), rng.choice(out)))
    return out


MONOID_INSTANCES = (
    ("C2", "complete", "point"), ("C2", "complete", "regular"), ("C2", "free", "point"),
    ("C3", "complete", "point"), ("C2xC2", "complete", "point"), ("S3", "complete", "point"),
    ("S3", "trivial", "point"), ("C2", "complete", "empty"), ("S3", "complete", "empty"),
)


def _universe(G: Group, kind: str) -> UniverseSpec:
    if kind == "free":
        return make_universe(G, "explicit", classes=[G.trivial()])
    return make_universe(G, kind)


def _carrier(G: Group, kind: str) -> GSet:
    return {"point": lambda: trivial_gset(G, [0]), "regular": lambda: regular_gset(G),
            "empty": lambda: trivial_gset(G, [])}[kind]()


def check_monoid_action(r: CriterionResult):
    counts = {"laws": 0, "lemma_i": 0, "lemma_ii": 0, "commutation": 0, "monoid": 0}
    T = 2
    for seed, (gname, ukind, mkind) in enumerate(MONOID_INSTANCES):
        G = build_group(gname)
        U, M = _universe(G, ukind), _carrier(G, mkind)
        inj = sample_injections(U, 10, seed=seed)
        tag = {"G": gname, "U": ukind, "M": mkind}
        ident = UInjection.identity(U)
        # monoid laws, equivariance, shifts, conjugation homomorphism
        for f, g in itertools.product(inj[:6], repeat=2):
            counts["monoid"] += 1
            fg = compose_inj(f, g)
            ok = (compose_inj(fg, inj[1]) == compose_inj(f, compose_inj(g, inj[1]))
                  and compose_inj(f, ident) == f == compose_inj(ident, f)
                  and fg.is_equivariant_on(T + 2)
                  and conjugate(inj[2], fg) == compose_inj(conjugate(inj[2], f), conjugate(inj[2], g)))
            if not ok:
                r.fail({**tag, "kind": "monoid", "f": f.to_dict(), "g": g.to_dict()})
        for copies in ([(0, 0)], [(0, 1), (0, 2)]):
            counts["monoid"] += 1
            if not is_shift_by(shift(U, copies), U, copies):
                r.fail({**tag, "kind": "shift image", "copies": copies})
        modules = [InjectionModule(M, U)] + [TomDieckModule(H, M, U) for H in enumerate_subgroups(G)]
        for A in modules:
            basis = A.basis(T)
            for phi in inj:
                images = [A.act(phi, x) for x in basis]
                counts["lemma_ii"] += 1
                if len(set(images)) != len(images):
                    r.fail({**tag, "kind": "lemma ii", "module": A.name, "phi": phi.to_dict()})
                for x, img in zip(basis, images):
                    counts["laws"] += 1
                    if A.act(ident, x) != x or A.act(compose_inj(phi, inj[4]), x) != A.act(phi, A.act(inj[4], x)):
                        r.fail({**tag, "kind": "action law", "module": A.name, "phi": phi.to_dict()})
                    # lemma (i): psi agrees with phi on supp(x)
                    supp = sorted(A.support(x))
                    psi = compose_inj(phi, conjugate(shift(U, supp), inj[5]))
                    counts["lemma_i"] += 1
                    agree = all(psi((c, i, j)) == phi((c, i, j))
                                for c, i in supp for j in range(len(U.orbits[c].points)))
                    if not agree or A.act(psi, x) != img:
                        r.fail({**tag, "kind": "lemma i", "module": A.name, "phi": phi.to_dict()})
        # commutation with the structure maps
        S = MackeyStructure(U, M, window=T)
        subs = enumerate_subgroups(G)
        for H in subs:
            for b in tomdieck_basis(H, M, U, T):
                x = MackeyElement.basis(b)
                for phi in inj[:5]:
                    ax = S.act(phi, x)
                    for J in subs:
                        if J.is_subgroup_of(H):
                            counts["commutation"] += 1
                            if S.act(phi, S.res(J, x)) != S.res(J, ax):
                                r.fail({**tag, "kind": "res", "H": _sub(H), "J": _sub(J), "phi": phi.to_dict()})
                        if H.is_subgroup_of(J) and transfer_admissible(H, J, U):
                            counts["commutation"] += 1
                            if S.act(phi, S.tr(J, x)) != S.tr(J, ax):
                                r.fail({**tag, "kind": "tr", "H": _sub(H), "L": _sub(J), "phi": phi.to_dict()})
                    for g in G.full().generators:
                        counts["commutation"] += 1
                        if S.act(phi, S.conj(g, x)) != S.conj(g, ax):
                            r.fail({**tag, "kind": "conj", "H": _sub(H), "g": g, "phi": phi.to_dict()})
                    if MackeyElement.basis(monoid_act_basis(phi, b, M, U)) != ax:
                        r.fail({**tag, "kind": "basis action", "phi": phi.to_dict()})
        # semistability witnesses
        found = [find_semistability_witness(H, M, U, T + 1) is not None for H in subs]
        counts.setdefault("semistability", 0)
        counts["semistability"] += 1
        if M.points and not found[-1]:
            r.fail({**tag, "kind": "no non-semistability witness for nonempty M"})
        if not M.points and any(found):
            r.fail({**tag, "kind": "witness found for empty M"})
    r.cases = sum(counts.values())
    r.detail.update(counts)


# ---------------------------------------------------------------------------
# 9. triviality criteria

def module_corpus() -> list:
    """Fifty generated tame modules over small groups and universes."""
    mods = []
    for gname in ("C2", "C3", "C2xC2", "S3"):
        G = build_group(gname)
        for ukind in ("complete", "trivial", "free"):
            U = _universe(G, ukind)
            pt, empty = trivial_gset(G, [0]), trivial_gset(G, [])
            mods += [InjectionModule(pt, U), EmbeddingTypeModule(pt, U),
                     TomDieckModule(G.full(), empty, U), TomDieckModule(G.full(), pt, U)]
    G = build_group("C2")
    U = _universe(G, "complete")
    pt = trivial_gset(G, [0])
    mods.append(InjectionModule(regular_gset(G), U))
    mods.append(SumModule([InjectionModule(pt, U), EmbeddingTypeModule(pt, U)]))
    return mods[:50]


def check_triviality(r: CriterionResult):
    verdicts: dict[str, int] = {}
    finite = 0
    for A in module_corpus():
        r.cases += 1
        v, _ = criterion_v(A)
        iii, _ = criterion_iii(A)
        verdict = triviality_check(A)
        verdicts[verdict.kind] = verdicts.get(verdict.kind, 0) + 1
        if v != iii or "Unknown" in (v, iii):
            r.fail({"module": A.name, "universe": A.universe.name, "v": v, "iii": iii})
        if A.finite:
            finite += 1
            if verdict.kind != "Trivial":
                r.fail({"module": A.name, "universe": A.universe.name, "verdict": verdict.to_dict(),
                        "reason": "finite closed basis must be trivial"})
    r.detail.update(verdicts=dict(sorted(verdicts.items())), finite_closed=finite)
    if r.cases != 50:
        r.fail({"reason": f"module corpus has {r.cases} modules"})


# ---------------------------------------------------------------------------
# 10. norms

def _alt_reps(G: Group, H: Subgroup) -> list[int]:
    tab = G.tab
    reps = H.left_coset_reps(G)
    return [max(tab[g][h] for h in H.elements) for g in reps]


def _small_based(H: Subgroup, max_points: int = 3) -> list[GSet]:
    return [based(X) for X in gsets_up_to(H, max_points - 1)]


def check_norms(r: CriterionResult):
    counts = {"formula": 0, "rep_independence": 0, "double_coset": 0, "smash": 0, "norm": 0, "geocounter": 0}
    for G in corpus_groups():
        subs = enumerate_subgroups(G)
        for H in subs:
            emb = NormEmbedding(G, H)
            counts["formula"] += 1
            if not (emb.check_formula() and emb.check_homomorphism() and emb.check_injective()):
                r.fail({"G": G.name, "H": _sub(H), "kind": "embedding formula"})
            if emb.n > 3:
                continue
            alt = NormEmbedding(G, H, _alt_reps(G, H))
            for X in _small_based(H):
                counts["rep_independence"] += 1
                if iso_test(norm(emb, X), norm(alt, X)) is None:
                    r.fail({"G": G.name, "H": _sub(H), "X": X.to_dict(), "kind": "representatives"})
                for K in subs:
                    counts["double_coset"] += 1
                    if not norm_double_coset(K, emb, X).verify():
                        r.fail({"G": G.name, "H": _sub(H), "K": _sub(K), "X": X.to_dict(), "kind": "double coset"})
            # distributive law for norms of wedges
            carriers = _small_based(H)
            for k in range(1, 4):
                for Xs in itertools.combinations_with_replacement(range(len(carriers)), k):
                    if len(Xs) > 1 and any(len(carriers[i].points) > 2 for i in Xs) and emb.n == 3:
                        continue
                    counts["norm"] += 1
                    d = distribute_norm(emb, [carriers[i] for i in Xs])
                    want = function_orbit_count(emb, k)
                    if len(d.descriptors) != want or not d.verify():
                        r.fail({"G": G.name, "H": _sub(H), "k": k, "count": len(d.descriptors),
                                "expected": want, "kind": "norm distributive"})
    # smash powers over G x Sigma_n
    for gname in ("C1", "C2", "C3"):
        G = build_group(gname)
        carriers = _small_based(G.full())
        for n in range(1, 4):
            for k in range(1, 4):
                for Xs in itertools.combinations_with_replacement(range(len(carriers)), k):
                    if n == 3 and k == 3 and any(len(carriers[i].points) > 2 for i in Xs):
                        continue
                    counts["smash"] += 1
                    d = distribute_smash_power([carriers[i] for i in Xs], n)
                    if len(d.descriptors) != multiset_count(n, k) or not d.verify():
                        r.fail({"G": gname, "n": n, "k": k, "count": len(d.descriptors),
                                "expected": multiset_count(n, k), "kind": "smash distributive"})
    fixed = {}
    for gname in ("C2", "C3", "S3"):
        G = build_group(gname)
        R = regular_gset(G)
        for n in range(1, 4):
            counts["geocounter"] += 1
            got = len(injection_fixed_points(R, multiple(R, n), G.full()))
            fixed[f"{gname}/n={n}"] = got
            if got != n * G.order:
                r.fail({"G": gname, "n": n, "count": got, "expected": n * G.order, "kind": "Inj fixed points"})
    r.cases = sum(counts.values())
    r.detail.update(counts, injection_fixed_points=fixed)


# ---------------------------------------------------------------------------
# driver

CRITERIA: dict[int, tuple[str, float | None, Callable[[CriterionResult], None]]] = {
    1: ("double-coset-partition", 5, check_double_coset_partition),
    2: ("induction-decomposition", 30, check_induction_decomposition),
    3: ("free-quotient-fixed-points", 60, check_free_quotients),
    4: ("family-axioms", 60, check_families),
    5: ("transfer-admissibility-oracle", 120, check_transfer_admissible),
    6: ("tom-dieck-ranks", 10, check_ranks),
    7: ("mackey-double-coset-oracle", 120, check_mackey_oracle),
    8: ("monoid-action", 60, check_monoid_action),
    9: ("triviality-coherence", 60, check_triviality),
    10: ("norm-suite", 120, check_norms),
}
DETERMINISM = 11
NAMES = {**{n: v[0] for n, v in CRITERIA.items()}, DETERMINISM: "determinism"}


def run_criterion(number: int) -> CriterionResult:
    name, limit, fn = CRITERIA[number]
    r = CriterionResult(number, name, limit)
    t0 = time.perf_counter()
    try:
        fn(r)
    except EqkError as e:
        r.error = f"{e.kind}: {e}"
    r.elapsed = time.perf_counter() - t0
    return r


def parse_selection(text: str) -> list[int]:
    """``all``, numbers, ranges ``a-b`` and criterion names, comma separated."""
    if text.strip() == "all":
        return sorted(NAMES)
    by_name = {v: k for k, v in NAMES.items()}
    out: set[int] = set()
    for part in text.split(","):
        p = part.strip()
        if not p:
            continue
        if p in by_name:
            out.add(by_name[p])
        elif "-" in p and all(x.strip().isdigit() for x in p.split("-", 1)):
            a, b = (int(x) for x in p.split("-", 1))
            out.update(range(a, b + 1))
        elif p.isdigit():
            out.add(int(p))
        else:
            raise ValueError(f"unknown criterion {p!r}")
    if not out or any(n not in NAMES for n in out):
        raise ValueError(f"criteria are numbered 1..{DETERMINISM}")
    return sorted(out)


def run(numbers: list[int], jobs: int = 1) -> list[CriterionResult]:
    """Run the selected criteria; results come back in criterion order whatever ``jobs`` is."""
    base = [n for n in numbers if n != DETERMINISM]
    if jobs > 1 and len(base) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(run_criterion, base))
    else:
        results = [run_criterion(n) for n in base]
    if DETERMINISM in numbers:
        results.append(check_determinism(results, jobs))
    return results


def check_determinism(first: list[CriterionResult], jobs: int) -> CriterionResult:
    """Rerun criteria 1-10 in a fresh interpreter with a different job count and
    compare the reports byte for byte."""
    r = CriterionResult(DETERMINISM, NAMES[DETERMINISM], None)
    numbers = sorted(CRITERIA)
    have = {x.number: x for x in first}
    mine = [have[n] if n in have else run_criterion(n) for n in numbers]
    other_jobs = 1 if jobs > 1 else 2
    env = dict(os.environ, PYTHONHASHSEED="12345")
    proc = subprocess.run([sys.executable, "-m", "eqk", "check", "1-10", "--format", "json",
                           "--jobs", str(other_jobs)], capture_output=True, text=True, env=env)
    expected = render_json(mine, {"criteria": "1-10"})
    r.cases = 1
    r.detail["reruns"] = 1
    if proc.stdout != expected:
        r.fail({"reason": "rerun report differs", "exit_code": proc.returncode,
                "stderr": proc.stderr[-2000:]})
    return r


def render_text(results: list[CriterionResult]) -> str:
    lines = []
    for x in results:
        status = "PASS" if x.passed else "FAIL"
        limit = f" limit={x.limit:g}s" if x.limit is not None else ""
        lines.append(f"{status} {x.number:>2} {x.name} cases={x.cases}{limit}")
        if x.error:
            lines.append(f"     error: {x.error}")
        if x.over_time:
            lines.append("     time limit exceeded")
        for w in x.failures:
            lines.append("     counterexample: " + json.dumps(w, sort_keys=True))
    ok = all(x.passed for x in results)
    lines.append(f"{sum(x.passed for x in results)}/{len(results)} criteria passed" + ("" if ok else " (FAILED)"))
    return "\n".join(lines) + "\n"


def report_dict(results: list[CriterionResult], inputs: dict) -> dict:
    return {"command": "check", "inputs": inputs,
            "result": {"passed": all(x.passed for x in results), "criteria": [x.to_dict() for x in results]},
            "witness": {str(x.number): x.failures for x in results if x.failures}}


def render_json(results: list[CriterionResult], inputs: dict) -> str:
    return json.dumps(report_dict(results, inputs), sort_keys=True, indent=2) + "\n"
