"""The multiplicative norm and its distributive laws on based G-sets.

For ``H <= G`` with coset representatives ``g_1, ..., g_n`` the embedding
``G -> Sigma_n wr H`` sends ``g`` to ``(sigma; h_1, ..., h_n)`` where
``g g_i = g_{sigma(i)} h_i``. The wreath product acts on ``X^n`` by
``y_{sigma(i)} = h_i x_i``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import SubgroupMismatch
from .gset import BASE, GMap, GSet, induce, smash_many, wedge
from .perm import Group, GroupLike, Subgroup, as_subgroup, double_cosets, symmetric_group

Wreath = tuple[tuple[int, ...], tuple[int, ...]]   # (sigma images, (h_1..h_n))


def wreath_mul(H: Subgroup, a: Wreath, b: Wreath) -> Wreath:
    """``(s; h)(s'; h') = (s s'; h_{s'(i)} h'_i)``."""
    tab = H.parent.tab
    s, h = a
    t, k = b
    return (tuple(s[t[i]] for i in range(len(t))), tuple(tab[h[t[i]]][k[i]] for i in range(len(t))))


class NormEmbedding:
    def __init__(self, group: GroupLike, H: Subgroup, reps: Sequence[int] | None = None):
        G = as_subgroup(group)
        if not H.is_subgroup_of(G):
            raise SubgroupMismatch(f"{H.label} is not a subgroup of {G.label}")
        self.G, self.H = G, H
        tab, inv = G.parent.tab, G.parent.inv
        reps = list(reps) if reps is not None else H.left_coset_reps(G)
        cosets = [frozenset(tab[r][h] for h in H.elements) for r in reps]
        if len(set(cosets)) != len(reps) or len(reps) * H.order != G.order:
            raise SubgroupMismatch("representatives do not form a transversal")
        self.reps = reps
        self.n = len(reps)
        coset_of = {}
        for i, c in enumerate(cosets):
            for x in c:
                coset_of[x] = i
        self._coset_of = coset_of
        self.phi: dict[int, Wreath] = {}
        for g in G.elements:
            sigma, hs = [], []
            for gi in reps:
                j = coset_of[tab[g][gi]]
                sigma.append(j)
                hs.append(tab[inv[reps[j]]][tab[g][gi]])
            self.phi[g] = (tuple(sigma), tuple(hs))

    def coset_index(self, g: int) -> int:
        return self._coset_of[g]

    def check_formula(self) -> bool:
        """``g g_i == g_{sigma(g)(i)} h_i(g)`` for every ``g`` and ``i``."""
        tab = self.G.parent.tab
        for g, (sigma, hs) in self.phi.items():
            for i, gi in enumerate(self.reps):
                if hs[i] not in self.H or tab[g][gi] != tab[self.reps[sigma[i]]][hs[i]]:
                    return False
        return True

    def check_homomorphism(self) -> bool:
        tab = self.G.parent.tab
        return all(self.phi[tab[a][b]] == wreath_mul(self.H, self.phi[a], self.phi[b])
                   for a in self.G.elements for b in self.G.elements)

    def check_injective(self) -> bool:
        return len(set(self.phi.values())) == self.G.order

    def to_dict(self) -> dict:
        return {"reps": self.reps,
                "phi": [[g, list(s), list(h)] for g, (s, h) in sorted(self.phi.items())]}


def _wreath_act(X: GSet, w: Wreath, xs: tuple[int, ...]) -> tuple[int, ...]:
    sigma, hs = w
    y = [0] * len(xs)
    for i, x in enumerate(xs):
        y[sigma[i]] = X.move(hs[i], x)
    return tuple(y)


def norm(emb: NormEmbedding, X: GSet) -> GSet:
    """``N_H^G X``: the smash power ``X^n`` restricted along the embedding.
    Points are tuples of labels of non-base points."""
    if X.group != emb.H or not X.based:
        raise SubgroupMismatch("the norm takes a based H-set")
    combos = list(itertools.product(range(1, len(X.points)), repeat=emb.n))
    idx = {c: i + 1 for i, c in enumerate(combos)}
    act = [[0] + [idx[_wreath_act(X, emb.phi[g], c)] for c in combos] for g in emb.G.elements]
    points = [BASE] + [tuple(X.points[x] for x in c) for c in combos]
    return GSet(emb.G, points, act, based=True)


# ---------------------------------------------------------------------------
# double coset formula

@dataclass
class NormDoubleCoset:
    reps: list[int]
    factors: list[GSet]
    lhs: GSet
    rhs: GSet
    bijection: GMap

    def verify(self) -> bool:
        return self.bijection.is_iso()

    def to_dict(self) -> dict:
        return {"double_coset_reps": self.reps, "factor_sizes": [len(F.points) for F in self.factors],
                "bijection": self.bijection.to_dict(), "verified": self.verify()}


def norm_double_coset(K: Subgroup, emb: NormEmbedding, X: GSet) -> NormDoubleCoset:
    """``res_K N_H^G X = smash over K\\G/H of N^K_{K n gHg^-1} c_g^* X``.

    Component ``j`` of factor ``g`` is ``h^-1 x_i`` where ``k_j g = g_i h``."""
    G, H = emb.G, emb.H
    if not K.is_subgroup_of(G):
        raise SubgroupMismatch(f"{K.label} is not a subgroup of {G.label}")
    lhs = norm(emb, X).restrict(K)
    tab, inv = G.parent.tab, G.parent.inv
    reps = [d.rep for d in double_cosets(G, K, H)]
    factors, plans = [], []
    for g in reps:
        L = K.intersection(H.conjugate(g))
        Y = X.conjugate_pullback(g, L)
        sub = NormEmbedding(K, L)
        factors.append(norm(sub, Y))
        plan = []
        for kj in sub.reps:
            x = tab[kj][g]
            i = emb.coset_index(x)
            h = tab[inv[emb.reps[i]]][x]
            plan.append((i, inv[h]))
        plans.append(plan)
    rhs = smash_many(factors, K)
    mapping = [0] * len(lhs.points)
    for p in range(1, len(lhs.points)):
        xs = lhs.points[p]
        label = tuple(tuple(X.move_label(hinv, xs[i]) for i, hinv in plan) for plan in plans)
        mapping[p] = rhs.index[label]
    return NormDoubleCoset(reps, factors, lhs, rhs, GMap(lhs, rhs, mapping))


# ---------------------------------------------------------------------------
# distributive laws

def monotone_functions(n: int, k: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations_with_replacement(range(k), n))


def multiset_count(n: int, k: int) -> int:
    return math.comb(n + k - 1, n)


@dataclass
class Distribution:
    descriptors: list[dict]
    lhs: GSet
    rhs: GSet
    bijection: GMap

    def verify(self) -> bool:
        return self.bijection.is_iso()

    def to_dict(self) -> dict:
        return {"descriptors": self.descriptors, "count": len(self.descriptors),
                "bijection_size": len(self.bijection.mapping), "verified": self.verify()}


def _power_action(Xs: Sequence[GSet], P: Group, n: int):
    """Action of ``(g, s)`` in ``G x Sigma_n`` on n-tuples of wedge points."""
    Sn = symmetric_group(n)

    def move(x_el: int, pts: tuple) -> tuple:
        g, s = P.split(x_el)
        sigma = Sn.elements[s].images
        y = [None] * n
        for i, (summand, lab) in enumerate(pts):
            y[sigma[i]] = (summand, Xs[summand].move_label(g, lab))
        return tuple(y)

    return move


def distribute_smash_power(Xs: Sequence[GSet], n: int) -> Distribution:
    """``(X_1 v ... v X_k)^n`` over ``G x Sigma_n`` against the wedge over
    monotone ``f: n -> I`` of ``(G x Sigma_n) x_{G x Sigma_f} (X_f(1) ^ ... ^ X_f(n))``."""
    from .sigma import sigma_product

    G = Xs[0].group.parent
    if any(X.group != G.full() or not X.based for X in Xs):
        raise SubgroupMismatch("summands must be based sets over one group")
    P = sigma_product(G, n)
    Sn = symmetric_group(n)
    W = wedge(Xs)
    move = _power_action(Xs, P, n)
    tuples = list(itertools.product(W.points[1:], repeat=n))
    tidx = {t: i + 1 for i, t in enumerate(tuples)}
    lhs = GSet(P, [BASE] + tuples,
               [[0] + [tidx[move(x, t)] for t in tuples] for x in range(P.order)], based=True)
    descriptors, summands = [], []
    for f in monotone_functions(n, len(Xs)):
        young = [s for s in range(Sn.order) if all(f[Sn.elements[s].images[i]] == f[i] for i in range(n))]
        S = Subgroup(P, [P.pair(g, s) for g in range(G.order) for s in young], check=False)
        inner_pts = [tuple((f[i], lab) for i, lab in enumerate(c))
                     for c in itertools.product(*[Xs[f[i]].points[1:] for i in range(n)])]
        ipos = {t: i + 1 for i, t in enumerate(inner_pts)}
        inner_act = [[0] + [ipos[move(e, t)] for t in inner_pts] for e in S.elements]
        inner = GSet(S, [BASE] + inner_pts, inner_act, based=True)
        summands.append(induce(P, inner))
        descriptors.append({"f": list(f), "young_order": len(young)})
    rhs = wedge(summands, P)
    mapping = [0] * len(rhs.points)
    for p in range(1, len(rhs.points)):
        _, (r, t) = rhs.points[p]
        mapping[p] = lhs.index[move(r, t)]
    return Distribution(descriptors, lhs, rhs, GMap(rhs, lhs, mapping))


def function_orbit_count(emb: NormEmbedding, k: int) -> int:
    """Cauchy-Frobenius count of G-orbits of functions ``G/H -> k``."""
    total = 0
    for g, (sigma, _) in emb.phi.items():
        seen, cycles = set(), 0
        for i in range(emb.n):
            if i not in seen:
                cycles += 1
                j = i
                while j not in seen:
                    seen.add(j)
                    j = sigma[j]
        total += k ** cycles
    return total // emb.G.order


def distribute_norm(emb: NormEmbedding, Xs: Sequence[GSet]) -> Distribution:
    """``N_H^G(X_1 v ... v X_k)`` against the wedge over G-orbits ``[f]`` of
    functions ``f: G/H -> I`` of ``G x_{K_f}`` (smash over the ``K_f``-orbits of
    ``G/H`` of the norms ``N^{K_f}_{K_f n g_i H g_i^-1} c_{g_i}^* X_{f(i)}``)."""
    G, H = emb.G, emb.H
    tab, inv = G.parent.tab, G.parent.inv
    W = wedge(Xs, H)
    lhs = norm(emb, W)
    n, k = emb.n, len(Xs)

    def act_f(g, f):
        sigma = emb.phi[g][0]
        out = [0] * n
        for i in range(n):
            out[sigma[i]] = f[i]
        return tuple(out)

    seen: set = set()
    descriptors, summands, plans = [], [], []
    for f in itertools.product(range(k), repeat=n):
        if f in seen:
            continue
        orbit = {act_f(g, f) for g in G.elements}
        seen |= orbit
        Kf = Subgroup(G.parent, [g for g in G.elements if act_f(g, f) == f], check=False)
        # Kf-orbits on G/H, each with a representative coset
        orb_reps, done = [], set()
        for i in range(n):
            if i in done:
                continue
            done |= {emb.phi[x][0][i] for x in Kf.elements}
            orb_reps.append(i)
        factors, plan = [], []
        for i in orb_reps:
            gi = emb.reps[i]
            L = Kf.intersection(H.conjugate(gi))
            sub = NormEmbedding(Kf, L)
            factors.append(norm(sub, Xs[f[i]].conjugate_pullback(gi, L)))
            # component j of this factor sits at coset of k_j g_i = g_c h
            comp = []
            for kj in sub.reps:
                x = tab[kj][gi]
                c = emb.coset_index(x)
                comp.append((c, tab[inv[emb.reps[c]]][x]))
            plan.append((f[i], comp))
        inner = smash_many(factors, Kf)
        summands.append(induce(G, inner))
        plans.append(plan)
        descriptors.append({"f": list(f), "orbit_size": len(orbit), "stabilizer": list(Kf.elements),
                            "factors": [[emb.reps[i], list(Kf.intersection(H.conjugate(emb.reps[i])).elements)]
                                        for i in orb_reps]})
    rhs = wedge(summands, G)
    mapping = [0] * len(rhs.points)
    for p in range(1, len(rhs.points)):
        s, (r, comps) = rhs.points[p]
        xs = [None] * n
        for (summand, comp), ys in zip(plans[s], comps):
            for (c, h), y in zip(comp, ys):
                xs[c] = (summand, Xs[summand].move_label(h, y))
        base_idx = tuple(W.index[x] for x in xs)
        moved = _wreath_act(W, emb.phi[r], base_idx)
        mapping[p] = lhs.index[tuple(W.points[x] for x in moved)]
    return Distribution(descriptors, lhs, rhs, GMap(rhs, lhs, mapping))


def distributive_decompose(kind: str, summands: Sequence[GSet], n: int | None = None,
                           embedding: NormEmbedding | None = None) -> Distribution:
    if kind == "smash_power":
        return distribute_smash_power(summands, n or 1)
    if kind == "norm":
        return distribute_norm(embedding, summands)
    raise ValueError(f"unknown distributive law {kind!r}")
