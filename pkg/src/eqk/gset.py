"""Finite G-sets and based G-sets.

A :class:`GSet` stores its carrier as a tuple of hashable labels and its action
as a table ``act[k][p]`` where ``k`` is the position of a group element in
``group.elements``. Based sets always carry the sentinel :data:`BASE` as their
first point.
"""
from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from . import kernels
from .errors import FreenessViolated, NotNormal, ParseError, SubgroupMismatch
from .perm import (
    Group,
    GroupLike,
    Homomorphism,
    Subgroup,
    as_subgroup,
    conjugacy_class_rep,
    conjugacy_classes_of_subgroups,
    double_cosets,
    enumerate_homomorphisms,
    enumerate_subgroups,
    quotient_group,
)

BASE = "*"


class GSet:
    """A finite set with an action of ``group`` (a subgroup of some ambient group)."""

    def __init__(self, group: GroupLike, points: Sequence[Hashable], act: Sequence[Sequence[int]],
                 based: bool = False):
        self.group = as_subgroup(group)
        self.points = tuple(points)
        self.index = {p: i for i, p in enumerate(self.points)}
        if len(self.index) != len(self.points):
            raise ValueError("duplicate point labels")
        self.act = [list(row) for row in act]
        self.based = based
        if based and (not self.points or self.points[0] != BASE):
            raise ValueError("based G-sets carry the basepoint first")

    # construction helpers
    @classmethod
    def build(cls, group: GroupLike, points: Sequence[Hashable],
              func: Callable[[int, Hashable], Hashable], based: bool = False) -> "GSet":
        group = as_subgroup(group)
        points = tuple(points)
        index = {p: i for i, p in enumerate(points)}
        act = [[index[func(g, p)] for p in points] for g in group.elements]
        return cls(group, points, act, based=based)

    @classmethod
    def from_generators(cls, group: GroupLike, n_points: int, gen_actions: dict[int, Sequence[int]]) -> "GSet":
        """Extend an action given on generators (parent indices) to the group."""
        group = as_subgroup(group)
        gens = sorted(gen_actions)
        arr = np.array([list(gen_actions[g]) for g in gens], dtype=np.int32).reshape(len(gens), n_points)
        table, ok = kernels.extend_action(group.parent.table, np.array(gens, dtype=np.int32), arr)
        if not ok or any(table[g, 0] < 0 for g in group.elements if n_points):
            raise ParseError("generator data does not define a group action")
        act = [table[g].tolist() for g in group.elements]
        X = cls(group, range(n_points), act)
        if not X.check_action():
            raise ParseError("generator data does not define a group action")
        return X

    @property
    def size(self) -> int:
        return len(self.points)

    def __len__(self):
        return len(self.points)

    def __repr__(self):
        kind = "BasedGSet" if self.based else "GSet"
        return f"<{kind} over {self.group.label} with {len(self.points)} points>"

    def pos(self, g: int) -> int:
        return self.group.position[g]

    def move(self, g: int, p: int) -> int:
        """Action of the parent element ``g`` on the point index ``p``."""
        return self.act[self.group.position[g]][p]

    def move_label(self, g: int, label: Hashable) -> Hashable:
        return self.points[self.move(g, self.index[label])]

    @property
    def basepoint(self) -> int | None:
        return 0 if self.based else None

    def nonbase(self) -> range:
        return range(1 if self.based else 0, len(self.points))

    def check_action(self) -> bool:
        """Identity and compatibility laws, exhaustively."""
        G = self.group
        tab = G.parent.tab
        n = len(self.points)
        if n == 0:
            return True
        if self.act[G.position[0]] != list(range(n)):
            return False
        for row in self.act:
            if sorted(row) != list(range(n)):
                return False
        for a in G.elements:
            ra = self.act[G.position[a]]
            for b in G.elements:
                rb = self.act[G.position[b]]
                rab = self.act[G.position[tab[a][b]]]
                if any(rab[p] != ra[rb[p]] for p in range(n)):
                    return False
        if self.based and any(row[0] != 0 for row in self.act):
            return False
        return True

    def stabilizer(self, p: int) -> Subgroup:
        G = self.group
        return Subgroup(G.parent, (g for k, g in enumerate(G.elements) if self.act[k][p] == p), check=False)

    def fixed_points(self, H: Subgroup) -> list[int]:
        if not H.is_subgroup_of(self.group):
            raise SubgroupMismatch("fixed points of a subgroup not in the acting group")
        rows = [self.act[self.group.position[h]] for h in H.generators]
        return [p for p in range(len(self.points)) if all(r[p] == p for r in rows)]

    def restrict(self, H: Subgroup) -> "GSet":
        if not H.is_subgroup_of(self.group):
            raise SubgroupMismatch(f"{H.label} is not a subgroup of {self.group.label}")
        act = [self.act[self.group.position[h]] for h in H.elements]
        return GSet(H, self.points, act, based=self.based)

    def relabel(self, labels: Sequence[Hashable]) -> "GSet":
        return GSet(self.group, labels, self.act, based=self.based)

    def pullback(self, f: Homomorphism) -> "GSet":
        """The source of ``f`` acting through ``f``."""
        if f.target.parent is not self.group.parent or not f.image().is_subgroup_of(self.group):
            raise SubgroupMismatch("pullback along a map that does not land in the acting group")
        act = [self.act[self.group.position[v]] for v in f.images]
        return GSet(f.source, self.points, act, based=self.based)

    def conjugate_pullback(self, g: int, L: Subgroup) -> "GSet":
        """``c_g^*``: ``L`` (inside ``g H g^-1``) acting by ``l . x = (g^-1 l g) x``."""
        par = self.group.parent
        act = []
        for l in L.elements:
            h = par.conj(par.inv[g], l)
            if h not in self.group:
                raise SubgroupMismatch("conjugate pullback outside the acting group")
            act.append(self.act[self.group.position[h]])
        return GSet(L, self.points, act, based=self.based)

    def action_array(self) -> np.ndarray:
        return np.array(self.act, dtype=np.int32).reshape(self.group.order, len(self.points))

    def to_dict(self) -> dict:
        return {"group_order": self.group.order, "based": self.based,
                "points": [_label_json(p) for p in self.points],
                "generators": {str(g): self.act[self.group.position[g]] for g in self.group.generators}}


class BasedGSet(GSet):
    """A G-set whose first point is the fixed basepoint :data:`BASE`."""

    def __init__(self, group, points, act, based: bool = True):
        super().__init__(group, points, act, based=True)


def _label_json(p):
    if isinstance(p, tuple):
        return [_label_json(x) for x in p]
    if isinstance(p, frozenset):
        return sorted(_label_json(x) for x in p)
    return p


def based(X: GSet) -> GSet:
    """``X_+``: add a disjoint basepoint."""
    if X.based:
        return X
    points = (BASE,) + X.points
    act = [[0] + [p + 1 for p in row] for row in X.act]
    return GSet(X.group, points, act, based=True)


def trivial_gset(group: GroupLike, points: Sequence[Hashable], based_: bool = False) -> GSet:
    group = as_subgroup(group)
    points = tuple(points)
    if based_:
        points = (BASE,) + tuple(p for p in points if p != BASE)
    act = [list(range(len(points))) for _ in group.elements]
    return GSet(group, points, act, based=based_)


def orbit_gset(group: GroupLike, H: Subgroup) -> GSet:
    """``G/H`` with points labelled by minimal left coset representatives."""
    G = as_subgroup(group)
    if not H.is_subgroup_of(G):
        raise SubgroupMismatch(f"{H.label} is not a subgroup of {G.label}")
    reps = H.left_coset_reps(G)
    tab = G.parent.tab
    coset_of = {}
    for c, r in enumerate(reps):
        for h in H.elements:
            coset_of[tab[r][h]] = c
    act = [[coset_of[tab[g][r]] for r in reps] for g in G.elements]
    return GSet(G, reps, act)


def regular_gset(group: GroupLike) -> GSet:
    G = as_subgroup(group)
    return orbit_gset(G, G.parent.trivial())


@dataclass
class GMap:
    source: GSet
    target: GSet
    mapping: list[int]

    def __call__(self, p: int) -> int:
        return self.mapping[p]

    def is_equivariant(self) -> bool:
        if self.source.group != self.target.group:
            return False
        for k in range(self.source.group.order):
            rs, rt = self.source.act[k], self.target.act[k]
            if any(self.mapping[rs[p]] != rt[self.mapping[p]] for p in range(len(self.mapping))):
                return False
        if self.source.based and self.target.based and self.mapping and self.mapping[0] != 0:
            return False
        return True

    def is_bijective(self) -> bool:
        return sorted(self.mapping) == list(range(len(self.target.points)))

    def is_iso(self) -> bool:
        return len(self.mapping) == len(self.source.points) and self.is_bijective() and self.is_equivariant()

    def compose(self, other: "GMap") -> "GMap":
        """``self o other``."""
        return GMap(other.source, self.target, [self.mapping[x] for x in other.mapping])

    def inverse(self) -> "GMap":
        inv = [0] * len(self.mapping)
        for i, j in enumerate(self.mapping):
            inv[j] = i
        return GMap(self.target, self.source, inv)

    def to_dict(self) -> dict:
        return {"pairs": [[_label_json(self.source.points[i]), _label_json(self.target.points[j])]
                          for i, j in enumerate(self.mapping)]}


def identity_map(X: GSet) -> GMap:
    return GMap(X, X, list(range(len(X.points))))


# ---------------------------------------------------------------------------
# orbits

@dataclass(frozen=True)
class Orbit:
    points: tuple[int, ...]
    stabilizer: Subgroup

    @property
    def rep(self) -> int:
        return self.points[0]


def orbits_and_stabilizers(X: GSet, *, skip_base: bool = False) -> list[Orbit]:
    """Orbits ordered by minimal point, with the stabilizer of that point."""
    if not X.points:
        return []
    labels = kernels.orbit_labels(X.action_array())
    buckets: dict[int, list[int]] = {}
    for p, lab in enumerate(labels.tolist()):
        buckets.setdefault(lab, []).append(p)
    out = []
    for rep in sorted(buckets):
        if skip_base and X.based and rep == 0:
            continue
        out.append(Orbit(tuple(buckets[rep]), X.stabilizer(rep)))
    return out


def orbit_count_burnside(X: GSet) -> int:
    """Cauchy-Frobenius: average number of fixed points."""
    total = sum(sum(1 for p, q in enumerate(row) if p == q) for row in X.act)
    assert total % X.group.order == 0
    return total // X.group.order


def orbit_type_multiset(X: GSet) -> list[tuple[tuple[int, ...], int]]:
    """Sorted (canonical stabilizer class, multiplicity) pairs, basepoint excluded."""
    counts: dict[tuple[int, ...], int] = {}
    for orb in orbits_and_stabilizers(X, skip_base=True):
        key = conjugacy_class_rep(orb.stabilizer, X.group).elements
        counts[key] = counts.get(key, 0) + 1
    return sorted(counts.items(), key=lambda kv: (len(kv[0]), kv[0]))


def _spread(X: GSet, x: int, Y: GSet, y: int, mapping: list[int]):
    """Extend ``x -> y`` equivariantly over the orbit of ``x``."""
    G = X.group
    for k in range(G.order):
        mapping[X.act[k][x]] = Y.act[k][y]


def iso_test(X: GSet, Y: GSet) -> GMap | None:
    """Equivariant (based) bijection ``X -> Y`` or ``None``."""
    if X.group != Y.group or X.based != Y.based or len(X.points) != len(Y.points):
        return None
    if orbit_type_multiset(X) != orbit_type_multiset(Y):
        return None
    G = X.group
    par = G.parent
    mapping = [-1] * len(X.points)
    if X.based:
        mapping[0] = 0
    y_orbits = orbits_and_stabilizers(Y, skip_base=True)
    used = [False] * len(y_orbits)
    for orb in orbits_and_stabilizers(X, skip_base=True):
        Sx = orb.stabilizer
        for j, yo in enumerate(y_orbits):
            if used[j] or yo.stabilizer.order != Sx.order:
                continue
            # find g with g Stab(y) g^-1 = Stab(x); then x -> g.y
            for g in G.elements:
                if yo.stabilizer.conjugate(g) == Sx:
                    used[j] = True
                    _spread(X, orb.rep, Y, Y.move(g, yo.rep), mapping)
                    break
            if used[j]:
                break
        else:
            return None
    f = GMap(X, Y, mapping)
    if not f.is_iso():  # pragma: no cover - guarded by the multiset test
        return None
    return f


def count_equivariant_maps(X: GSet, Y: GSet) -> int:
    """``|Map_G(X, Y)|`` (based maps when both are based)."""
    if X.group != Y.group:
        raise SubgroupMismatch("maps between sets over different groups")
    total = 1
    for orb in orbits_and_stabilizers(X, skip_base=X.based and Y.based):
        S = orb.stabilizer
        total *= len(Y.fixed_points(S))
    return total


def gsets_up_to(group: GroupLike, max_points: int, *, nonempty: bool = True) -> list[GSet]:
    """One representative per isomorphism class of ``G``-sets with at most
    ``max_points`` points, labelled ``0..n-1`` and ordered by orbit multiset."""
    G = as_subgroup(group)
    types = [(G.order // c[0].order, c[0]) for c in conjugacy_classes_of_subgroups(G, cap=None)
             if G.order // c[0].order <= max_points]
    combos: list[list[Subgroup]] = []

    def rec(i: int, left: int, chosen: list[Subgroup]):
        if i == len(types):
            if chosen or not nonempty:
                combos.append(list(chosen))
            return
        size, S = types[i]
        k = 0
        while k * size <= left:
            rec(i + 1, left - k * size, chosen + [S] * k)
            k += 1

    rec(0, max_points, [])
    out = []
    for combo in combos:
        X = disjoint_union([orbit_gset(G, S) for S in combo]) if combo else GSet(G, (), [[] for _ in G.elements])
        out.append(X.relabel(range(len(X.points))))
    return out


# ---------------------------------------------------------------------------
# wedge, smash, products

def disjoint_union(Xs: Sequence[GSet]) -> GSet:
    G = Xs[0].group
    points, offsets = [], []
    for i, X in enumerate(Xs):
        offsets.append(len(points))
        points.extend((i, p) for p in X.points)
    act = []
    for k in range(G.order):
        row = []
        for off, X in zip(offsets, Xs):
            row.extend(off + q for q in X.act[k])
        act.append(row)
    return GSet(G, points, act)


def wedge(Xs: Sequence[GSet], group: GroupLike | None = None) -> GSet:
    """Wedge of based sets; non-base points are labelled ``(summand, label)``."""
    G = as_subgroup(group) if group is not None else Xs[0].group
    points = [BASE]
    offsets = []
    for i, X in enumerate(Xs):
        if X.group != G or not X.based:
            raise SubgroupMismatch("wedge needs based sets over one group")
        offsets.append(len(points) - 1)
        points.extend((i, p) for p in X.points[1:])
    act = []
    for k in range(G.order):
        row = [0]
        for off, X in zip(offsets, Xs):
            row.extend(0 if q == 0 else off + q for q in X.act[k][1:])
        act.append(row)
    return GSet(G, points, act, based=True)


def smash(X: GSet, Y: GSet) -> GSet:
    """``X ^ Y``: pairs of non-base points plus the basepoint."""
    if X.group != Y.group or not (X.based and Y.based):
        raise SubgroupMismatch("smash needs based sets over one group")
    pairs = [(x, y) for x in range(1, len(X.points)) for y in range(1, len(Y.points))]
    idx = {pr: i + 1 for i, pr in enumerate(pairs)}
    points = [BASE] + [(X.points[x], Y.points[y]) for x, y in pairs]
    act = []
    for k in range(X.group.order):
        rx, ry = X.act[k], Y.act[k]
        act.append([0] + [idx[(rx[x], ry[y])] for x, y in pairs])
    return GSet(X.group, points, act, based=True)


def smash_many(Xs: Sequence[GSet], group: GroupLike) -> GSet:
    """Iterated smash with flat tuple labels; the empty smash is ``S^0``."""
    G = as_subgroup(group)
    combos = list(itertools.product(*[range(1, len(X.points)) for X in Xs]))
    idx = {c: i + 1 for i, c in enumerate(combos)}
    points = [BASE] + [tuple(X.points[c] for X, c in zip(Xs, combo)) for combo in combos]
    act = []
    for k in range(G.order):
        rows = [X.act[k] for X in Xs]
        act.append([0] + [idx[tuple(r[c] for r, c in zip(rows, combo))] for combo in combos])
    return GSet(G, points, act, based=True)


def product(Xs: Sequence[GSet], group: GroupLike | None = None) -> GSet:
    """Cartesian product; based when every factor is (basepoint = tuple of basepoints)."""
    G = as_subgroup(group) if group is not None else Xs[0].group
    is_based = bool(Xs) and all(X.based for X in Xs)
    combos = list(itertools.product(*[range(len(X.points)) for X in Xs]))
    idx = {c: i for i, c in enumerate(combos)}
    points = [tuple(X.points[c] for X, c in zip(Xs, combo)) for combo in combos]
    if is_based:
        points[0] = BASE
    act = []
    for k in range(G.order):
        rows = [X.act[k] for X in Xs]
        act.append([idx[tuple(r[c] for r, c in zip(rows, combo))] for combo in combos])
    return GSet(G, points, act, based=is_based)


# ---------------------------------------------------------------------------
# change of groups

def restrict(X: GSet, H: Subgroup) -> GSet:
    return X.restrict(H)


def _coset_data(G: Subgroup, H: Subgroup):
    reps = H.left_coset_reps(G)
    tab = G.parent.tab
    inv = G.parent.inv
    where = {}
    for c, r in enumerate(reps):
        for h in H.elements:
            where[tab[r][h]] = (c, h)   # r h
    return reps, where


def induce(group: GroupLike, X: GSet) -> GSet:
    """``G x_H X`` (unbased) or ``G_+ ^_H X`` (based), with points ``(r, x)`` for
    minimal left coset representatives ``r``."""
    G = as_subgroup(group)
    H = X.group
    if not H.is_subgroup_of(G):
        raise SubgroupMismatch(f"{H.label} is not a subgroup of {G.label}")
    reps, where = _coset_data(G, H)
    tab = G.parent.tab
    xs = list(X.nonbase())
    points = [(r, X.points[x]) for r in reps for x in xs]
    pos = {(c, x): i for i, (c, x) in enumerate((c, x) for c in range(len(reps)) for x in xs)}
    off = 1 if X.based else 0
    act = []
    for g in G.elements:
        row = [0] if X.based else []
        for c, r in enumerate(reps):
            c2, h = where[tab[g][r]]
            rh = X.act[H.position[h]]
            for x in xs:
                row.append(off + pos[(c2, rh[x])])
        act.append(row)
    if X.based:
        points = [BASE] + points
    return GSet(G, points, act, based=X.based)


def coinduce(group: GroupLike, X: GSet) -> GSet:
    """``map_H(G, X)``: ``H``-equivariant functions, stored as their values on
    minimal right coset representatives; ``(g.phi)(g') = phi(g' g)``."""
    G = as_subgroup(group)
    H = X.group
    if not H.is_subgroup_of(G):
        raise SubgroupMismatch(f"{H.label} is not a subgroup of {G.label}")
    tab = G.parent.tab
    reps = H.right_coset_reps(G)
    where = {}
    for c, r in enumerate(reps):
        for h in H.elements:
            where[tab[h][r]] = (c, h)   # h r
    n = len(X.points)
    combos = list(itertools.product(range(n), repeat=len(reps)))
    idx = {c: i for i, c in enumerate(combos)}
    act = []
    for g in G.elements:
        # (g.phi)(r_j) = phi(r_j g) = h . phi(r_k)
        moves = [where[tab[r][g]] for r in reps]
        rows = [(c, X.act[H.position[h]]) for c, h in moves]
        act.append([idx[tuple(rh[phi[c]] for c, rh in rows)] for phi in combos])
    points = [tuple(X.points[v] for v in phi) for phi in combos]
    if X.based:
        # basepoint: the constant function at the basepoint, listed first already
        points[0] = BASE
    return GSet(G, points, act, based=X.based)


def coinduced_value(G: Subgroup, X: GSet, phi_label, g: int):
    """Evaluate a coinduced point (tuple of values on right coset reps) at ``g``."""
    H = X.group
    tab = G.parent.tab
    reps = H.right_coset_reps(G)
    values = phi_label if phi_label != BASE else tuple(BASE for _ in reps)
    for c, r in enumerate(reps):
        for h in H.elements:
            if tab[h][r] == g:
                return X.move_label(h, values[c])
    raise SubgroupMismatch("element not in the group")


def change_of_groups(kind: str, H: Subgroup, X: GSet, group: GroupLike | None = None) -> GSet:
    if kind == "restrict":
        return X.restrict(H)
    if group is None:
        raise SubgroupMismatch("induce/coinduce need the ambient group")
    if X.group != H:
        raise SubgroupMismatch("X must be an H-set")
    if kind == "induce":
        return induce(group, X)
    if kind == "coinduce":
        return coinduce(group, X)
    raise ParseError(f"unknown change of groups {kind!r}")


# ---------------------------------------------------------------------------
# double coset decompositions

@dataclass
class InductionDecomposition:
    reps: list[int]
    intersections: list[Subgroup]
    summands: list[GSet]
    lhs: GSet
    rhs: GSet
    bijection: GMap

    def verify(self) -> bool:
        return self.bijection.is_iso()

    def to_dict(self) -> dict:
        return {"double_coset_reps": self.reps,
                "intersections": [list(L.elements) for L in self.intersections],
                "summand_sizes": [len(S.points) for S in self.summands],
                "bijection": self.bijection.to_dict(), "verified": self.verify()}


def _conj_pullback_for(X: GSet, g: int, K: Subgroup) -> tuple[Subgroup, GSet]:
    H = X.group
    L = K.intersection(H.conjugate(g))
    return L, X.conjugate_pullback(g, L)


def double_coset_decompose_induction(group: GroupLike, K: Subgroup, X: GSet) -> InductionDecomposition:
    """``res_K (G x_H X) = wedge over K\\G/H of K x_{K n gHg^-1} c_g^* X``; the
    map on summand ``g`` is ``[k, x] -> [k g, x]``."""
    G = as_subgroup(group)
    H = X.group
    if not (K.is_subgroup_of(G) and H.is_subgroup_of(G)):
        raise SubgroupMismatch("K and H must be subgroups of G")
    Xb = based(X)
    lhs = induce(G, Xb).restrict(K)
    reps = [d.rep for d in double_cosets(G, K, H)]
    summands, inters = [], []
    for g in reps:
        L, Y = _conj_pullback_for(Xb, g, K)
        inters.append(L)
        summands.append(induce(K, Y))
    rhs = wedge(summands, K)
    tab = G.parent.tab
    reps_H, where = _coset_data(G, H)
    mapping = [0] * len(rhs.points)
    for i in range(1, len(rhs.points)):
        s, (k, x) = rhs.points[i]
        c, h = where[tab[k][reps[s]]]
        mapping[i] = lhs.index[(reps_H[c], Xb.move_label(h, x))]
    return InductionDecomposition(reps, inters, summands, lhs, rhs, GMap(rhs, lhs, mapping))


@dataclass
class CoinductionDecomposition:
    reps: list[int]
    intersections: list[Subgroup]
    factors: list[GSet]
    lhs: GSet
    rhs: GSet
    bijection: GMap

    def verify(self) -> bool:
        return self.bijection.is_iso()


def double_coset_decompose_coinduction(group: GroupLike, K: Subgroup, X: GSet) -> CoinductionDecomposition:
    """``res_K map_H(G, X) = prod over K\\G/H of map_{K n gHg^-1}(K, c_g^* X)``
    via ``phi -> (k -> phi(g^-1 k))``."""
    G = as_subgroup(group)
    H = X.group
    lhs = coinduce(G, X).restrict(K)
    reps = [d.rep for d in double_cosets(G, K, H)]
    factors, inters = [], []
    for g in reps:
        L, Y = _conj_pullback_for(X, g, K)
        inters.append(L)
        factors.append(coinduce(K, Y))
    rhs = product(factors, K)
    par = G.parent
    mapping = [0] * len(lhs.points)
    for i, phi in enumerate(lhs.points):
        comps = []
        for g, L, F in zip(reps, inters, factors):
            kreps = L.right_coset_reps(K)
            vals = tuple(coinduced_value(G, X, phi, par.tab[par.inv[g]][k]) for k in kreps)
            comps.append(BASE if (F.based and all(v == BASE for v in vals)) else vals)
        label = tuple(comps)
        if rhs.based and all(c == BASE for c in comps):
            label = BASE
        mapping[i] = rhs.index[label]
    return CoinductionDecomposition(reps, inters, factors, lhs, rhs, GMap(lhs, rhs, mapping))


# ---------------------------------------------------------------------------
# injections

def _injection_labels(m: int, n: int) -> list[tuple[int, ...]]:
    return list(itertools.permutations(range(n), m))


def injection_gset(M: GSet, N: GSet) -> GSet:
    """``Inj(M, N)`` with ``(g.a)(x) = g a(g^-1 x)``; labels are image tuples.
    Empty when ``|M| > |N|`` (so its based version is the point)."""
    if M.group != N.group:
        raise SubgroupMismatch("injections between sets over different groups")
    G = M.group
    inv = G.parent.inv
    labels = _injection_labels(len(M.points), len(N.points)) if len(M.points) <= len(N.points) else []
    idx = {a: i for i, a in enumerate(labels)}
    act = []
    for g in G.elements:
        mg = M.act[G.position[inv[g]]]
        ng = N.act[G.position[g]]
        act.append([idx[tuple(ng[a[mg[x]]] for x in range(len(a)))] for a in labels])
    return GSet(G, labels, act)


def equivariant_injections(M: GSet, N: GSet, H: Subgroup | None = None) -> list[tuple[int, ...]]:
    """``H``-equivariant injections ``M -> N`` (image tuples), by backtracking
    over ``H``-orbit representatives of ``M``."""
    H = H if H is not None else M.group
    Mh, Nh = M.restrict(H), N.restrict(H)
    orbs = orbits_and_stabilizers(Mh)
    out = []
    img = [-1] * len(M.points)
    used = [False] * len(N.points)

    def rec(i: int):
        if i == len(orbs):
            out.append(tuple(img))
            return
        orb = orbs[i]
        for y in Nh.fixed_points(orb.stabilizer):
            assigned = []
            ok = True
            for k in range(H.order):
                x2, y2 = Mh.act[k][orb.rep], Nh.act[k][y]
                if img[x2] == -1:
                    if used[y2]:
                        ok = False
                        break
                    img[x2] = y2
                    used[y2] = True
                    assigned.append(x2)
                elif img[x2] != y2:  # pragma: no cover - stabilizer containment prevents this
                    ok = False
                    break
            if ok:
                rec(i + 1)
            for x2 in assigned:
                used[img[x2]] = False
                img[x2] = -1

    rec(0)
    out.sort()
    return out


def injection_fixed_points(M: GSet, N: GSet, H: Subgroup | None = None) -> list[tuple[int, ...]]:
    return equivariant_injections(M, N, H)


def multiple(X: GSet, n: int) -> GSet:
    """``n x X`` with points ``(i, x)``."""
    return disjoint_union([X] * n).relabel([(i, p) for i in range(n) for p in X.points])


# ---------------------------------------------------------------------------
# fixed points of free quotients

@dataclass
class QuotientFixedPoints:
    quotient_group: Group
    projection: Homomorphism
    quotient: GSet          # X/K over Gamma/K
    direct: list[int]       # indices of (X/K)^H
    lifts: list[Homomorphism]   # one per K-conjugacy class
    summands: list[list[int]]   # per lift: reps of X^{im a}/(C(im a) n K), as X indices
    forward: dict[tuple[int, int], int]
    backward: dict[int, tuple[int, int]]

    def verify(self) -> bool:
        wedge_pts = [(i, x) for i, s in enumerate(self.summands) for x in s]
        if sorted(self.forward) != sorted(wedge_pts):
            return False
        image = sorted(self.forward.values())
        nonbase_direct = sorted(p for p in self.direct if p != 0)
        if image != nonbase_direct:
            return False
        return all(self.forward[self.backward[p]] == p for p in nonbase_direct)

    def to_dict(self) -> dict:
        return {"direct_fixed_points": len(self.direct),
                "lift_classes": [list(a.images) for a in self.lifts],
                "summand_sizes": [len(s) + 1 for s in self.summands],
                "bijection": [[list(k), v] for k, v in sorted(self.forward.items())],
                "verified": self.verify()}


def centralizer(group: GroupLike, S: Subgroup) -> Subgroup:
    G = as_subgroup(group)
    tab = G.parent.tab
    gens = S.generators
    return Subgroup(G.parent, (g for g in G.elements if all(tab[g][s] == tab[s][g] for s in gens)), check=False)


def quotient_fixed_points(gamma: GroupLike, K: Subgroup, X: GSet, H: Subgroup,
                          quotient: tuple[Group, Homomorphism] | None = None) -> QuotientFixedPoints:
    """Both sides of ``(X/K)^H = wedge over K-classes of lifts a: H -> Gamma of
    X^{im a}/(C(im a) n K)`` with the bijection between them.

    ``H`` is a subgroup of the quotient group returned by ``quotient_group``
    (pass it via ``quotient`` to share it across calls).
    """
    G = as_subgroup(gamma)
    if not X.based or X.group != G:
        raise SubgroupMismatch("X must be a based Gamma-set")
    if not K.is_subgroup_of(G) or not K.is_normal_in(G):
        raise NotNormal(f"{K.label} is not normal")
    for p in X.nonbase():
        st = X.stabilizer(p)
        if st.intersection(K).order != 1:
            raise FreenessViolated(f"K does not act freely on point {X.points[p]!r}")
    Q, proj = quotient if quotient is not None else quotient_group(G, K)
    if H.parent is not Q:
        raise SubgroupMismatch("H must be a subgroup of the quotient group")
    par = G.parent
    tab, inv = par.tab, par.inv

    # X/K as a based Q-set: K-orbit labels are minimal representatives
    korbit = [min(X.move(k, p) for k in K.elements) for p in range(len(X.points))]
    reps = sorted(set(korbit))
    ridx = {r: i for i, r in enumerate(reps)}
    lift_of = {}
    for g in G.elements:
        lift_of.setdefault(proj(g), g)
    qact = [[ridx[korbit[X.move(lift_of[q], r)]] for r in reps] for q in range(Q.order)]
    XK = GSet(Q.full(), [X.points[r] for r in reps], qact, based=True)
    direct = XK.fixed_points(H)

    # lifts of the inclusion H -> Q, grouped into K-conjugacy classes
    incl = Homomorphism(H, Q.full(), H.elements)
    lifts = enumerate_homomorphisms(H, G, over=(proj, incl))
    classes: dict[tuple[int, ...], Homomorphism] = {}
    rep_of: dict[tuple[int, ...], tuple[tuple[int, ...], int]] = {}
    for a in lifts:
        conjs = {}
        for k in K.elements:
            conjs.setdefault(tuple(tab[tab[k][v]][inv[k]] for v in a.images), k)
        key = min(conjs)
        classes.setdefault(key, Homomorphism(H, G, key))
        rep_of[a.images] = (key, conjs[key])
    class_keys = sorted(classes)
    class_index = {k: i for i, k in enumerate(class_keys)}

    summands, cent_k = [], []
    for key in class_keys:
        a = classes[key]
        im = a.image()
        CK = centralizer(G, im).intersection(K)
        cent_k.append(CK)
        fixed = [p for p in X.fixed_points(im) if p != 0]
        summands.append(sorted({min(X.move(c, p) for c in CK.elements) for p in fixed}))

    forward = {}
    for i, s in enumerate(summands):
        for x in s:
            forward[(i, x)] = ridx[korbit[x]]

    # reverse map: a(h) = k(h~)^-1 h~ where h~ y = k(h~) y
    backward = {}
    for p in direct:
        if p == 0:
            continue
        y = reps[p]
        images = []
        for h in H.elements:
            ht = lift_of[h]
            target = X.move(ht, y)
            k = next(k for k in K.elements if X.move(k, y) == target)
            images.append(tab[inv[k]][ht])
        key, c = rep_of[tuple(images)]
        i = class_index[key]
        x = X.move(c, y)
        backward[p] = (i, min(X.move(z, x) for z in cent_k[i].elements))
    return QuotientFixedPoints(Q, proj, XK, direct, [classes[k] for k in class_keys], summands,
                               forward, backward)


# ---------------------------------------------------------------------------
# literal parsing

def parse_gset(group: GroupLike, text: str) -> GSet:
    """``orbits: G/S * k, ...`` (``S`` is ``#id`` in ``G`` or any subgroup reference),
    ``explicit: [[images of generator 0], ...]``, ``trivial:<n>``, ``regular``
    or ``empty``."""
    G = as_subgroup(group)
    t = text.strip()
    if t in ("empty", "0", ""):
        return GSet(G, (), [[] for _ in G.elements])
    if t == "regular":
        return regular_gset(G)
    if t.startswith("trivial:"):
        try:
            n = int(t[8:])
        except ValueError:
            raise ParseError(f"bad trivial G-set {text!r}") from None
        return trivial_gset(G, range(n))
    if t.startswith("orbits:"):
        pieces = []
        for part in _split_orbit_list(t[7:]):
            head, k = part, 1
            m = re.fullmatch(r"(.*?)\s*\*\s*(\d+)", part)
            if m:
                head, k = m.group(1), int(m.group(2))
            head = head.strip()
            if not head.startswith("G/"):
                raise ParseError(f"orbit must be written G/<subgroup>, got {part!r}")
            pieces.extend([orbit_gset(G, _orbit_subgroup(G, head[2:].strip(), part))] * k)
        if not pieces:
            return GSet(G, (), [[] for _ in G.elements])
        U = disjoint_union(pieces)
        return U.relabel(range(len(U.points)))
    if t.startswith("explicit:"):
        try:
            data = json.loads(t[9:])
        except json.JSONDecodeError as e:
            raise ParseError(f"bad explicit G-set: {e}") from None
        gens = G.generators
        if not isinstance(data, list) or len(data) != len(gens):
            raise ParseError(f"explicit G-set needs one image list per generator ({len(gens)})")
        n = len(data[0]) if data else 0
        if any(not isinstance(r, list) or len(r) != n or sorted(r) != list(range(n)) for r in data):
            raise ParseError("explicit generator images must be permutations of equal length")
        if not gens:
            return trivial_gset(G, range(n))
        return GSet.from_generators(G, n, dict(zip(gens, data)))
    raise ParseError(f"unrecognised G-set literal {text!r}")


def _split_orbit_list(body: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in body:
        depth += ch in "(<⟨"
        depth -= ch in ")>⟩"
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def _orbit_subgroup(G: Subgroup, ref: str, part: str) -> Subgroup:
    """``#k`` indexes ``enumerate_subgroups(G)``; anything else is a subgroup
    reference in the ambient group that must lie in ``G``."""
    from .universe import parse_subgroup

    if ref.startswith("#") and ref[1:].isdigit():
        subs = enumerate_subgroups(G)
        i = int(ref[1:])
        if i >= len(subs):
            raise ParseError(f"unknown subgroup id in {part!r}")
        return subs[i]
    S = parse_subgroup(G.parent, ref)
    if not S.is_subgroup_of(G):
        raise ParseError(f"{ref} is not a subgroup of {G.label}")
    return S
