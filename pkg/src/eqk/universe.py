"""G-set universes, embeddings, graph-subgroup families and transfer admissibility.

A universe is stored by its set of isotropy classes; an element is a triple
``(class, copy, coset)`` where ``coset`` indexes the minimal left coset
representatives of the class representative ``L`` in ``G``. Only finite windows
``copy < T`` are ever materialized.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import BudgetExceeded, NotAGraph, NotInFamily, NotNormal, ParseError, SubgroupMismatch
from .gset import GSet, orbit_gset, orbits_and_stabilizers
from .perm import (
    Group,
    GroupLike,
    Homomorphism,
    Subgroup,
    as_subgroup,
    conjugacy_class_rep,
    conjugacy_classes_of_subgroups,
    direct_product,
    double_cosets,
    enumerate_subgroups,
    graph_inverse,
    graph_subgroup,
    symmetric_group,
)

Triple = tuple[int, int, int]


class UniverseSpec:
    def __init__(self, group: Group, classes: Iterable[Subgroup], name: str = "explicit"):
        self.group = group
        G = group.full()
        reps = sorted({conjugacy_class_rep(S, G) for S in classes})
        if not reps:
            raise ParseError("a universe needs at least one isotropy class")
        self.classes: tuple[Subgroup, ...] = tuple(reps)
        self.name = name

    def __eq__(self, other):
        return isinstance(other, UniverseSpec) and self.group is other.group and self.classes == other.classes

    def __hash__(self):
        return hash((id(self.group), self.classes))

    def __repr__(self):
        return f"<Universe {self.name} over {self.group.name}: {[c.label for c in self.classes]}>"

    @cached_property
    def orbits(self) -> tuple[GSet, ...]:
        """``G/L`` for each class representative ``L``."""
        return tuple(orbit_gset(self.group, L) for L in self.classes)

    def class_id(self, S: Subgroup) -> int | None:
        rep = conjugacy_class_rep(S, self.group.full())
        try:
            return self.classes.index(rep)
        except ValueError:
            return None

    def act(self, g: int, u: Triple) -> Triple:
        c, i, j = u
        return (c, i, self.orbits[c].move(g, j))

    def stabilizer(self, u: Triple) -> Subgroup:
        return self.orbits[u[0]].stabilizer(u[2])

    def window(self, T: int | Sequence[int]) -> GSet:
        """The finite G-subset of elements with copy index below ``T``
        (an int, or one bound per class)."""
        bounds = [T] * len(self.classes) if isinstance(T, int) else list(T)
        points = [(c, i, j) for c, O in enumerate(self.orbits) for i in range(bounds[c])
                  for j in range(len(O.points))]
        return GSet.build(self.group, points, self.act)

    def orbit_of(self, u: Triple) -> list[Triple]:
        c, i, _ = u
        return sorted({self.act(g, u) for g in range(self.group.order)})

    def is_g_stable(self, points: Iterable[Triple]) -> bool:
        s = set(points)
        return all(self.act(g, u) in s for u in s for g in self.group.full().generators)

    def to_dict(self) -> dict:
        subs = enumerate_subgroups(self.group, cap=None)
        return {"name": self.name, "classes": [subs.index(L) for L in self.classes]}


def make_universe(group: Group, kind: str = "complete", N: Subgroup | None = None,
                  classes: Iterable[Subgroup] | None = None) -> UniverseSpec:
    G = group.full()
    if kind == "complete":
        return UniverseSpec(group, [c[0] for c in conjugacy_classes_of_subgroups(G, cap=None)], "complete")
    if kind == "trivial":
        return UniverseSpec(group, [G], "trivial")
    if kind == "n_fixed":
        if N is None or not N.is_normal_in(G):
            raise NotNormal("n_fixed needs a normal subgroup")
        reps = [c[0] for c in conjugacy_classes_of_subgroups(G, cap=None) if N.is_subgroup_of(c[0])]
        return UniverseSpec(group, reps, f"nfixed:{enumerate_subgroups(G, cap=None).index(N)}")
    if kind == "explicit":
        classes = list(classes or [])
        subs = enumerate_subgroups(G, cap=None)
        name = "classes:[" + ",".join(str(subs.index(S)) for S in classes) + "]"
        return UniverseSpec(group, classes, name)
    raise ParseError(f"unknown universe kind {kind!r}")


def parse_subgroup(group: Group, text: str) -> Subgroup:
    """Subgroup reference: ``#id`` (position in ``enumerate_subgroups``),
    ``<cycles, ...>``, a named group spec whose elements lie in ``group``, or
    ``G``/``1``."""
    from .perm import Perm, build_group, parse_cycles, _split_top_level

    t = str(text).strip()
    if t in ("G", "full"):
        return group.full()
    if t in ("1", "e", "trivial"):
        return group.trivial()
    if t.startswith("#"):
        subs = enumerate_subgroups(group, cap=None)
        try:
            i = int(t[1:])
        except ValueError:
            raise ParseError(f"bad subgroup id {text!r}") from None
        if not 0 <= i < len(subs):
            raise ParseError(f"subgroup id {i} out of range (0..{len(subs) - 1})")
        return subs[i]
    if t.lstrip("-").isdigit():
        raise ParseError(f"write subgroup ids as #{t}")
    if (t.startswith("<") and t.endswith(">")) or (t.startswith("⟨") and t.endswith("⟩")):
        body = t[1:-1]
        gens = []
        for g in _split_top_level(body):
            if not g:
                continue
            cyc = parse_cycles(g)
            if any(a >= group.degree for c in cyc for a in c):
                raise ParseError(f"generator {g!r} moves points outside degree {group.degree}")
            gens.append(group.index(Perm.from_cycles(cyc, group.degree)))
        return group.generate(gens)
    try:
        H = build_group(t, cap=None)
    except ParseError:
        raise ParseError(f"unrecognised subgroup reference {text!r}") from None
    if H.degree != group.degree:
        raise ParseError(f"{t} acts on {H.degree} points, {group.name} on {group.degree}")
    try:
        return Subgroup(group, [group.index(p) for p in H.elements])
    except SubgroupMismatch:
        raise ParseError(f"{t} is not a subgroup of {group.name}") from None


def _id_ref(t: str) -> str:
    """Inside universe literals bare integers are subgroup ids."""
    t = t.strip()
    return "#" + t if t.isdigit() else t


def parse_universe(group: Group, text: str) -> UniverseSpec:
    t = text.strip()
    if t in ("complete", "trivial"):
        return make_universe(group, t)
    if t.startswith("nfixed:"):
        return make_universe(group, "n_fixed", N=parse_subgroup(group, _id_ref(t[7:])))
    if t == "free":
        return make_universe(group, "explicit", classes=[group.trivial()])
    if t.startswith("classes:"):
        body = t[8:].strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise ParseError("classes universe needs a bracketed id list")
        ids = [x.strip() for x in body[1:-1].split(",") if x.strip()]
        if not ids:
            raise ParseError("a universe needs at least one isotropy class")
        return make_universe(group, "explicit", classes=[parse_subgroup(group, _id_ref(i)) for i in ids])
    raise ParseError(f"unrecognised universe literal {text!r}")


# ---------------------------------------------------------------------------
# embeddings

def restricted_orbit_types(H: Subgroup, U: UniverseSpec) -> list[tuple[int, int, Subgroup]]:
    """H-orbits of one copy of each class: ``(class, double coset rep g,
    H n gLg^-1)``."""
    out = []
    G = U.group.full()
    for c, L in enumerate(U.classes):
        for d in double_cosets(G, H, L):
            out.append((c, d.rep, H.intersection(L.conjugate(d.rep))))
    return out


@dataclass
class Embedding:
    ok: bool
    mapping: dict[int, Triple] = field(default_factory=dict)
    reason: str | None = None

    def __bool__(self):
        return self.ok

    def to_dict(self) -> dict:
        return {"embeds": self.ok, "reason": self.reason,
                "window": [[k, list(v)] for k, v in sorted(self.mapping.items())]}


def embeds(H: Subgroup, M: GSet, U: UniverseSpec) -> Embedding:
    """Whether the H-set ``M`` admits an H-embedding into ``U``, with an explicit
    injection into a finite window on success."""
    if M.group != H:
        raise SubgroupMismatch("M must be an H-set")
    types = restricted_orbit_types(H, U)
    par = H.parent
    tab = par.tab
    mapping: dict[int, Triple] = {}
    next_copy = [0] * len(U.classes)
    for orb in orbits_and_stabilizers(M):
        S = orb.stabilizer
        found = None
        for c, g, T in types:
            if T.order != S.order:
                continue
            for h in H.elements:
                if T.conjugate(h) == S:
                    found = (c, tab[h][g])
                    break
            if found:
                break
        if found is None:
            return Embedding(False, reason=f"orbit type {S.label} does not occur in res_H U")
        c, hg = found
        O = U.orbits[c]
        j0 = O.index[min(tab[hg][l] for l in U.classes[c].elements)]
        copy = next_copy[c]
        next_copy[c] += 1
        for k, h in enumerate(H.elements):
            mapping[M.act[k][orb.rep]] = (c, copy, O.move(h, j0))
    return Embedding(True, mapping)


def verify_embedding(H: Subgroup, M: GSet, U: UniverseSpec, emb: Embedding) -> bool:
    if not emb.ok:
        return False
    vals = [emb.mapping[p] for p in range(len(M.points))]
    if len(set(vals)) != len(vals):
        return False
    return all(U.act(h, emb.mapping[p]) == emb.mapping[M.act[k][p]]
               for k, h in enumerate(H.elements) for p in range(len(M.points)))


# ---------------------------------------------------------------------------
# families of graph subgroups

def alpha_gset(alpha: Homomorphism) -> GSet:
    """The H-set structure on ``n`` given by ``alpha: H -> Sigma_n``."""
    Sn = alpha.target.parent
    act = [list(Sn.elements[v].images) for v in alpha.images]
    return GSet(alpha.source, range(Sn.degree), act)


@dataclass
class Membership:
    member: bool
    H: Subgroup | None = None
    alpha: Homomorphism | None = None
    embedding: Embedding | None = None
    reason: str | None = None

    def __bool__(self):
        return self.member

    def to_dict(self) -> dict:
        d = {"member": self.member, "reason": self.reason}
        if self.H is not None:
            d["H"] = list(self.H.elements)
            d["alpha"] = list(self.alpha.images)
        if self.embedding is not None:
            d["embedding"] = self.embedding.to_dict()
        return d


def family_membership(L: Subgroup, U: UniverseSpec) -> Membership:
    try:
        H, alpha = graph_inverse(L)
    except NotAGraph as e:
        return Membership(False, reason=f"NotAGraph: {e}")
    emb = embeds(H, alpha_gset(alpha), U)
    if not emb:
        return Membership(False, H, alpha, emb, reason=f"embedding fails: {emb.reason}")
    return Membership(True, H, alpha, emb)


def family_product(U: UniverseSpec, n: int) -> Group:
    return direct_product(U.group, symmetric_group(n))


@dataclass
class UntwistWitness:
    K: Subgroup
    H: Subgroup
    alpha: Homomorphism
    j: dict[int, int]          # H -> K, h -> (h, alpha(h))
    nset: GSet
    embedding: Embedding

    def to_dict(self) -> dict:
        return {"H": list(self.H.elements), "alpha": list(self.alpha.images),
                "j": [[h, k] for h, k in sorted(self.j.items())], "embedding": self.embedding.to_dict()}


def untwist(K: Subgroup, U: UniverseSpec) -> UntwistWitness:
    m = family_membership(K, U)
    if not m:
        raise NotInFamily(m.reason or "not in the family")
    P = K.parent
    j = {h: P.pair(h, m.alpha(h)) for h in m.H.elements}
    return UntwistWitness(K, m.H, m.alpha, j, alpha_gset(m.alpha), m.embedding)


@dataclass
class TwistWitness:
    H: Subgroup
    M: tuple[Triple, ...]      # bijection i -> M[i]
    alpha: Homomorphism
    K: Subgroup
    j: dict[int, int]

    def to_dict(self) -> dict:
        return {"H": list(self.H.elements), "M": [list(u) for u in self.M],
                "alpha": list(self.alpha.images), "K": list(self.K.elements),
                "j": [[h, k] for h, k in sorted(self.j.items())]}


def twist(H: Subgroup, M: Iterable[Triple], U: UniverseSpec) -> TwistWitness:
    """From a finite H-subset ``M`` of ``U`` build the graph subgroup of
    ``G x Sigma_|M|`` by choosing the bijection ``i -> sorted(M)[i]``."""
    pts = tuple(sorted(set(tuple(u) for u in M)))
    pos = {u: i for i, u in enumerate(pts)}
    for u in pts:
        c, _, j = u
        if not 0 <= c < len(U.classes) or not 0 <= j < len(U.orbits[c].points):
            raise NotInFamily(f"{u} is not an element of the universe")
    n = len(pts)
    Sn = symmetric_group(n)
    images = []
    for h in H.elements:
        try:
            images.append(Sn.index([pos[U.act(h, u)] for u in pts]))
        except KeyError:
            raise NotInFamily("M is not H-stable") from None
    alpha = Homomorphism(H, Sn.full(), images)
    K = graph_subgroup(alpha, U.group)
    P = K.parent
    j = {h: P.pair(h, alpha(h)) for h in H.elements}
    if not family_membership(K, U):  # pragma: no cover - M is itself an embedding
        raise NotInFamily("twisted subgroup fails the family test")
    return TwistWitness(H, pts, alpha, K, j)


def untwist_then_twist(K: Subgroup, U: UniverseSpec) -> tuple[TwistWitness, int]:
    """Round trip; returns the twist witness and an element of ``G x Sigma_n``
    conjugating the result back to ``K``."""
    w = untwist(K, U)
    image = [w.embedding.mapping[p] for p in range(len(w.nset.points))]
    tw = twist(w.H, image, U)
    P = K.parent
    for x in range(P.order):
        if tw.K.conjugate(x) == K:
            return tw, x
    raise NotInFamily("round trip did not return a conjugate")  # pragma: no cover


# ---------------------------------------------------------------------------
# transfer admissibility

def _orbit_types_in(K: Subgroup, U: UniverseSpec) -> list[tuple[int, int, Subgroup]]:
    """One representative per K-conjugacy class of orbit types of ``res_K U``."""
    seen: set[tuple[int, ...]] = set()
    out = []
    for c, g, T in restricted_orbit_types(K, U):
        key = conjugacy_class_rep(T, K).elements
        if key in seen:
            continue
        seen.add(key)
        out.append((c, g, T))
    return out


@dataclass
class AdmissibleSet:
    K: Subgroup
    masks: dict[int, list[tuple[int, int, tuple[int, ...]]]]  # mask -> provenance (class, g, subset)


_ADMISSIBLE_CACHE: dict[tuple, AdmissibleSet] = {}


def achievable_stabilizers(K: Subgroup, U: UniverseSpec) -> AdmissibleSet:
    """Intersection closure of setwise K-stabilizers of subsets of single
    K-orbits of the types in ``res_K U``, always containing ``K``."""
    key = (U.group, U.classes, K.elements)
    if key in _ADMISSIBLE_CACHE:
        return _ADMISSIBLE_CACHE[key]
    par = K.parent
    tab = par.tab
    generators: dict[int, tuple[int, int, tuple[int, ...]]] = {}
    for c, g, T in _orbit_types_in(K, U):
        reps = T.left_coset_reps(K)
        where = {}
        for i, r in enumerate(reps):
            for t in T.elements:
                where[tab[r][t]] = i
        action = np.array([[where[tab[k][r]] for r in reps] for k in K.elements], dtype=np.int32)
        masks, codes = kernels.level_stabilizers(action, 2)
        for row, code in zip(masks.tolist(), codes.tolist()):
            elems = _unpack(row, K)
            mask = _mask_of(elems)
            subset = tuple(i for i in range(len(reps)) if (code >> i) & 1)
            generators.setdefault(mask, (c, g, tuple(tab[reps[i]][g] for i in subset)))
    full = K.mask
    closure: dict[int, list] = {full: []}
    frontier = [full]
    gens = sorted(generators.items())
    while frontier:
        nxt = []
        for m in frontier:
            for gm, prov in gens:
                x = m & gm
                if x not in closure:
                    closure[x] = closure[m] + [prov]
                    nxt.append(x)
        frontier = nxt
    res = AdmissibleSet(K, closure)
    _ADMISSIBLE_CACHE[key] = res
    return res


def _unpack(words: Sequence[int], K: Subgroup) -> list[int]:
    """Mask over positions in ``K.elements`` -> parent indices."""
    out = []
    for pos, e in enumerate(K.elements):
        if (int(words[pos // 64]) >> (pos % 64)) & 1:
            out.append(e)
    return out


def _mask_of(elems: Iterable[int]) -> int:
    m = 0
    for e in elems:
        m |= 1 << e
    return m


@dataclass
class Admissibility:
    admissible: bool
    vector: dict[Triple, int] = field(default_factory=dict)

    def __bool__(self):
        return self.admissible

    def to_dict(self) -> dict:
        return {"admissible": self.admissible,
                "vector": [[list(u), c] for u, c in sorted(self.vector.items())]}


def vector_stabilizer(vector: dict[Triple, int], K: Subgroup, U: UniverseSpec) -> Subgroup:
    return Subgroup(K.parent, (k for k in K.elements
                               if all(vector.get(U.act(k, u), 0) == c for u, c in vector.items())),
                    check=False)


def transfer_admissible(H: Subgroup, K: Subgroup, U: UniverseSpec) -> Admissibility:
    """Whether ``K/H`` embeds K-equivariantly into the linearization of ``U``.
    On success returns a vector (coefficient 1 on each chosen subset, each on its
    own copy) whose K-stabilizer is exactly ``H``."""
    if not H.is_subgroup_of(K):
        raise SubgroupMismatch(f"{H.label} is not a subgroup of {K.label}")
    adm = achievable_stabilizers(K, U)
    prov = adm.masks.get(H.mask)
    if prov is None:
        return Admissibility(False)
    vector: dict[Triple, int] = {}
    copies = [0] * len(U.classes)
    tab = U.group.tab
    for c, g, subset_elems in prov:
        O = U.orbits[c]
        L = U.classes[c]
        i = copies[c]
        copies[c] += 1
        for x in subset_elems:
            j = O.index[min(tab[x][l] for l in L.elements)]
            vector[(c, i, j)] = 1
    if vector_stabilizer(vector, K, U) != H:  # pragma: no cover - consistency guard
        from .errors import ConsistencyError
        raise ConsistencyError("transfer witness does not realize the stabilizer")
    return Admissibility(True, vector)


def admissible_pairs(K: Subgroup, U: UniverseSpec) -> list[Subgroup]:
    """All ``H <= K`` with ``(H, K)`` admissible, ordered canonically."""
    masks = achievable_stabilizers(K, U).masks
    return [S for S in enumerate_subgroups(K, cap=None) if S.mask in masks]


# independent oracle: brute-force vectors with small coefficients

def oracle_achievable(K: Subgroup, U: UniverseSpec, copies: int = 2, values: int = 3,
                      max_orbit: int = 13) -> set[tuple[int, ...]]:
    """Exact stabilizers of all vectors with coefficients in ``range(values)``
    supported on ``copies`` copies of every class, computed orbit by orbit and
    combined by intersection."""
    par = K.parent
    per_orbit: list[set[frozenset]] = []
    for c, L in enumerate(U.classes):
        O = U.orbits[c]
        Kset = O.restrict(K)
        for orb in orbits_and_stabilizers(Kset):
            pts = list(orb.points)
            if len(pts) > max_orbit:
                raise BudgetExceeded(f"orbit of size {len(pts)} too large for the vector oracle")
            local = {p: i for i, p in enumerate(pts)}
            perm = np.array([[local[Kset.act[k][p]] for p in pts] for k in range(K.order)], dtype=np.int64)
            n = len(pts)
            funcs = np.array(np.meshgrid(*[np.arange(values, dtype=np.uint8)] * n, indexing="ij")).reshape(n, -1).T
            # f is fixed by k iff f(k p) = f(p) for all p
            fixed = np.stack([np.all(funcs[:, perm[k]] == funcs, axis=1) for k in range(K.order)], axis=1)
            stabs = {frozenset(np.nonzero(row)[0].tolist()) for row in np.unique(fixed, axis=0)}
            per_orbit.extend([stabs] * copies)
    current = {frozenset(range(K.order))}
    for stabs in per_orbit:
        current = {a & b for a in current for b in stabs}
    return {tuple(K.elements[i] for i in sorted(s)) for s in current}


def oracle_transfer_admissible(H: Subgroup, K: Subgroup, U: UniverseSpec) -> bool:
    return H.elements in oracle_achievable(K, U)
