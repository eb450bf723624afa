"""Injections with complement labels, symmetric sequences and their evaluation.

Morphisms ``M -> N`` of the indexing category are kept as an injection together
with the complement of its image; the sphere coordinates on the complement are
never modelled, only the labels and how composition moves them.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Hashable, Sequence

from .errors import LevelOutOfRange, ObjectMismatch, SubgroupMismatch
from .gset import BASE, GMap, GSet, induce, iso_test, smash
from .perm import Group, Homomorphism, Subgroup, direct_product, symmetric_group


@dataclass(frozen=True)
class SigmaMorphism:
    source: int
    target: int
    alpha: tuple[int, ...]

    def __post_init__(self):
        if len(self.alpha) != self.source or len(set(self.alpha)) != self.source:
            raise ObjectMismatch("not an injection")
        if any(not 0 <= a < self.target for a in self.alpha):
            raise ObjectMismatch("injection leaves its target")

    @property
    def complement(self) -> tuple[int, ...]:
        im = set(self.alpha)
        return tuple(k for k in range(self.target) if k not in im)

    @property
    def label(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return (self.alpha, self.complement)


def identity_morphism(m: int) -> SigmaMorphism:
    return SigmaMorphism(m, m, tuple(range(m)))


@dataclass(frozen=True)
class Composite:
    morphism: SigmaMorphism
    tracking: dict  # ("x", n) for n in N - a(M), ("y", k) for k in K - b(N)  ->  element of K - ba(M)


def compose(f: SigmaMorphism, g: SigmaMorphism) -> Composite:
    """``g o f`` for ``f: M -> N``, ``g: N -> K``; the complement of the composite
    is ``g(N - f(M))`` together with ``K - g(N)``."""
    if f.target != g.source:
        raise ObjectMismatch(f"cannot compose through objects of size {f.target} and {g.source}")
    ba = tuple(g.alpha[a] for a in f.alpha)
    h = SigmaMorphism(f.source, g.target, ba)
    tracking = {("x", n): g.alpha[n] for n in f.complement}
    tracking.update({("y", k): k for k in g.complement})
    assert sorted(tracking.values()) == list(h.complement)
    return Composite(h, tracking)


@dataclass(frozen=True)
class Tracked:
    """A morphism whose complement elements remember which factor they came from."""
    morphism: SigmaMorphism
    provenance: tuple[tuple[int, Hashable, int], ...]   # (complement element, factor tag, element there)

    @classmethod
    def of(cls, f: SigmaMorphism, tag: Hashable) -> "Tracked":
        return cls(f, tuple((c, tag, c) for c in f.complement))


def compose_tracked(a: Tracked, b: Tracked) -> Tracked:
    comp = compose(a.morphism, b.morphism)
    g = b.morphism.alpha
    prov = {g[c]: (t, e) for c, t, e in a.provenance}
    prov.update({c: (t, e) for c, t, e in b.provenance})
    return Tracked(comp.morphism, tuple(sorted((c, t, e) for c, (t, e) in prov.items())))


def act_on_morphism(M: GSet, N: GSet, g: int, f: SigmaMorphism) -> SigmaMorphism:
    """``g.f = g f g^-1``."""
    ginv = M.group.parent.inv[g]
    return SigmaMorphism(f.source, f.target,
                         tuple(N.move(g, f.alpha[M.move(ginv, x)]) for x in range(f.source)))


def sigma_hom(M: GSet, N: GSet) -> GSet:
    """Based G-set of injections ``M -> N`` with complements; the point when
    ``|M| > |N|``."""
    if M.group != N.group:
        raise SubgroupMismatch("objects over different groups")
    m, n = len(M.points), len(N.points)
    morphs = [SigmaMorphism(m, n, a) for a in itertools.permutations(range(n), m)] if m <= n else []
    points = [BASE] + [f.label for f in morphs]
    idx = {f: i + 1 for i, f in enumerate(morphs)}
    act = [[0] + [idx[act_on_morphism(M, N, g, f)] for f in morphs] for g in M.group.elements]
    return GSet(M.group, points, act, based=True)


# ---------------------------------------------------------------------------
# symmetric sequences

def sigma_product(G: Group, n: int) -> Group:
    return direct_product(G, symmetric_group(n))


def perm_index(n: int, images: Sequence[int]) -> int:
    return symmetric_group(n).index(tuple(images))


class SymmetricSequence:
    """Levels ``X_n`` (``n <= n_max``), each a based set over ``G x Sigma_n``."""

    def __init__(self, group: Group, levels: Sequence[GSet], name: str = "X"):
        self.group = group
        self.levels = list(levels)
        self.name = name
        for n, X in enumerate(self.levels):
            P = sigma_product(group, n)
            if X.group != P.full() or not X.based:
                raise SubgroupMismatch(f"level {n} must be a based set over G x Sigma_{n}")

    @property
    def n_max(self) -> int:
        return len(self.levels) - 1

    def level(self, n: int) -> GSet:
        if not 0 <= n <= self.n_max:
            raise LevelOutOfRange(f"level {n} outside 0..{self.n_max}")
        return self.levels[n]

    def check(self) -> bool:
        return all(X.check_action() for X in self.levels)

    @classmethod
    def build(cls, group: Group, n_max: int, points: Callable[[int], Sequence[Hashable]],
              action: Callable[[int, int, tuple[int, ...], Hashable], Hashable], name: str = "X"):
        """``action(n, g, sigma_images, point)`` for ``g`` an element index of ``group``."""
        levels = []
        for n in range(n_max + 1):
            P = sigma_product(group, n)
            Sn = symmetric_group(n)
            pts = [BASE] + [p for p in points(n) if p != BASE]

            def f(x, p, n=n, P=P, Sn=Sn):
                if p == BASE:
                    return BASE
                g, s = P.split(x)
                return action(n, g, Sn.elements[s].images, p)

            levels.append(GSet.build(P, pts, f, based=True))
        return cls(group, levels, name)


def smash_power_sequence(A: GSet, n_max: int) -> SymmetricSequence:
    """``X_n = A^n`` (smash power), ``Sigma_n`` permuting factors."""
    G = A.group.parent
    nonbase = A.points[1:]

    def action(n, g, sigma, p):
        y = [None] * n
        for i in range(n):
            y[sigma[i]] = A.move_label(g, p[i])
        return tuple(y)

    return SymmetricSequence.build(G, n_max, lambda n: list(itertools.product(nonbase, repeat=n)),
                                   action, name="smash-power")


def subset_sequence(group: Group, n_max: int) -> SymmetricSequence:
    """``X_n`` = nonempty subsets of ``n`` plus a basepoint, trivial G-action."""
    def pts(n):
        return [tuple(c) for k in range(1, n + 1) for c in itertools.combinations(range(n), k)]

    return SymmetricSequence.build(group, n_max, pts,
                                   lambda n, g, sigma, p: tuple(sorted(sigma[i] for i in p)),
                                   name="subsets")


def free_sequence(M: GSet, A: GSet, n_max: int) -> SymmetricSequence:
    """``(F_M A)_n = A ^ Sigma(M, n)`` with ``(g, s).(a, f) = (g a, s f g^-1)``."""
    G = M.group.parent
    m = len(M.points)
    inv = G.inv

    def pts(n):
        return [(a, alpha) for a in A.points[1:] for alpha in itertools.permutations(range(n), m)]

    def action(n, g, sigma, p):
        a, alpha = p
        gi = inv[g]
        return (A.move_label(g, a), tuple(sigma[alpha[M.move(gi, x)]] for x in range(m)))

    return SymmetricSequence.build(G, n_max, pts, action, name="free")


# ---------------------------------------------------------------------------
# evaluation

def rho(M: GSet, g: int) -> int:
    """The permutation of ``M``'s points induced by ``g``, as an element of Sigma_m."""
    return perm_index(len(M.points), M.act[M.group.position[g]])


@dataclass
class Evaluation:
    """``X(M) = X_m ^_{Sigma_m} Bij(m, M)_+``, stored on representatives
    ``[x, id]`` so the carrier is that of ``X_m``."""
    X: SymmetricSequence
    M: GSet
    gset: GSet

    @property
    def m(self) -> int:
        return len(self.M.points)

    def sigma_action(self, tau: Sequence[int], p: int) -> int:
        """``tau`` a bijection of ``M`` (as point indices)."""
        Xm = self.X.level(self.m)
        P = Xm.group.parent
        return Xm.move(P.pair(0, perm_index(self.m, tau)), p)

    def semidirect_action(self, g: int, tau: Sequence[int], p: int) -> int:
        """``(g, tau)`` in ``G x| Sigma_M`` acts as ``(g, tau rho(g))``."""
        Xm = self.X.level(self.m)
        P = Xm.group.parent
        Sm = symmetric_group(self.m)
        t = Sm.mul(perm_index(self.m, tau), rho(self.M, g))
        return Xm.move(P.pair(g, t), p)


def evaluate(X: SymmetricSequence, M: GSet) -> Evaluation:
    """Evaluate on an ``H``-set ``M`` (``H <= G``): ``h`` acts on ``X_m`` as
    ``(h, rho(h))``."""
    m = len(M.points)
    Xm = X.level(m)
    H = M.group
    if H.parent is not X.group:
        raise SubgroupMismatch("M must be a set over a subgroup of the sequence's group")
    P = Xm.group.parent
    act = [Xm.act[P.full().position[P.pair(h, rho(M, h))]] for h in H.elements]
    return Evaluation(X, M, GSet(H, Xm.points, act, based=True))


def evaluate_map(X: SymmetricSequence, phi: GMap) -> GMap:
    """``X(phi)`` for an isomorphism ``phi: M -> M'``: ``x -> (e, phi).x``."""
    if not phi.is_iso():
        raise ObjectMismatch("evaluation is functorial in isomorphisms only")
    src, tgt = evaluate(X, phi.source), evaluate(X, phi.target)
    m = len(phi.mapping)
    Xm = X.level(m)
    P = Xm.group.parent
    k = Xm.group.position[P.pair(0, perm_index(m, phi.mapping))]
    return GMap(src.gset, tgt.gset, list(Xm.act[k]))


# ---------------------------------------------------------------------------
# free and semi-free spectra at a level

def free_eval(M: GSet, A: GSet, N: GSet) -> GSet:
    """``(F_M A)(N) = A ^ Sigma(M, N)``."""
    return smash(A, sigma_hom(M, N))


def semifree_eval(m: int, A: GSet, N: GSet) -> GSet:
    """``(G_m A)(N) = (A ^ Sigma(m, N))/Sigma_m`` for ``A`` based over
    ``G x Sigma_m``; the point when ``|N| < m``. Orbits are labelled by their
    minimal member ``(a, alpha)``."""
    P = A.group.parent
    if P.factors is None or P.factors[1].order != symmetric_group(m).order or A.group != P.full():
        raise SubgroupMismatch("A must be a based set over G x Sigma_m")
    G = N.group
    n = len(N.points)
    if n < m:
        return GSet(G, [BASE], [[0] for _ in G.elements], based=True)
    Sm = symmetric_group(m)
    pairs = [(a, alpha) for a in range(1, len(A.points)) for alpha in itertools.permutations(range(n), m)]

    def canon(a, alpha):
        best = None
        for s in range(Sm.order):
            sig = Sm.elements[s].images
            # (a, alpha) ~ ((1, s) a, alpha s^-1)
            sinv = Sm.elements[Sm.inv[s]].images
            cand = (A.move(P.pair(0, s), a), tuple(alpha[sinv[i]] for i in range(m)))
            if best is None or cand < best:
                best = cand
        return best

    reps = sorted({canon(a, al) for a, al in pairs})
    idx = {r: i + 1 for i, r in enumerate(reps)}
    points = [BASE] + [(A.points[a], al) for a, al in reps]
    act = []
    for g in G.elements:
        row = [0]
        gp = P.pair(g, 0)
        for a, al in reps:
            row.append(idx[canon(A.move(gp, a), tuple(N.move(g, x) for x in al))])
        act.append(row)
    return GSet(G, points, act, based=True)


@dataclass
class SmashLevel:
    lhs: GSet
    rhs: GSet
    iso: GMap | None

    def verify(self) -> bool:
        return self.iso is not None and self.iso.is_iso()


def block_sum(m: int, n: int, s: int, t: int) -> int:
    """``s + t`` in ``Sigma_{m+n}`` for ``s`` in Sigma_m, ``t`` in Sigma_n."""
    a = symmetric_group(m).elements[s].images
    b = symmetric_group(n).elements[t].images
    return perm_index(m + n, tuple(a) + tuple(m + x for x in b))


def semifree_smash_level(m: int, A: GSet, X: SymmetricSequence, n: int) -> SmashLevel:
    """Level ``m+n`` of ``G_m A ^ X`` against
    ``Sigma_{m+n} x_{Sigma_m x Sigma_n} (A ^ X_n)``, both over ``G x Sigma_{m+n}``.

    The left side is modelled by triples ``(alpha, a, x)`` with ``alpha: m -> m+n``
    injective and ``x`` in ``X`` evaluated on the complement of ``alpha``
    (ordered increasingly), modulo ``Sigma_m``.
    """
    G = X.group
    k = m + n
    P = sigma_product(G, k)
    PA = A.group.parent
    Xn = X.level(n)
    PX = Xn.group.parent
    Sm, Sn, Sk = symmetric_group(m), symmetric_group(n), symmetric_group(k)

    def canon(alpha, a, x):
        best = None
        for s in range(Sm.order):
            sinv = Sm.elements[Sm.inv[s]].images
            cand = (tuple(alpha[sinv[i]] for i in range(m)), A.move(PA.pair(0, s), a), x)
            if best is None or cand < best:
                best = cand
        return best

    triples = sorted({canon(al, a, x) for al in itertools.permutations(range(k), m)
                      for a in range(1, len(A.points)) for x in range(1, len(Xn.points))})
    idx = {t: i + 1 for i, t in enumerate(triples)}

    def complement(al):
        im = set(al)
        return [j for j in range(k) if j not in im]

    def move(x_el, t):
        g, s = P.split(x_el)
        tau = Sk.elements[s].images
        al, a, x = t
        al2 = tuple(tau[i] for i in al)
        c1, c2 = complement(al), complement(al2)
        pos2 = {v: j for j, v in enumerate(c2)}
        pi = perm_index(n, [pos2[tau[v]] for v in c1])
        return canon(al2, A.move(PA.pair(g, 0), a), Xn.move(PX.pair(g, pi), x))

    lhs_points = [BASE] + [(al, A.points[a], Xn.points[x]) for al, a, x in triples]
    lhs_act = [[0] + [idx[move(xe, t)] for t in triples] for xe in range(P.order)]
    lhs = GSet(P, lhs_points, lhs_act, based=True)

    # right side: induction from G x Sigma_m x Sigma_n
    S = Subgroup(P, [P.pair(g, block_sum(m, n, s, t)) for g in range(G.order)
                     for s in range(Sm.order) for t in range(Sn.order)], check=False)
    decode = {P.pair(g, block_sum(m, n, s, t)): (g, s, t) for g in range(G.order)
              for s in range(Sm.order) for t in range(Sn.order)}
    pairs = [(a, x) for a in range(1, len(A.points)) for x in range(1, len(Xn.points))]
    pidx = {p: i + 1 for i, p in enumerate(pairs)}
    inner_act = []
    for e in S.elements:
        g, s, t = decode[e]
        ga, gx = PA.pair(g, s), PX.pair(g, t)
        inner_act.append([0] + [pidx[(A.move(ga, a), Xn.move(gx, x))] for a, x in pairs])
    inner = GSet(S, [BASE] + [(A.points[a], Xn.points[x]) for a, x in pairs], inner_act, based=True)
    rhs = induce(P, inner)
    return SmashLevel(lhs, rhs, iso_test(lhs, rhs))


# ---------------------------------------------------------------------------
# twisting and evaluation

@dataclass
class TwistEvaluation:
    pulled_back: GSet   # j^* X_n
    evaluated: GSet     # X(M)
    bijection: GMap

    def verify(self) -> bool:
        return self.bijection.is_iso()


def twist_evaluation_bijection(X: SymmetricSequence, H: Subgroup, M_points: Sequence, M_action, alpha: Homomorphism) -> TwistEvaluation:
    """For ``M`` an ``H``-set identified with ``n`` by listing its points, compare
    ``X_n`` pulled back along ``j(h) = (h, alpha(h))`` with ``X(M)``; the
    bijection is the identity on representatives."""
    n = len(M_points)
    Xn = X.level(n)
    P = Xn.group.parent
    pulled = GSet(H, Xn.points, [Xn.act[P.full().position[P.pair(h, alpha(h))]] for h in H.elements],
                  based=True)
    pos = {u: i for i, u in enumerate(M_points)}
    M = GSet(H, range(n), [[pos[M_action(h, u)] for u in M_points] for h in H.elements])
    ev = evaluate(X, M).gset
    return TwistEvaluation(pulled, ev, GMap(pulled, ev, list(range(len(Xn.points)))))
