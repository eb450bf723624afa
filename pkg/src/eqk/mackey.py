"""Degree-zero homotopy of free spectra through its transfer basis, with
restriction, transfer and conjugation, the injection-monoid action, and an
orbit-counting oracle for the double coset formula.

A basis element at level ``H`` is the class of a pair ``(K, a)``: ``K <= H`` with
``(K, H)`` transfer-admissible and ``a: M -> U`` a ``K``-equivariant injection,
up to ``H``-conjugation ``h.(K, a) = (hKh^-1, h a h^-1)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import ConsistencyError, SubgroupMismatch, TransferNotAdmissible, WindowExceeded
from .gset import GSet, equivariant_injections, orbit_gset, orbits_and_stabilizers, trivial_gset
from .injmonoid import TameModule, UInjection
from .perm import Group, Subgroup, double_cosets, enumerate_subgroups
from .universe import Triple, UniverseSpec, transfer_admissible

Alpha = tuple[Triple, ...]


@dataclass(frozen=True)
class TomDieckBasisElement:
    level: Subgroup
    inner: Subgroup
    alpha: Alpha

    @property
    def key(self):
        return (self.inner.order, self.inner.elements, self.alpha)

    def __lt__(self, other):
        return self.key < other.key

    def to_dict(self) -> dict:
        return {"K": list(self.inner.elements), "alpha": [list(u) for u in self.alpha]}


def _conj_pair(U: UniverseSpec, M: GSet, g: int, K: Subgroup, alpha: Alpha) -> tuple[Subgroup, Alpha]:
    G = U.group
    ginv = G.inv[g]
    return K.conjugate(g), tuple(U.act(g, alpha[M.move(ginv, x)]) for x in range(len(alpha)))


def canonical(H: Subgroup, K: Subgroup, alpha: Alpha, M: GSet, U: UniverseSpec) -> TomDieckBasisElement:
    """Minimal representative of the ``H``-conjugacy class of ``(K, alpha)``."""
    best = None
    for h in H.elements:
        K2, a2 = _conj_pair(U, M, h, K, alpha)
        key = (K2.order, K2.elements, a2)
        if best is None or key < best[0]:
            best = (key, K2, a2)
    return TomDieckBasisElement(H, best[1], best[2])


def _check_alpha(K: Subgroup, alpha: Alpha, M: GSet, U: UniverseSpec) -> bool:
    if len(set(alpha)) != len(alpha):
        return False
    return all(U.act(k, alpha[x]) == alpha[M.move(k, x)] for k in K.elements for x in range(len(alpha)))


_BASIS_CACHE: dict = {}


def tomdieck_basis(H: Subgroup, M: GSet, U: UniverseSpec, T: int) -> list[TomDieckBasisElement]:
    """All classes ``[(K, a)]`` with ``a`` landing in copies ``< T``, canonical and sorted."""
    if M.group != U.group.full():
        raise SubgroupMismatch("M must be a G-set over the universe's group")
    key = (U.group, U.classes, H.elements, M.points, tuple(map(tuple, M.act)), T)
    if key in _BASIS_CACHE:
        return list(_BASIS_CACHE[key])
    W = U.window(T)
    out = set()
    for K in enumerate_subgroups(H, cap=None):
        if not transfer_admissible(K, H, U):
            continue
        for a in equivariant_injections(M, W, K):
            out.add(canonical(H, K, tuple(W.points[y] for y in a), M, U))
    res = sorted(out)
    _BASIS_CACHE[key] = res
    return list(res)


@dataclass
class BasisReport:
    basis: list[TomDieckBasisElement]
    rank: int
    stable: bool       # enlarging the window by one copy leaves the rank unchanged

    def to_dict(self) -> dict:
        return {"rank": self.rank, "window_stable": self.stable,
                "basis": [b.to_dict() for b in self.basis]}


def basis_report(H: Subgroup, M: GSet, U: UniverseSpec, T: int) -> BasisReport:
    b = tomdieck_basis(H, M, U, T)
    return BasisReport(b, len(b), len(tomdieck_basis(H, M, U, T + 1)) == len(b))


def monoid_act_basis(phi: UInjection, b: TomDieckBasisElement, M: GSet, U: UniverseSpec,
                     T: int | None = None) -> TomDieckBasisElement:
    """``[(K, phi o a)]``, recanonicalized."""
    alpha = tuple(phi(u) for u in b.alpha)
    if T is not None and any(i >= T for _, i, _ in alpha):
        raise WindowExceeded(f"image leaves the window of {T} copies")
    return canonical(b.level, b.inner, alpha, M, U)


# ---------------------------------------------------------------------------
# elements and structure maps

@dataclass
class MackeyElement:
    level: Subgroup
    coeffs: dict[tuple, int] = field(default_factory=dict)   # (K elements, alpha) -> coefficient

    @classmethod
    def basis(cls, b: TomDieckBasisElement) -> "MackeyElement":
        return cls(b.level, {(b.inner.elements, b.alpha): 1})

    def add(self, K: Subgroup, alpha: Alpha, c: int = 1):
        key = (K.elements, alpha)
        v = self.coeffs.get(key, 0) + c
        if v:
            self.coeffs[key] = v
        else:
            self.coeffs.pop(key, None)

    def __eq__(self, other):
        return isinstance(other, MackeyElement) and self.level == other.level and self.coeffs == other.coeffs

    def terms(self) -> list[tuple[Subgroup, Alpha, int]]:
        par = self.level.parent
        return [(Subgroup(par, k, check=False), a, c)
                for (k, a), c in sorted(self.coeffs.items(), key=lambda kv: (len(kv[0][0]), kv[0]))]

    def plus(self, other: "MackeyElement") -> "MackeyElement":
        if other.level != self.level:
            raise SubgroupMismatch("adding elements at different levels")
        out = MackeyElement(self.level, dict(self.coeffs))
        for K, a, c in other.terms():
            out.add(K, a, c)
        return out

    def to_dict(self) -> dict:
        return {"level": list(self.level.elements),
                "terms": [{"K": list(K.elements), "alpha": [list(u) for u in a], "coeff": c}
                          for K, a, c in self.terms()]}


class MackeyStructure:
    """Structure maps on the transfer basis for a fixed ``(U, M)``."""

    def __init__(self, universe: UniverseSpec, M: GSet | None = None, window: int = 2):
        self.U = universe
        G = universe.group
        self.M = M if M is not None else trivial_gset(G, [])
        self.T = window

    def one(self, H: Subgroup) -> MackeyElement:
        """The class of ``(H, a)`` for the empty ``M`` (the unit of the Burnside ring)."""
        if self.M.points:
            raise SubgroupMismatch("the unit exists only for empty M")
        return MackeyElement(H, {(H.elements, ()): 1})

    def element(self, b: TomDieckBasisElement) -> MackeyElement:
        return MackeyElement.basis(b)

    def _canon(self, level: Subgroup, K: Subgroup, alpha: Alpha) -> TomDieckBasisElement:
        return canonical(level, K, alpha, self.M, self.U)

    def res(self, J: Subgroup, x: MackeyElement) -> MackeyElement:
        """``res_J^H [(K, a)] = sum over J\\H/K of [(J n gKg^-1, g.a)]``."""
        H = x.level
        if not J.is_subgroup_of(H):
            raise SubgroupMismatch(f"{J.label} is not a subgroup of {H.label}")
        out = MackeyElement(J)
        for K, alpha, c in x.terms():
            for d in double_cosets(H, J, K):
                K2, a2 = _conj_pair(self.U, self.M, d.rep, K, alpha)
                L = J.intersection(K2)
                if not transfer_admissible(L, J, self.U):
                    raise ConsistencyError(f"restriction produced a non-admissible pair {L.label} <= {J.label}")
                b = self._canon(J, L, a2)
                out.add(b.inner, b.alpha, c)
        return out

    def tr(self, L: Subgroup, x: MackeyElement) -> MackeyElement:
        """``tr_H^L [(K, a)] = [(K, a)]`` at level ``L``; needs ``(H, L)`` admissible."""
        H = x.level
        if not H.is_subgroup_of(L):
            raise SubgroupMismatch(f"{H.label} is not a subgroup of {L.label}")
        if not transfer_admissible(H, L, self.U):
            raise TransferNotAdmissible(f"no transfer from {H.label} to {L.label} in this universe")
        out = MackeyElement(L)
        for K, alpha, c in x.terms():
            if not transfer_admissible(K, L, self.U):
                raise ConsistencyError(f"transfer composite {K.label} <= {L.label} not admissible")
            b = self._canon(L, K, alpha)
            out.add(b.inner, b.alpha, c)
        return out

    def conj(self, g: int, x: MackeyElement) -> MackeyElement:
        """``c_g [(K, a)] = [(gKg^-1, g.a)]`` at level ``gHg^-1``."""
        level = x.level.conjugate(g)
        out = MackeyElement(level)
        for K, alpha, c in x.terms():
            K2, a2 = _conj_pair(self.U, self.M, g, K, alpha)
            b = self._canon(level, K2, a2)
            out.add(b.inner, b.alpha, c)
        return out

    def act(self, phi: UInjection, x: MackeyElement) -> MackeyElement:
        out = MackeyElement(x.level)
        for K, alpha, c in x.terms():
            b = monoid_act_basis(phi, TomDieckBasisElement(x.level, K, alpha), self.M, self.U)
            out.add(b.inner, b.alpha, c)
        return out

    def double_coset_sum(self, J: Subgroup, K: Subgroup, x: MackeyElement) -> MackeyElement:
        """``sum over J\\K/H of tr_{J n gHg^-1}^J c_g res^H_{g^-1 J g n H} (x)``."""
        H = x.level
        G = self.U.group
        out = MackeyElement(J)
        for d in double_cosets(K, J, H):
            g = d.rep
            inner = H.intersection(J.conjugate(G.inv[g]))
            y = self.conj(g, self.res(inner, x))
            out = out.plus(self.tr(J, y))
        return out

    def structure_map(self, kind: str, x: MackeyElement, target: Subgroup | None = None,
                      g: int | None = None) -> MackeyElement:
        if kind == "res":
            return self.res(target, x)
        if kind == "tr":
            return self.tr(target, x)
        if kind == "conj":
            return self.conj(g, x)
        raise ValueError(f"unknown structure map {kind!r}")


def structure_maps(kind: str, x: MackeyElement, U: UniverseSpec, M: GSet | None = None,
                   target: Subgroup | None = None, g: int | None = None) -> MackeyElement:
    return MackeyStructure(U, M).structure_map(kind, x, target, g)


# ---------------------------------------------------------------------------
# orbit oracle for the double coset formula

@dataclass
class OracleReport:
    K: Subgroup
    H: Subgroup
    J: Subgroup
    via_structure: MackeyElement
    via_orbits: MackeyElement

    @property
    def passed(self) -> bool:
        return self.via_structure == self.via_orbits

    def to_dict(self) -> dict:
        return {"K": list(self.K.elements), "H": list(self.H.elements), "J": list(self.J.elements),
                "pass": self.passed, "structure_maps": self.via_structure.to_dict(),
                "orbit_oracle": self.via_orbits.to_dict()}


def burnside_oracle_check(U: UniverseSpec, K: Subgroup, H: Subgroup, J: Subgroup) -> OracleReport:
    """``res_J^K tr_H^K (1)`` by structure maps against the orbit decomposition
    of the ``J``-set ``K/H``: each orbit ``J/S`` contributes ``[(S, empty)]``."""
    S = MackeyStructure(U)
    a = S.res(J, S.tr(K, S.one(H)))
    X = orbit_gset(K, H).restrict(J)
    b = MackeyElement(J)
    for orb in orbits_and_stabilizers(X):
        e = S._canon(J, orb.stabilizer, ())
        b.add(e.inner, e.alpha, 1)
    return OracleReport(K, H, J, a, b)


class TomDieckModule(TameModule):
    """The transfer basis at level ``H`` as a tame module."""

    def __init__(self, H: Subgroup, M: GSet, universe: UniverseSpec):
        super().__init__(universe)
        self.H, self.M = H, M
        self.name = f"A(H[{H.order}],M[{len(M.points)}])"
        self.finite = len(M.points) == 0

    def basis(self, T: int) -> list:
        return tomdieck_basis(self.H, self.M, self.universe, T)

    def support(self, d) -> frozenset:
        return frozenset((c, i) for c, i, _ in d.alpha)

    def act(self, phi: UInjection, d):
        return monoid_act_basis(phi, d, self.M, self.universe)


def find_semistability_witness(H: Subgroup, M: GSet, U: UniverseSpec, T: int = 2):
    """A basis element moved by the shift by its own support, or ``None``."""
    from .injmonoid import shift

    for b in tomdieck_basis(H, M, U, T):
        supp = sorted({(c, i) for c, i, _ in b.alpha})
        phi = shift(U, supp)
        img = monoid_act_basis(phi, b, M, U)
        if img != b:
            return phi, b, img
    return None
