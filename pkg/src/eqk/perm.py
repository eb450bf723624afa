"""Finite permutation groups, subgroups, homomorphisms and coset combinatorics.

Conventions used across the package:

* ``p * q`` is composition, ``(p * q)(x) == p(q(x))``; groups act on the left.
* The elements of a :class:`Group` are sorted lexicographically by image
  sequence, so the identity has index 0. Everything downstream refers to group
  elements by this index.
* A :class:`Subgroup` is a sorted tuple of element indices of its parent; that
  tuple is its canonical form. Functions that take "a group" accept either a
  :class:`Group` or a :class:`Subgroup` and work inside the ambient group.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence, Union

import numpy as np

from . import kernels
from .config import DEFAULT_HOM_BUDGET, max_group_order
from .errors import (
    BudgetExceeded,
    NotAGraph,
    NotNormal,
    OrderCapExceeded,
    ParseError,
    SubgroupMismatch,
)


class Perm:
    """A bijection of ``{0, ..., degree-1}`` stored as its image sequence."""

    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        images = tuple(int(x) for x in images)
        if sorted(images) != list(range(len(images))):
            raise ParseError(f"not a permutation: {images}")
        self.images = images

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, cycles: Sequence[Sequence[int]], degree: int) -> "Perm":
        images = list(range(degree))
        seen = set()
        for cyc in cycles:
            for a in cyc:
                if a in seen or not 0 <= a < degree:
                    raise ParseError(f"bad cycle notation {cycles!r}")
                seen.add(a)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                images[a] = b
        return cls(images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Perm") -> "Perm":
        a = self.images
        return Perm(a[x] for x in other.images)

    def inverse(self) -> "Perm":
        inv = [0] * len(self.images)
        for i, x in enumerate(self.images):
            inv[x] = i
        return Perm(inv)

    def __eq__(self, other):
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __lt__(self, other: "Perm") -> bool:
        return self.images < other.images

    def cycles(self) -> list[tuple[int, ...]]:
        out, seen = [], set()
        for start in range(len(self.images)):
            if start in seen or self.images[start] == start:
                continue
            cyc, x = [], start
            while x not in seen:
                seen.add(x)
                cyc.append(x)
                x = self.images[x]
            out.append(tuple(cyc))
        return out

    def cycle_string(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)

    def __repr__(self):
        return f"Perm({self.cycle_string()})"


class Group:
    """A finite permutation group with canonically ordered elements.

    ``table[i, j]`` is the index of ``elements[i] * elements[j]``.
    """

    def __init__(self, elements: Sequence[Perm], generators: Sequence[Perm],
                 name: str | None = None, table: np.ndarray | None = None,
                 factors: tuple["Group", ...] | None = None):
        self.elements: tuple[Perm, ...] = tuple(sorted(elements))
        self.degree = self.elements[0].degree if self.elements else 0
        self.order = len(self.elements)
        self.generators: tuple[Perm, ...] = tuple(generators)
        self.name = name or f"perm-group(order {self.order})"
        self.factors = factors
        self._index = {p.images: i for i, p in enumerate(self.elements)}
        if table is None:
            table = kernels.mult_table(np.array([p.images for p in self.elements],
                                                dtype=np.int64).reshape(self.order, self.degree))
        self.table = np.ascontiguousarray(table, dtype=np.int32)
        self.tab = self.table.tolist()
        inv = np.empty(self.order, dtype=np.int32)
        rows, cols = np.nonzero(self.table == 0)
        inv[rows] = cols
        self.inv = inv.tolist()

    @classmethod
    def from_generators(cls, generators: Sequence[Perm], degree: int | None = None,
                        name: str | None = None, cap: int | None | bool = True) -> "Group":
        """Closure of ``generators``; ``cap=True`` uses the configured order cap,
        ``None``/``False`` disables it."""
        if cap is True:
            cap = max_group_order()
        gens = list(generators)
        if degree is None:
            degree = gens[0].degree if gens else 1
        gens = [g for g in gens if g.degree == degree] if gens else []
        if any(g.degree != degree for g in generators):
            raise ParseError("generators of different degrees")
        ident = Perm.identity(degree)
        seen = {ident.images}
        frontier = [ident.images]
        gen_images = [g.images for g in gens]
        while frontier:
            nxt = []
            for x in frontier:
                for s in gen_images:
                    y = tuple(s[i] for i in x)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
                        if cap and len(seen) > cap:
                            raise OrderCapExceeded(
                                f"group order exceeds cap {cap} (set EQK_MAX_GROUP_ORDER to raise it)")
            frontier = nxt
        return cls([Perm(x) for x in seen], gens or [ident], name=name)

    def __repr__(self):
        return f"<Group {self.name} order={self.order} degree={self.degree}>"

    def __len__(self):
        return self.order

    def index(self, perm: Perm | Sequence[int]) -> int:
        key = perm.images if isinstance(perm, Perm) else tuple(perm)
        try:
            return self._index[key]
        except KeyError:
            raise SubgroupMismatch(f"{key} is not an element of {self.name}") from None

    def mul(self, i: int, j: int) -> int:
        return self.tab[i][j]

    def conj(self, g: int, x: int) -> int:
        """``g x g^-1``."""
        return self.tab[self.tab[g][x]][self.inv[g]]

    @cached_property
    def element_orders(self) -> tuple[int, ...]:
        orders = []
        for i in range(self.order):
            k, x = 1, i
            while x != 0:
                x = self.tab[i][x]
                k += 1
            orders.append(k)
        return tuple(orders)

    def full(self) -> "Subgroup":
        return self._full

    @cached_property
    def _full(self) -> "Subgroup":
        return Subgroup(self, range(self.order), check=False)

    def trivial(self) -> "Subgroup":
        return Subgroup(self, (0,), check=False)

    def generate(self, gens: Iterable[int]) -> "Subgroup":
        gens = sorted(set(int(g) for g in gens))
        if not gens:
            return self.trivial()
        seen = kernels.closure(self.table, np.array(gens, dtype=np.int32))
        return Subgroup(self, np.nonzero(seen)[0].tolist(), check=False)

    # direct products keep their factors so pairs can be split again
    def pair(self, a: int, b: int) -> int:
        return a * self.factors[1].order + b

    def split(self, x: int) -> tuple[int, int]:
        return divmod(x, self.factors[1].order)


GroupLike = Union[Group, "Subgroup"]


class Subgroup:
    """A subgroup of ``parent`` given by its sorted element indices."""

    def __init__(self, parent: Group, elements: Iterable[int], check: bool = True):
        self.parent = parent
        self.elements: tuple[int, ...] = tuple(sorted(set(int(e) for e in elements)))
        self._set = frozenset(self.elements)
        if check:
            tab = parent.tab
            if not self.elements or self.elements[0] != 0:
                raise SubgroupMismatch("subset does not contain the identity")
            for a in self.elements:
                for b in self.elements:
                    if tab[a][b] not in self._set:
                        raise SubgroupMismatch("subset is not closed under multiplication")

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return x in self._set

    def __eq__(self, other):
        return (isinstance(other, Subgroup) and self.parent is other.parent
                and self.elements == other.elements)

    def __hash__(self):
        return hash((id(self.parent), self.elements))

    def sort_key(self):
        return (len(self.elements), self.elements)

    def __lt__(self, other: "Subgroup") -> bool:
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        return f"<Subgroup order={self.order} of {self.parent.name}: {self.label}>"

    @cached_property
    def mask(self) -> int:
        m = 0
        for e in self.elements:
            m |= 1 << e
        return m

    @cached_property
    def position(self) -> dict[int, int]:
        return {e: k for k, e in enumerate(self.elements)}

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """A small generating set, chosen greedily by decreasing element order."""
        orders = self.parent.element_orders
        cands = sorted((e for e in self.elements if e != 0), key=lambda e: (-orders[e], e))
        gens: list[int] = []
        current = {0}
        for e in cands:
            if e in current:
                continue
            gens.append(e)
            current = set(self.parent.generate(gens).elements)
            if len(current) == self.order:
                break
        return tuple(sorted(gens))

    @property
    def label(self) -> str:
        if self.order == 1:
            return "1"
        if self.order == self.parent.order:
            return self.parent.name
        gens = ", ".join(self.parent.elements[g].cycle_string() for g in self.generators)
        return f"<{gens}>"

    def trivial(self) -> "Subgroup":
        return self.parent.trivial()

    def full(self) -> "Subgroup":
        return self

    def is_subgroup_of(self, other: "Subgroup") -> bool:
        return self.parent is other.parent and self._set <= other._set

    def conjugate(self, g: int) -> "Subgroup":
        """``g S g^-1``."""
        conj = self.parent.conj
        return Subgroup(self.parent, (conj(g, x) for x in self.elements), check=False)

    def intersection(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.parent, self._set & other._set, check=False)

    def is_normal_in(self, group: GroupLike) -> bool:
        group = as_subgroup(group)
        return all(self.conjugate(g) == self for g in group.generators)

    def left_coset_reps(self, group: GroupLike | None = None) -> list[int]:
        """Minimal representatives of the left cosets ``gS`` inside ``group``."""
        group = as_subgroup(group if group is not None else self.parent)
        tab = self.parent.tab
        seen: set[int] = set()
        reps = []
        for g in group.elements:
            if g in seen:
                continue
            reps.append(g)
            seen.update(tab[g][s] for s in self.elements)
        return reps

    def right_coset_reps(self, group: GroupLike | None = None) -> list[int]:
        """Minimal representatives of the right cosets ``Sg`` inside ``group``."""
        group = as_subgroup(group if group is not None else self.parent)
        tab = self.parent.tab
        seen: set[int] = set()
        reps = []
        for g in group.elements:
            if g in seen:
                continue
            reps.append(g)
            seen.update(tab[s][g] for s in self.elements)
        return reps


def as_subgroup(group: GroupLike) -> Subgroup:
    return group.full() if isinstance(group, Group) else group


def _check_cap(order: int, cap):
    if cap is True:
        cap = max_group_order()
    if cap and order > cap:
        raise OrderCapExceeded(f"group order {order} exceeds cap {cap}")


# ---------------------------------------------------------------------------
# construction

_NAMED = re.compile(r"^([CSAD])(\d+)$")


def _split_top_level(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced parentheses in {text!r}")
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise ParseError(f"unbalanced parentheses in {text!r}")
    parts.append("".join(cur))
    return [p.strip() for p in parts]


def parse_cycles(text: str) -> list[tuple[int, ...]]:
    """Parse ``(0 1 2)(3 4)`` style cycles. A cycle written without separators,
    like ``(01)``, is read digit by digit."""
    text = text.strip()
    if text in ("", "()", "e", "1"):
        return []
    if not re.fullmatch(r"(\s*\([^()]*\)\s*)+", text):
        raise ParseError(f"malformed cycle notation {text!r}")
    cycles = []
    for body in re.findall(r"\(([^()]*)\)", text):
        tokens = [t for t in re.split(r"[\s,]+", body.strip()) if t]
        if len(tokens) == 1 and len(tokens[0]) > 1:
            tokens = list(tokens[0])
        if not all(t.isdigit() for t in tokens):
            raise ParseError(f"malformed cycle {body!r}")
        if tokens:
            cycles.append(tuple(int(t) for t in tokens))
    return cycles


def _cyclic(n: int) -> list[Perm]:
    return [Perm([(i + 1) % n for i in range(n)])]


def _quaternion() -> list[Perm]:
    # units 1,i,j,k,-1,-i,-j,-k as 0..7; basis products as (sign, basis)
    prod = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }

    def mult(a: int, b: int) -> int:
        sa, ba = (1 if a < 4 else -1), a % 4
        sb, bb = (1 if b < 4 else -1), b % 4
        s, basis = prod[(ba, bb)]
        return basis if s * sa * sb > 0 else basis + 4

    return [Perm([mult(u, x) for x in range(8)]) for u in (1, 2)]


def build_group(spec: str, *, cap: int | None | bool = True) -> Group:
    """Build a group from the mini-grammar ``C<n>``, ``S<n>``, ``D<2n>``,
    ``A<n>``, ``Q8``, ``V4``, products ``AxB`` or ``perm: <cycles>, <cycles>, ...``."""
    if not isinstance(spec, str):
        raise ParseError("group spec must be a string")
    raw = spec.strip()
    if raw.lower().startswith("perm:"):
        body = raw[5:]
        gens_txt = [g for g in _split_top_level(body) if g]
        if not gens_txt:
            raise ParseError("perm: needs at least one generator")
        cycle_lists = [parse_cycles(g) for g in gens_txt]
        degree = 1 + max((a for cl in cycle_lists for c in cl for a in c), default=0)
        gens = [Perm.from_cycles(cl, degree) for cl in cycle_lists]
        name = "perm:" + ",".join(g.cycle_string() for g in gens)
        return Group.from_generators(gens, degree, name=name, cap=cap)
    compact = re.sub(r"\s+", "", raw)
    factors = re.split(r"[x×]", compact)
    if len(factors) > 1:
        parts = [build_group(f, cap=None) for f in factors]
        P = parts[0]
        for F in parts[1:]:
            P = direct_product(P, F)
        _check_cap(P.order, cap)
        return P
    if compact == "Q8":
        return Group.from_generators(_quaternion(), 8, name="Q8", cap=cap)
    if compact == "V4":
        gens = [Perm.from_cycles([(0, 1), (2, 3)], 4), Perm.from_cycles([(0, 2), (1, 3)], 4)]
        return Group.from_generators(gens, 4, name="V4", cap=cap)
    m = _NAMED.match(compact)
    if not m:
        raise ParseError(f"unrecognised group spec {spec!r}")
    kind, n = m.group(1), int(m.group(2))
    if n < 1:
        raise ParseError(f"group parameter must be positive in {spec!r}")
    if kind == "C":
        gens = _cyclic(n)
        degree = n
    elif kind == "S":
        if cap is not False and cap is not None and math.factorial(n) > (max_group_order() if cap is True else cap):
            raise OrderCapExceeded(f"S{n} has order {math.factorial(n)}")
        degree = n
        gens = [Perm.identity(n)] if n == 1 else [Perm.from_cycles([(0, 1)], n), _cyclic(n)[0]]
    elif kind == "A":
        if cap is not False and cap is not None and math.factorial(n) // 2 > (max_group_order() if cap is True else cap):
            raise OrderCapExceeded(f"A{n} has order {math.factorial(n) // 2}")
        degree = n
        gens = [Perm.from_cycles([(0, 1, i)], n) for i in range(2, n)] or [Perm.identity(n)]
    else:
        if n % 2:
            raise ParseError(f"dihedral groups are written D<2n>, got {spec!r}")
        k = n // 2
        if k == 1:
            degree, gens = 2, _cyclic(2)
        elif k == 2:
            degree = 4
            gens = [Perm.from_cycles([(0, 1), (2, 3)], 4), Perm.from_cycles([(0, 2), (1, 3)], 4)]
        else:
            degree = k
            gens = [_cyclic(k)[0], Perm([(-i) % k for i in range(k)])]
    return Group.from_generators(gens, degree, name=compact, cap=cap)


_SYMMETRIC: dict[int, Group] = {}


def symmetric_group(n: int) -> Group:
    """Sigma_n on ``n`` points, uncapped (internal constructions)."""
    if n not in _SYMMETRIC:
        if n <= 1:
            _SYMMETRIC[n] = Group([Perm(range(n)) if n else Perm(())], [Perm(range(n))], name=f"S{n}",
                                  table=np.zeros((1, 1), dtype=np.int32))
        else:
            elems = [Perm(p) for p in itertools.permutations(range(n))]
            gens = [Perm.from_cycles([(0, 1)], n), _cyclic(n)[0]]
            _SYMMETRIC[n] = Group(elems, gens, name=f"S{n}")
    return _SYMMETRIC[n]


_PRODUCTS: dict[tuple, Group] = {}


def direct_product(G: Group, K: Group) -> Group:
    """``G x K`` acting on ``degree(G) + degree(K)`` points.

    Element ``(a, b)`` has index ``a * |K| + b``; this is also the
    lexicographic order of the concatenated image sequences.
    """
    key = (G, K)
    if key in _PRODUCTS:
        return _PRODUCTS[key]
    dG = G.degree
    elems = [Perm(a.images + tuple(x + dG for x in b.images)) for a in G.elements for b in K.elements]
    eG, eK = Perm.identity(G.degree), Perm.identity(K.degree)
    gens = [Perm(g.images + tuple(x + dG for x in eK.images)) for g in G.generators]
    gens += [Perm(eG.images + tuple(x + dG for x in k.images)) for k in K.generators]
    nK = K.order
    table = (G.table[:, None, :, None] * nK + K.table[None, :, None, :]).reshape(G.order * nK, G.order * nK)
    P = Group(elems, gens, name=f"{G.name}x{K.name}", table=table, factors=(G, K))
    _PRODUCTS[key] = P
    return P


def quotient_group(group: GroupLike, normal: Subgroup) -> tuple[Group, "Homomorphism"]:
    """``G/N`` as a permutation group on the left cosets of ``N`` together with
    the projection homomorphism."""
    G = as_subgroup(group)
    if not normal.is_subgroup_of(G) or not normal.is_normal_in(G):
        raise NotNormal(f"{normal.label} is not normal in {G.label}")
    parent = G.parent
    reps = normal.left_coset_reps(G)
    coset_of = {}
    tab = parent.tab
    for c, r in enumerate(reps):
        for n in normal.elements:
            coset_of[tab[r][n]] = c
    def image(g):
        return Perm(coset_of[tab[g][r]] for r in reps)
    gens = [image(g) for g in G.generators]
    Q = Group.from_generators(gens or [Perm.identity(len(reps))], len(reps),
                              name=f"{G.label}/{normal.label}", cap=None)
    images = tuple(Q.index(image(g)) for g in G.elements)
    return Q, Homomorphism(G, Q.full(), images)


# ---------------------------------------------------------------------------
# subgroup lattice

_SUBGROUP_CACHE: dict[tuple, list[Subgroup]] = {}


def enumerate_subgroups(group: GroupLike, *, cap: int | None | bool = True) -> list[Subgroup]:
    """All subgroups, ordered by ``(order, elements)``.

    Cyclic subgroups first, then closure under joins with cyclic subgroups
    until nothing new appears.
    """
    G = as_subgroup(group)
    _check_cap(G.order, cap)
    key = (G.parent, G.elements)   # the key keeps the parent alive
    if key in _SUBGROUP_CACHE:
        return list(_SUBGROUP_CACHE[key])
    parent = G.parent
    table = parent.table
    cyclic: dict[int, Subgroup] = {}
    for g in G.elements:
        seen = kernels.closure(table, np.array([g], dtype=np.int32))
        S = Subgroup(parent, np.nonzero(seen)[0].tolist(), check=False)
        cyclic.setdefault(S.mask, S)
    found: dict[int, Subgroup] = dict(cyclic)
    frontier = list(cyclic.values())
    cyc_list = list(cyclic.values())
    while frontier:
        nxt = []
        for A in frontier:
            for C in cyc_list:
                if C.mask & ~A.mask == 0:
                    continue
                gens = np.array(sorted(set(A.generators) | set(C.generators)), dtype=np.int32)
                seen = kernels.closure(table, gens)
                mask = 0
                idx = np.nonzero(seen)[0].tolist()
                for e in idx:
                    mask |= 1 << e
                if mask not in found:
                    S = Subgroup(parent, idx, check=False)
                    found[mask] = S
                    nxt.append(S)
        frontier = nxt
    result = sorted(found.values())
    _SUBGROUP_CACHE[key] = result
    return list(result)


def subgroup_id(S: Subgroup, group: GroupLike | None = None) -> int:
    """Position of ``S`` in :func:`enumerate_subgroups` of ``group``."""
    subs = enumerate_subgroups(group if group is not None else S.parent, cap=None)
    return subs.index(S)


def conjugacy_class_rep(S: Subgroup, group: GroupLike) -> Subgroup:
    """Canonical-minimal member of the ``group``-conjugacy class of ``S``."""
    G = as_subgroup(group)
    return min(S.conjugate(g) for g in G.elements)


def conjugacy_classes_of_subgroups(group: GroupLike, *, cap: int | None | bool = True) -> list[list[Subgroup]]:
    G = as_subgroup(group)
    subs = enumerate_subgroups(G, cap=cap)
    remaining = set(subs)
    classes = []
    for S in subs:
        if S not in remaining:
            continue
        cls = sorted({S.conjugate(g) for g in G.elements})
        remaining.difference_update(cls)
        classes.append(cls)
    classes.sort(key=lambda c: c[0].sort_key())
    return classes


def normal_subgroups(group: GroupLike) -> list[Subgroup]:
    G = as_subgroup(group)
    return [S for S in enumerate_subgroups(G, cap=None) if S.is_normal_in(G)]


@dataclass(frozen=True)
class DoubleCoset:
    rep: int
    elements: tuple[int, ...]


def double_cosets(group: GroupLike, K: Subgroup, H: Subgroup) -> list[DoubleCoset]:
    """Classes of ``g ~ k g h^-1``; representative = minimal element; ordered by
    representative."""
    G = as_subgroup(group)
    if not (K.is_subgroup_of(G) and H.is_subgroup_of(G)):
        raise SubgroupMismatch("double_cosets: K and H must be subgroups of G")
    labels = kernels.double_coset_labels(G.parent.table,
                                         np.array(K.elements, dtype=np.int32),
                                         np.array(H.elements, dtype=np.int32))
    buckets: dict[int, list[int]] = {}
    for g in G.elements:
        buckets.setdefault(int(labels[g]), []).append(g)
    return [DoubleCoset(r, tuple(buckets[r])) for r in sorted(buckets)]


# ---------------------------------------------------------------------------
# homomorphisms

class Homomorphism:
    """A map ``source -> target`` stored as target-parent indices aligned with
    ``source.elements``."""

    def __init__(self, source: GroupLike, target: GroupLike, images: Sequence[int]):
        self.source = as_subgroup(source)
        self.target = as_subgroup(target)
        self.images = tuple(int(x) for x in images)
        if len(self.images) != self.source.order:
            raise SubgroupMismatch("homomorphism images misaligned with source")

    def __call__(self, g: int) -> int:
        return self.images[self.source.position[g]]

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.source.elements, self.images))

    def __eq__(self, other):
        return (isinstance(other, Homomorphism) and self.source == other.source
                and self.target == other.target and self.images == other.images)

    def __hash__(self):
        return hash((self.source, self.target, self.images))

    def __repr__(self):
        return f"<Homomorphism {self.source.label} -> {self.target.label}: {self.images}>"

    def is_homomorphism(self) -> bool:
        """Exhaustive check of the homomorphism law on all pairs."""
        sp, tp = self.source.parent, self.target.parent
        f = self.as_dict()
        if f.get(0) != 0:
            return False
        if any(v not in self.target for v in self.images):
            return False
        for a in self.source.elements:
            for b in self.source.elements:
                if f[sp.tab[a][b]] != tp.tab[f[a]][f[b]]:
                    return False
        return True

    def image(self) -> Subgroup:
        return Subgroup(self.target.parent, set(self.images), check=False)

    def kernel(self) -> Subgroup:
        return Subgroup(self.source.parent, (g for g, v in zip(self.source.elements, self.images) if v == 0),
                        check=False)

    def is_injective(self) -> bool:
        return len(set(self.images)) == len(self.images)

    def restrict(self, sub: Subgroup) -> "Homomorphism":
        return Homomorphism(sub, self.target, [self(g) for g in sub.elements])

    def conjugate(self, k: int) -> "Homomorphism":
        """``x -> k f(x) k^-1`` for ``k`` in the target's parent."""
        tp = self.target.parent
        return Homomorphism(self.source, tp.full() if k not in self.target else self.target,
                            [tp.conj(k, v) for v in self.images])


def enumerate_homomorphisms(H: GroupLike, K: GroupLike, *, over: tuple[Homomorphism, Homomorphism] | None = None,
                            budget: int | None = None) -> list[Homomorphism]:
    """All homomorphisms ``H -> K`` sorted by image tuple.

    Backtracking on images of a small generating set of ``H``, with
    order-divisibility pruning and a consistency check after every generator.
    ``over=(proj, target)`` keeps only maps ``a`` with ``proj(a(h)) == target(h)``,
    i.e. lifts of ``target`` along ``proj``.
    """
    H = as_subgroup(H)
    K = as_subgroup(K)
    budget = DEFAULT_HOM_BUDGET if budget is None else budget
    sp, tp = H.parent, K.parent
    gens = list(H.generators)
    if not gens:
        return [Homomorphism(H, K, [0])]
    s_ord, t_ord = sp.element_orders, tp.element_orders
    cands = []
    for s in gens:
        c = [t for t in K.elements if s_ord[s] % t_ord[t] == 0]
        if over is not None:
            proj, target = over
            want = target(s)
            c = [t for t in c if proj(t) == want]
        cands.append(c)
    results: list[Homomorphism] = []
    visited = 0
    gens_arr = np.array(gens, dtype=np.int32)

    def rec(depth: int, chosen: list[int]):
        nonlocal visited
        for t in cands[depth]:
            visited += 1
            if visited > budget:
                raise BudgetExceeded(f"homomorphism search exceeded budget {budget}")
            trial = chosen + [t]
            img = kernels.extend_hom(sp.table, tp.table, gens_arr[: depth + 1],
                                     np.array(trial, dtype=np.int32))
            if img[0] < 0:
                continue
            if depth + 1 == len(gens):
                images = [int(img[g]) for g in H.elements]
                if over is not None:
                    proj, target = over
                    if any(proj(v) != target(g) for g, v in zip(H.elements, images)):
                        continue
                results.append(Homomorphism(H, K, images))
            else:
                rec(depth + 1, trial)

    rec(0, [])
    results.sort(key=lambda f: f.images)
    return results


# ---------------------------------------------------------------------------
# graph subgroups of G x Sigma_n

def graph_subgroup(alpha: Homomorphism, G: Group | None = None) -> Subgroup:
    """``{(h, alpha(h))}`` as a subgroup of ``G x Sigma_n``."""
    G = G or alpha.source.parent
    Sn = alpha.target.parent
    P = direct_product(G, Sn)
    return Subgroup(P, (P.pair(h, alpha(h)) for h in alpha.source.elements), check=False)


def graph_inverse(L: Subgroup) -> tuple[Subgroup, Homomorphism]:
    """Recover ``(H, alpha)`` from a subgroup of ``G x Sigma_n`` meeting
    ``1 x Sigma_n`` trivially; raises :class:`NotAGraph` otherwise."""
    P = L.parent
    if P.factors is None:
        raise NotAGraph("subgroup does not live in a direct product")
    G, Sn = P.factors
    pairs = [P.split(x) for x in L.elements]
    bad = [b for a, b in pairs if a == 0 and b != 0]
    if bad:
        raise NotAGraph(f"subgroup meets 1 x {Sn.name} in {len(bad) + 1} elements")
    mapping = dict(pairs)
    H = Subgroup(G, mapping.keys(), check=False)
    return H, Homomorphism(H, Sn.full(), [mapping[h] for h in H.elements])


def action_homomorphism(H: Subgroup, perms: dict[int, Sequence[int]]) -> Homomorphism:
    """The homomorphism ``H -> Sigma_n`` of an ``H``-action on ``n`` points."""
    n = len(next(iter(perms.values()))) if perms else 0
    Sn = symmetric_group(n)
    return Homomorphism(H, Sn.full(), [Sn.index(perms[h]) for h in H.elements])
