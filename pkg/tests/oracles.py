"""Independent brute-force oracles shared by the test modules.

Nothing here calls into the library except for group construction and
multiplication tables, so agreement with the library is meaningful.
"""
import itertools


def brute_subgroups(G):
    """Every subset closed under the product, found by growing closures."""
    tab = G.tab
    seen = {frozenset([0])}
    frontier = [frozenset([0])]
    while frontier:
        nxt = []
        for S in frontier:
            for g in range(G.order):
                if g in S:
                    continue
                closed = set(S) | {g}
                grew = True
                while grew:
                    grew = False
                    for a, b in itertools.product(list(closed), repeat=2):
                        c = tab[a][b]
                        if c not in closed:
                            closed.add(c)
                            grew = True
                fs = frozenset(closed)
                if fs not in seen:
                    seen.add(fs)
                    nxt.append(fs)
        frontier = nxt
    return seen


def brute_double_cosets(G, K, H):
    """Distinct sets ``K g H`` as frozensets of parent indices."""
    tab = G.tab
    return {frozenset(tab[tab[k][g]][h] for k in K for h in H) for g in range(G.order)}


def brute_homomorphisms(src, tgt):
    """Count maps on all elements satisfying f(ab) = f(a)f(b); small groups only."""
    st, tt = src.tab, tgt.tab
    n = src.order
    count = 0
    for images in itertools.product(range(tgt.order), repeat=n):
        if images[0] != 0:
            continue
        if all(images[st[a][b]] == tt[images[a]][images[b]] for a in range(n) for b in range(n)):
            count += 1
    return count


def brute_conjugacy_classes(G, subgroups):
    tab, inv = G.tab, G.inv
    classes = set()
    for S in subgroups:
        orbit = frozenset(frozenset(tab[tab[g][s]][inv[g]] for s in S) for g in range(G.order))
        classes.add(orbit)
    return classes


def action_laws_hold(X):
    G = X.group
    par = G.parent
    pos = G.position
    n = len(X.points)
    if X.act[pos[0]] != list(range(n)):
        return False
    for a in G.elements:
        for b in G.elements:
            ab = X.act[pos[par.tab[a][b]]]
            ra, rb = X.act[pos[a]], X.act[pos[b]]
            if any(ab[p] != ra[rb[p]] for p in range(n)):
                return False
    return True


def brute_orbit_count(X):
    seen, count = set(), 0
    for p in range(len(X.points)):
        if p in seen:
            continue
        count += 1
        seen.update(row[p] for row in X.act)
    return count


def brute_equivariant_maps(X, Y):
    """All functions X -> Y commuting with every group element."""
    G = X.group
    count = 0
    for f in itertools.product(range(len(Y.points)), repeat=len(X.points)):
        ok = all(Y.act[k][f[p]] == f[X.act[k][p]]
                 for k in range(len(G.elements)) for p in range(len(X.points)))
        count += ok
    return count


def brute_equivariant_injections(M, N, H):
    pos = M.group.position
    out = []
    for a in itertools.permutations(range(len(N.points)), len(M.points)):
        if all(N.act[pos[h]][a[x]] == a[M.act[pos[h]][x]] for h in H.elements for x in range(len(M.points))):
            out.append(a)
    return out


def brute_vector_stabilizers(K, U, copies, values=3):
    """Exact K-stabilizers of every vector on ``copies`` copies of each class of
    ``U`` with coefficients in ``range(values)``, enumerated over the whole window."""
    import numpy as np

    W = U.window(copies).restrict(K)
    n = len(W.points)
    perm = np.array(W.act, dtype=np.int64)
    codes = np.arange(values ** n, dtype=np.int64)
    digits = (codes[:, None] // (values ** np.arange(n, dtype=np.int64))) % values
    fixed = np.stack([np.all(digits[:, perm[k]] == digits, axis=1) for k in range(K.order)], axis=1)
    return {tuple(K.elements[i] for i in np.nonzero(row)[0]) for row in np.unique(fixed, axis=0)}


def brute_transfer_basis_size(H, M, U, T, admissible):
    """Count H-conjugacy classes of pairs (K, a): K <= H admissible, a a
    K-equivariant injection of M into copies < T of U. Pairs are orbits under
    h.(K, a) = (hKh^-1, h a h^-1), found by union-find over all pairs."""
    G = U.group
    tab, inv = G.tab, G.inv
    W = U.window(T)
    pts = W.points
    subgroups = [K for K in brute_subgroups_of(H) if admissible(K)]
    pairs = []
    for K in subgroups:
        for a in itertools.permutations(range(len(pts)), len(M.points)):
            alpha = tuple(pts[y] for y in a)
            ok = all(U.act(k, alpha[x]) == alpha[M.move(k, x)]
                     for k in K for x in range(len(alpha)))
            if ok:
                pairs.append((K, alpha))
    index = {p: i for i, p in enumerate(pairs)}
    parent = list(range(len(pairs)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for (K, alpha), i in index.items():
        for h in H:
            K2 = frozenset(tab[tab[h][k]][inv[h]] for k in K)
            a2 = tuple(U.act(h, alpha[M.move(inv[h], x)]) for x in range(len(alpha)))
            j = index[(K2, a2)]
            parent[find(i)] = find(j)
    return len({find(i) for i in range(len(pairs))})


def brute_subgroups_of(H):
    """Subgroups of H as frozensets, by filtering closed subsets of H."""
    G = H.parent
    elems = list(H.elements)
    return [S for S in brute_subgroups_restricted(G, elems)]


def brute_subgroups_restricted(G, elems):
    allowed = set(elems)
    tab = G.tab
    seen = {frozenset([0])}
    frontier = [frozenset([0])]
    while frontier:
        nxt = []
        for S in frontier:
            for g in allowed - S:
                closed = set(S) | {g}
                grew = True
                while grew:
                    grew = False
                    for a, b in itertools.product(list(closed), repeat=2):
                        if tab[a][b] not in closed:
                            closed.add(tab[a][b])
                            grew = True
                fs = frozenset(closed)
                if fs not in seen:
                    seen.add(fs)
                    nxt.append(fs)
        frontier = nxt
    return sorted(seen, key=lambda s: (len(s), sorted(s)))


def brute_orbits_on_cosets(K, H, J):
    """Stabilizers (as frozensets) of J acting on left cosets kH, one per orbit."""
    G = K.parent
    tab = G.tab
    cosets = {frozenset(tab[k][h] for h in H.elements) for k in K.elements}
    out, seen = [], set()
    for c in sorted(cosets, key=min):
        if c in seen:
            continue
        orbit = {frozenset(tab[j][x] for x in c) for j in J.elements}
        seen |= orbit
        out.append(frozenset(j for j in J.elements if frozenset(tab[j][x] for x in c) == c))
    return out
