"""Pure Python / numpy implementations of the hot kernels.

Same signatures and results as the compiled ``_ckernels`` module; used when the
extension is not built and as the reference side of the kernel benchmark.
"""
from collections import deque

import numpy as np

BACKEND = "python"


def mult_table(images):
    """``table[i, j]`` = index of ``images[i] o images[j]`` in the sorted row list."""
    images = np.ascontiguousarray(images, dtype=np.int64)
    n, d = images.shape
    comp = images[:, images]  # comp[i, j, x] = images[i][images[j][x]]
    if d <= 15:
        weights = d ** np.arange(d - 1, -1, -1, dtype=np.int64)
        keys = images @ weights
        ckeys = comp.reshape(n * n, d) @ weights
        pos = np.searchsorted(keys, ckeys)
        pos = np.minimum(pos, n - 1)
        if not np.array_equal(keys[pos], ckeys):
            raise ValueError("element list is not closed under composition")
        return pos.reshape(n, n).astype(np.int32)
    index = {tuple(row): k for k, row in enumerate(images.tolist())}
    out = np.empty((n, n), dtype=np.int32)
    for i in range(n):
        for j in range(n):
            key = tuple(comp[i, j].tolist())
            if key not in index:
                raise ValueError("element list is not closed under composition")
            out[i, j] = index[key]
    return out


def closure(table, gens):
    n = table.shape[0]
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    frontier = [0]
    gens = [int(g) for g in gens]
    tab = table.tolist()
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = tab[s][x]
                if not seen[y]:
                    seen[y] = True
                    nxt.append(y)
        frontier = nxt
    return seen


def orbit_labels(action):
    action = np.asarray(action)
    n_pts = action.shape[1]
    labels = np.full(n_pts, -1, dtype=np.int32)
    for p in range(n_pts):
        if labels[p] < 0:
            labels[action[:, p]] = p
    return labels


def double_coset_labels(table, left, right):
    n = table.shape[0]
    labels = np.full(n, -1, dtype=np.int32)
    left = np.asarray(left, dtype=np.int64)
    right = np.asarray(right, dtype=np.int64)
    for g in range(n):
        if labels[g] < 0:
            kg = table[left, g]
            members = table[np.ix_(kg, right)]
            labels[members.ravel()] = g
    return labels


def extend_action(table, gens, gen_actions):
    """Extend generator actions to the whole group by breadth-first words.

    Returns ``(act, ok)``; ``ok`` is False when two words for the same element
    disagree, i.e. the generator data does not define an action.
    """
    n = table.shape[0]
    gen_actions = np.asarray(gen_actions, dtype=np.int32)
    n_pts = gen_actions.shape[1] if gen_actions.ndim == 2 else 0
    act = np.full((n, n_pts), -1, dtype=np.int32)
    done = np.zeros(n, dtype=bool)
    act[0] = np.arange(n_pts, dtype=np.int32)
    done[0] = True
    queue = deque([0])
    ok = True
    while queue:
        x = queue.popleft()
        for k, s in enumerate(gens):
            y = table[s, x]
            cand = gen_actions[k][act[x]]
            if not done[y]:
                act[y] = cand
                done[y] = True
                queue.append(y)
            elif ok and not np.array_equal(act[y], cand):
                ok = False
    return act, ok


def extend_hom(src_table, tgt_table, gens, gen_images):
    """Propagate generator images along words; -1 everywhere on conflict."""
    n = src_table.shape[0]
    img = [-1] * n
    img[0] = 0
    queue = deque([0])
    st = src_table.tolist()
    tt = tgt_table.tolist()
    pairs = list(zip((int(g) for g in gens), (int(v) for v in gen_images)))
    while queue:
        x = queue.popleft()
        ix = img[x]
        for s, v in pairs:
            y = st[s][x]
            cand = tt[v][ix]
            if img[y] < 0:
                img[y] = cand
                queue.append(y)
            elif img[y] != cand:
                return np.full(n, -1, dtype=np.int32)
    return np.asarray(img, dtype=np.int32)


def level_stabilizers(action, n_values):
    """Distinct stabilizers of all functions points -> range(n_values).

    Stabilizers are packed bitmasks over group elements (uint64 words). The
    witness for each mask is the first function code producing it, digits in
    base ``n_values`` with point ``p`` at weight ``n_values**p``.
    """
    action = np.asarray(action, dtype=np.int64)
    n_g, n_p = action.shape
    n_words = (n_g + 63) // 64
    total = n_values ** n_p
    codes = np.arange(total, dtype=np.int64)
    digits = (codes[:, None] // (n_values ** np.arange(n_p, dtype=np.int64))) % n_values
    masks = np.zeros((total, n_words), dtype=np.uint64)
    for g in range(n_g):
        # f is g-invariant iff f(g.p) == f(p) for every p
        fixed = np.all(digits[:, action[g]] == digits, axis=1)
        masks[fixed, g // 64] |= np.uint64(1) << np.uint64(g % 64)
    _, first = np.unique(masks, axis=0, return_index=True)
    first = np.sort(first)
    return masks[first], codes[first]
