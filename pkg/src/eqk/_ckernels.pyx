# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels. Mirrors ``eqk._pykernels`` exactly."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int32_t, int64_t, uint64_t

cnp.import_array()

BACKEND = "cython"


def mult_table(images):
    cdef cnp.ndarray[int64_t, ndim=2] im = np.ascontiguousarray(images, dtype=np.int64)
    cdef Py_ssize_t n = im.shape[0], d = im.shape[1]
    cdef Py_ssize_t i, j, x, lo, hi, mid
    cdef int64_t key
    if d > 15:
        from . import _pykernels
        return _pykernels.mult_table(images)
    cdef cnp.ndarray[int64_t, ndim=1] keys = np.empty(n, dtype=np.int64)
    for i in range(n):
        key = 0
        for x in range(d):
            key = key * d + im[i, x]
        keys[i] = key
    cdef cnp.ndarray[int32_t, ndim=2] out = np.empty((n, n), dtype=np.int32)
    for i in range(n):
        for j in range(n):
            key = 0
            for x in range(d):
                key = key * d + im[i, im[j, x]]
            lo = 0
            hi = n - 1
            while lo < hi:
                mid = (lo + hi) // 2
                if keys[mid] < key:
                    lo = mid + 1
                else:
                    hi = mid
            if keys[lo] != key:
                raise ValueError("element list is not closed under composition")
            out[i, j] = <int32_t>lo
    return out


def closure(table, gens):
    cdef int32_t[:, :] tab = np.ascontiguousarray(table, dtype=np.int32)
    cdef int32_t[:] gv = np.ascontiguousarray(gens, dtype=np.int32)
    cdef Py_ssize_t n = tab.shape[0], ng = gv.shape[0]
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] seen = np.zeros(n, dtype=np.uint8)
    cdef int32_t[:] stack = np.empty(n, dtype=np.int32)
    cdef Py_ssize_t top = 0, k
    cdef int32_t x, y
    seen[0] = 1
    stack[0] = 0
    top = 1
    while top > 0:
        top -= 1
        x = stack[top]
        for k in range(ng):
            y = tab[gv[k], x]
            if not seen[y]:
                seen[y] = 1
                stack[top] = y
                top += 1
    return seen.astype(bool)


def orbit_labels(action):
    cdef int32_t[:, :] act = np.ascontiguousarray(action, dtype=np.int32)
    cdef Py_ssize_t ng = act.shape[0], npts = act.shape[1], p, g
    cdef cnp.ndarray[int32_t, ndim=1] labels = np.full(npts, -1, dtype=np.int32)
    for p in range(npts):
        if labels[p] < 0:
            for g in range(ng):
                labels[act[g, p]] = <int32_t>p
    return labels


def double_coset_labels(table, left, right):
    cdef int32_t[:, :] tab = np.ascontiguousarray(table, dtype=np.int32)
    cdef int32_t[:] lv = np.ascontiguousarray(left, dtype=np.int32)
    cdef int32_t[:] rv = np.ascontiguousarray(right, dtype=np.int32)
    cdef Py_ssize_t n = tab.shape[0], g, a, b
    cdef int32_t kg
    cdef cnp.ndarray[int32_t, ndim=1] labels = np.full(n, -1, dtype=np.int32)
    for g in range(n):
        if labels[g] < 0:
            for a in range(lv.shape[0]):
                kg = tab[lv[a], g]
                for b in range(rv.shape[0]):
                    labels[tab[kg, rv[b]]] = <int32_t>g
    return labels


def extend_action(table, gens, gen_actions):
    cdef int32_t[:, :] tab = np.ascontiguousarray(table, dtype=np.int32)
    cdef int32_t[:] gv = np.ascontiguousarray(gens, dtype=np.int32)
    ga_arr = np.ascontiguousarray(gen_actions, dtype=np.int32)
    cdef Py_ssize_t n = tab.shape[0], ng = gv.shape[0]
    cdef Py_ssize_t npts = ga_arr.shape[1] if ga_arr.ndim == 2 else 0
    if ga_arr.ndim != 2:
        ga_arr = np.zeros((ng, 0), dtype=np.int32)
    cdef int32_t[:, :] ga = ga_arr
    act_arr = np.full((n, npts), -1, dtype=np.int32)
    cdef int32_t[:, :] act = act_arr
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] done = np.zeros(n, dtype=np.uint8)
    cdef int32_t[:] queue = np.empty(n, dtype=np.int32)
    cdef Py_ssize_t head = 0, tail = 0, k, p
    cdef int32_t x, y
    cdef bint ok = True
    for p in range(npts):
        act[0, p] = <int32_t>p
    done[0] = 1
    queue[tail] = 0
    tail += 1
    while head < tail:
        x = queue[head]
        head += 1
        for k in range(ng):
            y = tab[gv[k], x]
            if not done[y]:
                for p in range(npts):
                    act[y, p] = ga[k, act[x, p]]
                done[y] = 1
                queue[tail] = y
                tail += 1
            elif ok:
                for p in range(npts):
                    if act[y, p] != ga[k, act[x, p]]:
                        ok = False
                        break
    return act_arr, bool(ok)


def extend_hom(src_table, tgt_table, gens, gen_images):
    cdef int32_t[:, :] st = np.ascontiguousarray(src_table, dtype=np.int32)
    cdef int32_t[:, :] tt = np.ascontiguousarray(tgt_table, dtype=np.int32)
    cdef int32_t[:] gv = np.ascontiguousarray(gens, dtype=np.int32)
    cdef int32_t[:] iv = np.ascontiguousarray(gen_images, dtype=np.int32)
    cdef Py_ssize_t n = st.shape[0], ng = gv.shape[0], k
    img_arr = np.full(n, -1, dtype=np.int32)
    cdef int32_t[:] img = img_arr
    cdef int32_t[:] queue = np.empty(n, dtype=np.int32)
    cdef Py_ssize_t head = 0, tail = 0
    cdef int32_t x, y, cand
    img[0] = 0
    queue[tail] = 0
    tail += 1
    while head < tail:
        x = queue[head]
        head += 1
        for k in range(ng):
            y = st[gv[k], x]
            cand = tt[iv[k], img[x]]
            if img[y] < 0:
                img[y] = cand
                queue[tail] = y
                tail += 1
            elif img[y] != cand:
                return np.full(n, -1, dtype=np.int32)
    return img_arr


def level_stabilizers(action, int n_values):
    cdef int32_t[:, :] act = np.ascontiguousarray(action, dtype=np.int32)
    cdef Py_ssize_t ng = act.shape[0], npts = act.shape[1]
    cdef Py_ssize_t n_words = (ng + 63) // 64
    cdef int64_t total = 1, code, c
    cdef Py_ssize_t p, g, w
    for p in range(npts):
        total *= n_values
    cdef int32_t[:] digits = np.zeros(max(npts, 1), dtype=np.int32)
    cdef uint64_t[:] mask = np.zeros(n_words, dtype=np.uint64)
    cdef bint fixed
    seen = {}
    out_masks = []
    out_codes = []
    for code in range(total):
        c = code
        for p in range(npts):
            digits[p] = <int32_t>(c % n_values)
            c //= n_values
        for w in range(n_words):
            mask[w] = 0
        for g in range(ng):
            fixed = True
            for p in range(npts):
                if digits[act[g, p]] != digits[p]:
                    fixed = False
                    break
            if fixed:
                mask[g // 64] |= (<uint64_t>1) << (g % 64)
        key = tuple([mask[w] for w in range(n_words)])
        if key not in seen:
            seen[key] = code
            out_masks.append(key)
            out_codes.append(code)
    return (np.array(out_masks, dtype=np.uint64).reshape(len(out_masks), n_words),
            np.array(out_codes, dtype=np.int64))
