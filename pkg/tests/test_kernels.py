import importlib
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st

import eqk
from eqk import _pykernels, kernels
from eqk.gset import gsets_up_to
from eqk.perm import build_group, enumerate_subgroups

try:
    from eqk import _ckernels
except ImportError:  # extension not built in this environment
    _ckernels = None

needs_ext = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")
NAMES = ("C4", "C6", "S3", "D8", "Q8", "A4", "C2xC2")


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")
    if _ckernels is not None:
        assert kernels.BACKEND == "cython"


def test_fallback_selected_without_extension(monkeypatch):
    monkeypatch.setitem(sys.modules, "eqk._ckernels", None)
    monkeypatch.delattr(eqk, "_ckernels", raising=False)
    try:
        mod = importlib.reload(kernels)
        assert mod.BACKEND == "python"
        assert mod.mult_table is _pykernels.mult_table
    finally:
        monkeypatch.undo()
        importlib.reload(kernels)


def _images(G):
    return np.array([p.images for p in G.elements], dtype=np.int64)


@needs_ext
@pytest.mark.parametrize("name", NAMES)
def test_mult_table_agrees(name):
    G = build_group(name)
    a = _pykernels.mult_table(_images(G))
    b = _ckernels.mult_table(_images(G))
    assert np.array_equal(a, b) and np.array_equal(a, G.table)


@needs_ext
@pytest.mark.parametrize("name", NAMES)
def test_closure_and_double_cosets_agree(name):
    G = build_group(name)
    subs = enumerate_subgroups(G)
    for S in subs:
        gens = np.array(S.generators or (0,), dtype=np.int32)
        assert np.array_equal(_pykernels.closure(G.table, gens), _ckernels.closure(G.table, gens))
        for K in subs:
            l, r = np.array(S.elements, dtype=np.int32), np.array(K.elements, dtype=np.int32)
            assert np.array_equal(_pykernels.double_coset_labels(G.table, l, r),
                                  _ckernels.double_coset_labels(G.table, l, r))


@needs_ext
@pytest.mark.parametrize("name", NAMES)
def test_extend_action_agrees(name):
    G = build_group(name)
    gens = np.array([G.index(g) for g in G.generators], dtype=np.int32)
    # the regular action is consistent
    acts = np.array([G.table[g] for g in gens], dtype=np.int32)
    a, ok_a = _pykernels.extend_action(G.table, gens, acts)
    b, ok_b = _ckernels.extend_action(G.table, gens, acts)
    assert ok_a and ok_b and np.array_equal(a, b)
    # a bogus assignment is rejected by both
    bad = acts.copy()
    bad[0] = np.arange(G.order, dtype=np.int32)[::-1]
    _, ok_a = _pykernels.extend_action(G.table, gens, bad)
    _, ok_b = _ckernels.extend_action(G.table, gens, bad)
    assert ok_a == ok_b


@needs_ext
def test_extend_hom_agrees():
    src, tgt = build_group("C4"), build_group("S3")
    gens = np.array([1], dtype=np.int32)
    for v in range(tgt.order):
        img = np.array([v], dtype=np.int32)
        assert np.array_equal(_pykernels.extend_hom(src.table, tgt.table, gens, img),
                              _ckernels.extend_hom(src.table, tgt.table, gens, img))


def _actions():
    out = []
    for name in ("C2", "C3", "S3", "C2xC2"):
        G = build_group(name)
        out += [(name, X) for X in gsets_up_to(G, 4)]
    return out


ACTIONS = _actions()


@needs_ext
@given(st.sampled_from(ACTIONS), st.integers(1, 3))
def test_level_stabilizers_agree(case, n_values):
    _, X = case
    action = X.action_array()
    ma, ca = _pykernels.level_stabilizers(action, n_values)
    mb, cb = _ckernels.level_stabilizers(action, n_values)
    assert np.array_equal(ma, mb) and np.array_equal(ca, cb)


@needs_ext
@given(st.sampled_from(ACTIONS))
def test_orbit_labels_agree(case):
    _, X = case
    action = X.action_array()
    assert np.array_equal(_pykernels.orbit_labels(action), _ckernels.orbit_labels(action))
