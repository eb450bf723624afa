"""Kernel backend selected at import: the compiled extension when it was built,
otherwise the numpy fallback. ``BACKEND`` names the active one."""
try:
    from . import _ckernels as _impl
except ImportError:  # extension not built
    from . import _pykernels as _impl

BACKEND = _impl.BACKEND
mult_table = _impl.mult_table
closure = _impl.closure
orbit_labels = _impl.orbit_labels
double_coset_labels = _impl.double_coset_labels
extend_action = _impl.extend_action
extend_hom = _impl.extend_hom
level_stabilizers = _impl.level_stabilizers
