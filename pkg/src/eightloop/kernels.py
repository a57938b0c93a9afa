"""Kernel backend selection: compiled extension if available, else python."""

try:
    from . import _kernels as _impl
except ImportError:  # extension not built
    from . import _kernels_py as _impl

BACKEND = _impl.BACKEND
ham = _impl.ham
cubic_eval = _impl.cubic_eval
vf_rhs = _impl.vf_rhs
vf_rhs_many = _impl.vf_rhs_many
moment_integrand = _impl.moment_integrand
