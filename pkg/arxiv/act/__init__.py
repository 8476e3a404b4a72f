"""Arithmetic cosine transform: exact DCT-II from non-uniform samples."""

__all__ = ('numtheory', 'linalg', 'sampling', 'core', 'arch_sim', 'metrics',
           'manager', 'formats')

from . import numtheory, linalg, sampling, core, arch_sim, metrics, manager, \
    formats
