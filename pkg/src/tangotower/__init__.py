"""Exact bookkeeping for Raynaud-Mukai style cyclic-cover towers in characteristic p.

Modules: :mod:`divclass` (divisor-class lattice), :mod:`cover` (P^1-bundle
and cyclic cover algebra), :mod:`tower` (construction steps), :mod:`curve`
(Artin-Schreier curves and Tango structures), :mod:`cysearch` (certified
Diophantine searches) and :mod:`cli`.
"""

from .divclass import TowerClass, is_trivial
from .tower import TowerState, build_tower, step_I, step_II

__all__ = ["TowerClass", "TowerState", "build_tower", "is_trivial", "step_I", "step_II"]
__version__ = "0.1.0"
