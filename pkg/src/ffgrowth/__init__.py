"""Exact growth and energy computations over finite fields.

Submodules: ``field`` (F_q arithmetic and subfields), ``setalg`` (sumsets,
product sets, representation functions, energies), ``matgrp`` (SL2 product
sets from the R(A) construction), ``heis`` (Heisenberg-group cube products),
``incidence`` (point-line and point-plane incidences) and ``harness``
(seeded experiments and certificate checks).
"""

from .field import FieldCtx, FieldElement, make_field
from .setalg import FSet

__version__ = "0.1.0"
__all__ = ["FieldCtx", "FieldElement", "FSet", "make_field"]
