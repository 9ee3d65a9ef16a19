"""Finite T0 spaces as primitive-ideal spectra of AF algebras.

Submodules: ``poset`` (orders as topologies), ``quotient`` (finitary
approximation), ``bratteli`` (diagrams and ideal theory), ``poset_to_af``
(the diagram construction), ``behncke_leptin`` (the classification over a
fixed spectrum), ``exprs`` (symbolic Hilbert/algebra expressions),
``homology`` (order-complex homology), ``catalog`` (poset generation).
"""

from .poset import Poset, SubsetFamily, parse_poset

__all__ = ["Poset", "SubsetFamily", "parse_poset"]
__version__ = "0.1.0"
