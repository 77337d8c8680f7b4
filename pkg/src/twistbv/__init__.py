"""Exact verification engine for twisted supersymmetric BV complexes.

Layers:
  scalars, sparse      exact Gaussian-rational linear algebra kernel
  poly                 truncated polynomial scalars for symbolic checks
  susy, atlas          supercharge algebra, classification, parameter maps
  dolbeault            truncated polynomial Dolbeault modules and operators
  multiplets           the multiplet complexes and their arrow descriptors
  retracts, hpl        deformation retracts and the perturbation engine
  spectral             finite double-complex spectral sequences
  report, cli          deterministic reports and the command line surface
"""

__version__ = "0.1.0"
