"""
polydamage: polygonal assumed-strain finite elements with integral-type
nonlocal damage for quasi-brittle fracture.

Subpackages:
- `polydamage.models`: Data model (mesh, material, kernel, state, config).
- `polydamage.fem`: Mesh generation and I/O, basis, projection, material
  point, nonlocal averaging, assembly and the Newton solver.
- `polydamage.bench`: Elastic path, Kirsch field, convergence study, presets.
- `polydamage.cli`: Configuration parsing, command handlers and outputs.
- `polydamage.utils`: Console and logging helpers.
"""

__version__ = "0.1.0"
