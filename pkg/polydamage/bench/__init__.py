"""
This package holds verification problems and benchmark presets.

Modules:
- `kirsch`: Exact plate-with-hole field.
- `elastic`: Linear elastic solve and the patch test.
- `convergence`: Plate-with-hole convergence study.
- `presets`: Ready-to-run benchmark configurations.
"""

from .kirsch import ExactKirschField, kirsch_exact
from .elastic import ElasticSolution, PatchResult, affine_field, check_constraints, patch_test, solve_elastic
from .convergence import error_norms, fit_slope, kirsch_tractions, report_table, run_convergence, solve_plate_hole
from .presets import Preset, preset_benchmarks, render_preset
