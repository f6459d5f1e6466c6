"""
This module defines the exception hierarchy shared by the mesh, solver and
command-line layers.

Classes:
- MeshError: A mesh invariant is violated, a mesh file is malformed, or a mesh
  operation cannot be applied to the given cells.
- ConfigError: A run configuration has one or more problems; all of them are
  collected in `problems`.
- SolverError: A linear or nonlinear solve cannot proceed.
- ConvergenceError: Newton iterations did not reach the tolerance.
- SimulationFailed: A load step failed after all bisections; carries the
  partial result.

Usage:
- Library code raises these; the CLI `input_error` decorator turns them into
  diagnostics and a non-zero exit code.
"""

from typing import Any, List, Optional


class MeshError(ValueError):
    """Raised when a mesh is invalid or a mesh operation is not applicable."""


class ConfigError(ValueError):
    """
    Raised when a configuration file fails validation.

    Attributes:
        problems (List[str]): One readable line per violated field.
        source (str): The file (or label) the configuration came from.
    """

    def __init__(self, problems: List[str], source: str = "<config>") -> None:
        self.problems = list(problems)
        self.source = source
        lines = "\n".join(f"  - {problem}" for problem in self.problems)
        super().__init__(f"{source}: {len(self.problems)} problem(s)\n{lines}")


class SolverError(RuntimeError):
    """Raised when a system cannot be solved (singular, under-constrained)."""


class ConvergenceError(SolverError):
    """
    Raised when Newton iterations fail within one load increment.

    Attributes:
        step (int): Index of the step being attempted.
        control (float): Control value the step was aiming at.
        iterations (int): Iterations spent.
        ratio (float): Last residual norm relative to the first one.
    """

    def __init__(self, step: int, control: float, iterations: int, ratio: float) -> None:
        self.step = step
        self.control = control
        self.iterations = iterations
        self.ratio = ratio
        super().__init__(
            f"step {step}: no convergence at control {control:.6g} "
            f"after {iterations} iterations (residual ratio {ratio:.3e})"
        )


class SimulationFailed(SolverError):
    """
    Raised by `run_simulation` when a step fails after every bisection.

    Attributes:
        result: The partial simulation result up to the last committed step.
    """

    def __init__(self, message: str, result: Any, cause: Optional[Exception] = None) -> None:
        super().__init__(message)
        self.result = result
        self.cause = cause
