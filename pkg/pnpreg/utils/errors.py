from typing import List, Optional, Tuple


class PnPError(Exception):
    """Base class for every error raised by pnpreg."""


class RejectedInputError(PnPError, ValueError):
    """An operation's precondition was violated (dimensions, finiteness, ranges)."""


class EmptyOperatorError(RejectedInputError):
    def __init__(self, message: str = "empty operator"):
        super().__init__(message)


class StepSizeError(RejectedInputError):
    def __init__(self, tau: float, bound: float):
        self.tau = tau
        self.bound = bound
        super().__init__(f"step size tau={tau:.6g} violates tau <= 1/(2||A||^2) = {bound:.6g}")


class ConfigError(PnPError, ValueError):
    """Experiment config could not be parsed or validated.

    Holds one (line, key, message) entry per problem found; line is None when the
    problem is not tied to a line (e.g. a missing required key).
    """

    def __init__(self, diagnostics: List[Tuple[Optional[int], str, str]]):
        self.diagnostics = diagnostics
        super().__init__(self._render())

    def _render(self) -> str:
        parts = []
        for line, key, message in self.diagnostics:
            where = f"line {line}" if line is not None else "config"
            parts.append(f"{where}: {key}: {message}")
        return "; ".join(parts)


class SolverAbortError(PnPError):
    """Raised when an iteration cannot continue; keeps what was computed so far."""

    def __init__(self, message: str, trace=None, cg_report=None):
        self.trace = trace
        self.cg_report = cg_report
        if cg_report is not None:
            message = (
                f"{message} (cg iterations={cg_report.iterations_used}, "
                f"residual={cg_report.final_residual_norm:.3e}, breakdown={cg_report.breakdown})"
            )
        super().__init__(message)


class ArchiveError(PnPError, OSError):
    def __init__(self, path, reason: str):
        self.path = path
        super().__init__(f"{path}: {reason}")
