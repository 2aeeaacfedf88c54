"""Exception hierarchy shared by the planner, simulator and command line front-end."""


class SynthesisError(Exception):
    """Base class for every error raised by ionsynth."""


class InputError(SynthesisError, ValueError):
    """Malformed or inconsistent input (target tables, trap configs, files)."""


class TruncationError(InputError):
    """A Fock index falls outside the truncated space."""


class PlannerError(SynthesisError):
    """The pulse recursion cannot be carried out for the given target."""

    def __init__(self, message, mode=None):
        super().__init__(message)
        self.mode = mode


class SimulationError(SynthesisError):
    """A pulse could not be executed at the requested tier."""

    def __init__(self, message, pulse_index=None):
        super().__init__(message)
        self.pulse_index = pulse_index


class ProtocolViolation(SimulationError):
    """Amplitude found where the closed-form pulse relations do not apply."""


class TruncationLeakWarning(RuntimeWarning):
    """Populated states couple to levels above the truncation."""
