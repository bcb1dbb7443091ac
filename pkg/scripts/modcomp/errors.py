"""Exception types raised by the modcomp library.

Every user-facing failure derives from ``ModcompError`` (a ``ValueError``) so
the CLI can report it as ``[-] <message>`` and exit 1. Internal consistency
failures stay ``RuntimeError``.
"""


class ModcompError(ValueError):
    pass


class GroupSpecError(ModcompError):
    pass


class GroupOrderCapError(ModcompError):
    pass


class SignatureError(ModcompError):
    pass


class VectorCountCapError(ModcompError):
    pass


class CutSystemError(ModcompError):
    pass


class PatchInputError(ModcompError):
    pass


class EdgeCollapseError(ModcompError):
    """A crossover sequence has a trivial entry, so the tiling has a collapsed edge."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class IncompleteClassListError(RuntimeError):
    pass
