"""Exception types shared by all revkit modules."""

from __future__ import annotations

__all__ = [
    "RevkitError",
    "LogicError",
    "UnknownSentenceId",
    "ConjunctionUnavailable",
    "EnumerationCapExceeded",
    "MinSetInexpressible",
    "OperatorUndefined",
    "PostulatePrerequisiteFailed",
    "FormInexpressible",
    "InvalidLoop",
    "CriticalLoopPresent",
    "NotAPreorder",
    "OmegaTooLarge",
    "UnknownGalleryName",
    "OutOfScopeInfinite",
]


class RevkitError(Exception):
    """Base class for every error raised by revkit."""


class LogicError(RevkitError):
    """A logic, base or file violates a structural invariant."""

    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class UnknownSentenceId(LogicError):
    pass


class ConjunctionUnavailable(LogicError):
    def __init__(self, a: int, b: int, message: str = ""):
        super().__init__(message or f"no conjunction available for sentences {a} and {b}")
        self.pair = (a, b)


class EnumerationCapExceeded(RevkitError):
    def __init__(self, size: int, cap: int):
        super().__init__(f"base family too large to enumerate: {size} sentences-equivalent > cap {cap}")
        self.size = size
        self.cap = cap


class MinSetInexpressible(RevkitError):
    """No base of the family has the requested model set."""

    def __init__(self, models: int, labels: list[str] | None = None):
        shown = labels if labels is not None else bin(models)
        super().__init__(f"no base has model set {shown}")
        self.models = models


class OperatorUndefined(RevkitError):
    def __init__(self, k: int, gamma: int):
        super().__init__(f"operator table has no entry for K={k:#x}, gamma={gamma:#x}")
        self.k = k
        self.gamma = gamma


class PostulatePrerequisiteFailed(RevkitError):
    def __init__(self, failed: list[str], detail: str = ""):
        msg = "required postulates fail: " + ", ".join(failed)
        super().__init__(msg + (f" ({detail})" if detail else ""))
        self.failed = failed


class FormInexpressible(RevkitError):
    def __init__(self, pair: tuple[int, int]):
        super().__init__(f"no base has exactly the models {{{pair[0]}, {pair[1]}}}")
        self.pair = pair


class InvalidLoop(RevkitError):
    pass


class CriticalLoopPresent(RevkitError):
    def __init__(self, loop):
        super().__init__("the logic admits a critical loop, no compatible total preorder is guaranteed")
        self.loop = loop


class NotAPreorder(RevkitError):
    pass


class OmegaTooLarge(RevkitError):
    def __init__(self, n: int, limit: int = 7):
        super().__init__(f"|Omega| = {n} exceeds the weak-order enumeration limit {limit}")
        self.n = n


class UnknownGalleryName(RevkitError):
    pass


class OutOfScopeInfinite(RevkitError):
    pass
