"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class PolyhexGFError(Exception):
    """Base class for all errors raised by polyhex_gf."""


class NonInvertibleConstantTerm(PolyhexGFError, ZeroDivisionError):
    pass


class IndexOutOfTruncation(PolyhexGFError, IndexError):
    pass


class AssemblyMismatch(PolyhexGFError):
    """NUM/DEN or G failed a structural check; almost always a transcription bug."""


class NonConvergence(PolyhexGFError):
    pass


class SingularSystem(PolyhexGFError):
    pass


class BlockMismatch(PolyhexGFError):
    def __init__(self, block: str, detail: str = "") -> None:
        self.block = block
        super().__init__(f"block {block} mismatch" + (f": {detail}" if detail else ""))


class LimitExceeded(PolyhexGFError):
    pass


class NoStabilization(PolyhexGFError):
    pass


class NoSignChange(PolyhexGFError):
    pass
