"""Pure-Python stand-in for the compiled enumeration kernel (same interface)."""
from . import _pyeval
from .program import OPCODES

MAX_BOUND = None

__all__ = ["MAX_BOUND", "OPCODES", "eval_program"]


def eval_program(prog, env, bound):
    """Evaluate ``prog.root`` under slot values ``env`` with domain ``[0, bound)``."""
    if prog.has_lfp:
        raise ValueError("the enumeration kernel does not evaluate fixed-point nodes")
    return _pyeval.evaluate(prog, env, bound, memo=False)
