import numpy as np

from bgkness.log import CONSOLE


def equal(obj1, obj2, extra=None):
    """Helper to print useful info if result is unexpected."""
    eq = obj1 == obj2

    if not eq:
        CONSOLE.print(obj1)
        CONSOLE.print(obj2)

        if extra is not None:
            CONSOLE.print(extra)

        return False

    return True


def close(value, expected, atol=0.0, rtol=1e-10, extra=None):
    """Like `equal`, for floats and arrays within tolerance."""
    ok = bool(np.allclose(value, expected, atol=atol, rtol=rtol))

    if not ok:
        CONSOLE.print(value)
        CONSOLE.print(expected)
        CONSOLE.print(f"max abs diff: {np.max(np.abs(np.asarray(value) - np.asarray(expected)))}")

        if extra is not None:
            CONSOLE.print(extra)

    return ok
