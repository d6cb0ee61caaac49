"""Front-fixing map between [g(t), h(t)] and the reference interval [-1, 1]."""
import numpy as np

from ..exceptions import DegenerateIntervalError, OutOfRangeError
from ..interfaces import FrontPair


def _check_interval(fp: FrontPair) -> None:
    if not fp.h > fp.g:
        raise DegenerateIntervalError(fp.g, fp.h)


def phys_of_ref(fp: FrontPair, y):
    """x(t, y) = ((h - g) y + h + g) / 2.

    Written as (h(1 + y) + g(1 - y)) / 2 so that y = +-1 map to h and g
    exactly.

    Raises:
        OutOfRangeError: If any y lies outside [-1, 1]
    """
    y = np.asarray(y, dtype=float)
    if np.any(y < -1.0) or np.any(y > 1.0):
        raise OutOfRangeError(float(y.min() if np.any(y < -1.0) else y.max()), -1.0, 1.0)
    return 0.5 * (fp.h * (1.0 + y) + fp.g * (1.0 - y))


def ref_of_phys(fp: FrontPair, x):
    """y(t, x) = (2x - g - h) / (h - g).

    Raises:
        OutOfRangeError: If any x lies outside [g, h]
        DegenerateIntervalError: If h <= g
    """
    _check_interval(fp)
    x = np.asarray(x, dtype=float)
    if np.any(x < fp.g) or np.any(x > fp.h):
        raise OutOfRangeError(float(x.min() if np.any(x < fp.g) else x.max()), fp.g, fp.h)
    return (2.0 * x - fp.g - fp.h) / (fp.h - fp.g)


def xi(fp: FrontPair) -> float:
    """Diffusion rescale 4 / (h - g)^2."""
    _check_interval(fp)
    return 4.0 / (fp.h - fp.g) ** 2


def zeta(fp: FrontPair, y):
    """Grid-motion coefficient ((h' + g') + (h' - g') y) / (h - g)."""
    _check_interval(fp)
    y = np.asarray(y, dtype=float)
    width = fp.h - fp.g
    return (fp.hdot + fp.gdot) / width + (fp.hdot - fp.gdot) * y / width


def max_abs_zeta(fp: FrontPair) -> float:
    """max over y in [-1, 1] of |zeta|; attained at an endpoint."""
    return float(max(abs(zeta(fp, 1.0)), abs(zeta(fp, -1.0))))
