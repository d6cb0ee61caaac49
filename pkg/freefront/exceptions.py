class FreeFrontError(Exception):
    """Base exception for all simulator errors."""
    def __init__(self, message: str, details: dict = None):
        super().__init__(message)
        self.details = details

class ErrorResponse:
    def __init__(self, error: Exception):
        self.error_type = error.__class__.__name__
        self.message = str(error)
        self.details = getattr(error, 'details', None)

    def to_dict(self) -> dict:
        return {
            'error': {
                'type': self.error_type,
                'message': self.message,
                'details': self.details
            }
        }


class ConfigError(FreeFrontError):
    """Raised when a configuration file or value is invalid."""
    def __init__(self, message: str, key: str = None, line: int = None):
        self.key = key
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key '{key}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(
            f"{prefix}{message}",
            details={'key': key, 'line': line}
        )


# Standing hypotheses on the kernel and the reaction terms

class HypothesisError(FreeFrontError):
    """Raised when a kernel or reaction fails a standing hypothesis."""

    pass


class MassNotUnitError(HypothesisError):
    """Raised when the kernel does not integrate to one."""
    def __init__(self, mass: float, tolerance: float):
        self.mass = mass
        super().__init__(
            f"Kernel mass {mass!r} differs from 1 by more than {tolerance:g}",
            details={'mass': mass, 'tolerance': tolerance}
        )


class NotSymmetricError(HypothesisError):
    """Raised when J(x) != J(-x) at a sampled point."""
    def __init__(self, x: float, left: float, right: float):
        super().__init__(
            f"Kernel not symmetric at x={x!r}: J(x)={right!r}, J(-x)={left!r}",
            details={'x': x, 'J(x)': right, 'J(-x)': left}
        )


class NegativeValueError(HypothesisError):
    """Raised when the kernel takes a negative value."""
    def __init__(self, x: float, value: float):
        super().__init__(
            f"Kernel negative at x={x!r}: J(x)={value!r}",
            details={'x': x, 'value': value}
        )


class ZeroAtOriginError(HypothesisError):
    """Raised when J(0) is not positive."""
    def __init__(self, value: float):
        super().__init__(
            f"Kernel must be positive at the origin, got J(0)={value!r}",
            details={'value': value}
        )


class NonLipschitzKernelError(HypothesisError):
    """Raised when a discontinuous kernel is used without opting in."""
    def __init__(self, family: str):
        super().__init__(
            f"Kernel family '{family}' is not Lipschitz on R; "
            f"pass --allow-nonlipschitz-kernel to use it",
            details={'family': family}
        )


class SignConditionViolatedError(HypothesisError):
    """Raised when a sampled reaction value breaks a sign condition."""
    def __init__(self, condition: str, sample: dict, value: float):
        self.condition = condition
        super().__init__(
            f"Sign condition {condition} violated at {sample}: value={value!r}",
            details={'condition': condition, 'sample': sample, 'value': value}
        )


class ZeroLineViolatedError(HypothesisError):
    """Raised when f1(t,x,0,v) or f2(t,x,u,0) is not zero."""
    def __init__(self, which: int, sample: dict, value: float):
        super().__init__(
            f"f{which} does not vanish on its zero line at {sample}: value={value!r}",
            details={'which': which, 'sample': sample, 'value': value}
        )


class NegativeDensityInputError(HypothesisError):
    """Raised when a reaction is evaluated at a negative density."""
    def __init__(self, u: float, v: float):
        super().__init__(
            f"Densities must be nonnegative, got u={u!r}, v={v!r}",
            details={'u': u, 'v': v}
        )


# Geometry of the moving habitat

class OutOfRangeError(FreeFrontError):
    """Raised when a coordinate lies outside its interval."""
    def __init__(self, value: float, lower: float, upper: float):
        super().__init__(
            f"Coordinate {value!r} outside [{lower!r}, {upper!r}]",
            details={'value': value, 'lower': lower, 'upper': upper}
        )


class DegenerateIntervalError(FreeFrontError):
    """Raised when the habitat collapses (h <= g)."""
    def __init__(self, g: float, h: float):
        super().__init__(
            f"Degenerate habitat: g={g!r} is not below h={h!r}",
            details={'g': g, 'h': h}
        )


# Time marching

class SolverError(FreeFrontError):
    """Base class for failures of the time-marching scheme."""

    pass


class CFLViolatedError(SolverError):
    """Raised when dt exceeds the stability bound of the explicit step."""
    def __init__(self, dt: float, limit: float, t: float = None):
        super().__init__(
            f"Time step {dt!r} exceeds stability limit {limit!r}",
            details={'dt': dt, 'limit': limit, 't': t}
        )


class NegativeOvershootError(SolverError):
    """Raised when a stepper produces a clearly negative density."""
    def __init__(self, field: str, index: int, value: float):
        super().__init__(
            f"Field {field} negative at node {index}: {value!r}",
            details={'field': field, 'index': index, 'value': value}
        )


class SingularSystemError(SolverError):
    """Raised when the tridiagonal solve fails."""

    pass


class PicardDivergedError(SolverError):
    """Raised when the per-step fixed-point residual keeps growing."""
    def __init__(self, t: float, residuals: list):
        super().__init__(
            f"Picard iteration diverged at t={t!r}",
            details={'t': t, 'residuals': residuals}
        )


class InvariantBreachedError(SolverError):
    """Raised when a hard invariant monitor trips."""
    def __init__(self, invariant: str, t: float, where: dict = None):
        self.invariant = invariant
        super().__init__(
            f"Invariant '{invariant}' breached at t={t!r}",
            details={'invariant': invariant, 't': t, 'where': where}
        )


class HorizonUnreachableError(SolverError):
    """Raised when dt underflows before the horizon is reached."""
    def __init__(self, t: float, dt: float):
        super().__init__(
            f"Time step underflow at t={t!r} (dt={dt!r})",
            details={'t': t, 'dt': dt}
        )


class WindowExceededError(SolverError):
    """Raised when a front leaves the oracle's Eulerian window."""
    def __init__(self, t: float, g: float, h: float, half_width: float):
        super().__init__(
            f"Front left the window [-{half_width!r}, {half_width!r}] at t={t!r}",
            details={'t': t, 'g': g, 'h': h, 'half_width': half_width}
        )


# Verification harness

class OrderingViolatedError(FreeFrontError):
    """Raised when the discrete comparison principle fails."""
    def __init__(self, step: int, node: int, value: float, kind: str):
        super().__init__(
            f"Ordering violated ({kind}) at step {step}, node {node}: {value!r}",
            details={'step': step, 'node': node, 'value': value, 'kind': kind}
        )


class NonMonotoneErrorsError(FreeFrontError):
    """Signals that refinement errors do not decrease; orders are unreliable."""
    def __init__(self, quantity: str, errors: list):
        super().__init__(
            f"Errors for {quantity} do not decrease under refinement",
            details={'quantity': quantity, 'errors': errors}
        )
