"""Kernels, reactions and problem instances for the free-boundary simulator."""

from typing import Optional

from .base import ReactionKind, ReactionModel
from .kernels import KernelFamily, KernelSpec
from .problem import AUTO_DT, InitialProfile, ProblemConfig, ProfileShape
from .reactions import CompetitionModel, CustomReaction, PreyPredatorModel, evaluate_f

def create_kernel(
    family: str = "tent",
    a: float = 1.0,
    sigma: Optional[float] = None,
    **kwargs
) -> KernelSpec:
    """Factory function to create dispersal kernels.

    Args:
        family: Kernel family ("uniform", "tent", "truncated_gaussian", "custom")
        a: Support radius
        sigma: Width of the truncated Gaussian (defaults to a/2)
        **kwargs: Family-specific options (custom kernels take ``profile``)

    Returns:
        KernelSpec instance

    Raises:
        ValueError: If family is not supported
    """
    try:
        kind = KernelFamily(family)
    except ValueError:
        raise ValueError(f"Unsupported kernel family: {family}")
    return KernelSpec(family=kind, a=a, sigma=sigma, **kwargs)


def create_reaction(
    kind: str = "competition",
    a: float = 1.0,
    b: float = 1.0,
    c: float = 1.0,
    **kwargs
) -> ReactionModel:
    """Factory function to create reaction models.

    Args:
        kind: Reaction type ("competition", "prey_predator", "custom")
        a, b, c: Built-in model parameters
        **kwargs: Arguments of CustomReaction when kind is "custom"

    Returns:
        ReactionModel implementation

    Raises:
        ValueError: If kind is not supported or parameters are not positive
    """
    if kind == ReactionKind.CUSTOM.value:
        return CustomReaction(**kwargs)
    if min(a, b, c) <= 0:
        raise ValueError(f"Reaction parameters must be positive, got a={a}, b={b}, c={c}")
    if kind == ReactionKind.COMPETITION.value:
        return CompetitionModel(a=a, b=b, c=c)
    elif kind == ReactionKind.PREY_PREDATOR.value:
        return PreyPredatorModel(a=a, b=b, c=c)
    else:
        raise ValueError(f"Unsupported reaction kind: {kind}")

__all__ = [
    'AUTO_DT',
    'CompetitionModel',
    'CustomReaction',
    'InitialProfile',
    'KernelFamily',
    'KernelSpec',
    'PreyPredatorModel',
    'ProblemConfig',
    'ProfileShape',
    'ReactionKind',
    'ReactionModel',
    'create_kernel',
    'create_reaction',
    'evaluate_f',
]
