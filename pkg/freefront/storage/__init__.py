"""Output backends for simulation results."""

from typing import Optional
from pathlib import Path

from .base import OutputBackend
from .filesystem import FilesystemOutputBackend

def create_output_backend(
    backend_type: str = "filesystem",
    root: Optional[Path] = None,
    **kwargs
) -> OutputBackend:
    """Factory function to create output backend instances.

    Args:
        backend_type: Type of output backend ("filesystem")
        root: Output directory
        **kwargs: Additional backend-specific configuration

    Returns:
        OutputBackend implementation

    Raises:
        ValueError: If backend_type is not supported
    """
    if backend_type == "filesystem":
        if root is None:
            root = Path("out")
        return FilesystemOutputBackend(root=Path(root), **kwargs)
    else:
        raise ValueError(f"Unsupported output backend: {backend_type}")

__all__ = ['OutputBackend', 'FilesystemOutputBackend', 'create_output_backend']
