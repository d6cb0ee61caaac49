"""Batch command handlers."""

from .commands import (
    EXIT_CONFIG,
    EXIT_OK,
    EXIT_SOLVER,
    cmd_convergence,
    cmd_oracle,
    cmd_run,
    cmd_sweep,
    cmd_validate,
    create_command_handlers,
)

__all__ = [
    'EXIT_CONFIG',
    'EXIT_OK',
    'EXIT_SOLVER',
    'cmd_convergence',
    'cmd_oracle',
    'cmd_run',
    'cmd_sweep',
    'cmd_validate',
    'create_command_handlers',
]
