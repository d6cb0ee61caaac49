"""Hypothesis validators and config-file parsing."""

from .config import format_config, load_config, parse_config_mapping, parse_config_text
from .validation import kernel_floor, validate_kernel, validate_problem, validate_reaction

__all__ = [
    'format_config',
    'kernel_floor',
    'load_config',
    'parse_config_mapping',
    'parse_config_text',
    'validate_kernel',
    'validate_problem',
    'validate_reaction',
]
