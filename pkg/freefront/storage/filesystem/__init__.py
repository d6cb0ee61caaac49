"""Filesystem output backend implementation."""

from .manager import FIELD_COLUMNS, FRONT_COLUMNS, SUMMARY_COLUMNS, FilesystemOutputBackend

__all__ = ['FilesystemOutputBackend', 'FIELD_COLUMNS', 'FRONT_COLUMNS', 'SUMMARY_COLUMNS']
