#!/usr/bin/env python3
"""Internal CLI modules."""

from .cli import cli, main

__all__ = ["cli", "main"]

# EOF
