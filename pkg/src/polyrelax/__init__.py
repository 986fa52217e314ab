# SPDX-FileCopyrightText: 2026 polyrelax contributors
#
# SPDX-License-Identifier: MIT

"""
polyrelax

Certified lower bounds for box-constrained polynomial minimization from
pattern relaxations of the moment body, with a command line, an MCP server
and a width benchmark.
"""

from .core import __version__

__all__ = ["__version__"]
