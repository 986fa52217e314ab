#!/usr/bin/env python
# SPDX-FileCopyrightText: 2026 polyrelax contributors
#
# SPDX-License-Identifier: MIT

"""
MCP server exposing pattern relaxations as tools over stdio.
"""

import asyncio
import json
import sys

from mcp.server import NotificationOptions, Server
from mcp.server.stdio import stdio_server
from mcp.shared.exceptions import McpError
from mcp.types import INTERNAL_ERROR, INVALID_PARAMS, METHOD_NOT_FOUND, ErrorData, TextContent, Tool

from . import relaxation_proxy
from .core import __version__
from .core.exceptions import ParameterError, PolyRelaxError, UnsupportedPatternError

server = Server(
    name="polyrelax",
    version=__version__,
    instructions=(
        "Lower bounds for polynomial minimization over boxes via pattern relaxations "
        "of the moment body, solved with a cutting-plane method."
    ),
)

_TYPES_SCHEMA = {
    "type": "array",
    "items": {"type": "string", "enum": ["ML", "AC", "CH", "SC"]},
    "description": "Pattern types to generate, in order. Defaults to ML, AC, CH, SC.",
}
_EPSILON_SCHEMA = {"type": "number", "exclusiveMinimum": 0, "description": "Termination tolerance ε."}
_COVERING_SCHEMA = {"type": "string", "description": "Chain covering: 'equal:N' or 'tol:EPS'."}
_PROBLEM_SCHEMA = {
    "type": "object",
    "description": (
        "Problem object: {'n': int, 'box': [[a,b],...] (optional, unit box), "
        "'terms': [{'exp': [ints], 'coef': float}, ...], 'family': [pattern, ...] (optional)}."
    ),
}

relax_polynomial_tool = Tool(
    name="relax_polynomial",
    description="Computes a lower bound on min f over the box with the cutting-plane method and returns the solve report.",
    inputSchema={
        "type": "object",
        "properties": {
            "problem": _PROBLEM_SCHEMA,
            "types": _TYPES_SCHEMA,
            "epsilon": _EPSILON_SCHEMA,
            "covering": _COVERING_SCHEMA,
        },
        "required": ["problem"],
    },
)

generate_patterns_tool = Tool(
    name="generate_patterns",
    description="Generates a pattern family covering the given exponent set.",
    inputSchema={
        "type": "object",
        "properties": {
            "exponents": {
                "type": "array",
                "items": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                "description": "Exponent vectors of the set A.",
            },
            "types": _TYPES_SCHEMA,
        },
        "required": ["exponents"],
    },
)

separate_point_tool = Tool(
    name="separate_point",
    description="Runs one separation oracle: returns a violated cut for the pattern at the point, or null.",
    inputSchema={
        "type": "object",
        "properties": {
            "pattern": {"type": "object", "description": "Pattern object {'kind': ..., 'parameters': {...}}."},
            "point": {
                "type": "object",
                "description": "Point object {'box': [[a,b],...] (optional), 'point': [{'exp': [...], 'value': v}, ...]}.",
            },
            "covering": _COVERING_SCHEMA,
        },
        "required": ["pattern", "point"],
    },
)

width_ratio_tool = Tool(
    name="width_ratio",
    description="Relaxation width of f, the box-relaxation width and their ratio ν.",
    inputSchema={
        "type": "object",
        "properties": {
            "problem": _PROBLEM_SCHEMA,
            "types": _TYPES_SCHEMA,
            "epsilon": _EPSILON_SCHEMA,
            "covering": _COVERING_SCHEMA,
        },
        "required": ["problem"],
    },
)

TOOLS = [relax_polynomial_tool, generate_patterns_tool, separate_point_tool, width_ratio_tool]


def _error(code: int, message: str) -> McpError:
    return McpError(ErrorData(code=code, message=message))


def _require(args: dict, key: str, kind: type) -> object:
    value = args.get(key)
    if not isinstance(value, kind):
        raise _error(INVALID_PARAMS, f"Missing or invalid '{key}' parameter.")
    return value


@server.list_tools()
async def handle_list_tools_impl():
    return TOOLS


@server.call_tool()
async def handle_call_tool_impl(name: str, arguments: dict | None):
    """
    Dispatches a tool call to the relaxation proxy.

    Args:
        name: One of relax_polynomial, generate_patterns, separate_point, width_ratio.
        arguments: The tool arguments as described by the tool's input schema.

    Returns:
        A list with one TextContent holding the JSON result.

    Raises:
        McpError: METHOD_NOT_FOUND for unknown tools, INVALID_PARAMS for bad
                  arguments and INTERNAL_ERROR for solver failures.
    """
    args = arguments or {}
    options = {key: args[key] for key in ("types", "epsilon", "covering") if args.get(key) is not None}
    try:
        if name == "relax_polynomial":
            result = await relaxation_proxy.relax_polynomial(_require(args, "problem", dict), **options)
        elif name == "generate_patterns":
            result = await relaxation_proxy.generate_family(_require(args, "exponents", list), args.get("types"))
        elif name == "separate_point":
            result = await relaxation_proxy.separate_point(
                _require(args, "pattern", dict), _require(args, "point", dict), args.get("covering")
            )
        elif name == "width_ratio":
            result = await relaxation_proxy.width_ratio(_require(args, "problem", dict), **options)
        else:
            raise _error(METHOD_NOT_FOUND, f"Unknown tool: {name}")
    except McpError:
        raise
    except (ParameterError, UnsupportedPatternError) as e:
        raise _error(INVALID_PARAMS, f"Invalid parameters: {e}")
    except PolyRelaxError as e:
        raise _error(INTERNAL_ERROR, f"{type(e).__name__}: {e}")
    except Exception as e:
        print(f"Unexpected error in {name}: {e}", file=sys.stderr)
        raise _error(INTERNAL_ERROR, f"An unexpected error occurred: {e}")

    return [TextContent(type="text", text=json.dumps(result))]


async def main_async_runner():
    print("polyrelax MCP server starting with stdio_server...", file=sys.stderr)

    init_options = server.create_initialization_options(
        notification_options=NotificationOptions(tools_changed=True),
    )

    async with stdio_server() as (read_stream, write_stream):
        await server.run(read_stream, write_stream, initialization_options=init_options)


if __name__ == "__main__":
    asyncio.run(main_async_runner())
