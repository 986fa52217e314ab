# SPDX-FileCopyrightText: 2026 polyrelax contributors
#
# SPDX-License-Identifier: MIT

from .cli import app

app(prog_name="polyrelax")
