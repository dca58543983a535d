"""Published candidate divisors, transcribed as polynomial expressions.

Each table maps a label (the monomial multiplying the volume form) to the
divisor text.  The strings keep the published spelling, including one entry
that writes ``x`` for the variable.
"""

from __future__ import annotations

QUINTIC_TABLE = {
    "1": "(xi + 7/10)*(xi + 4/5)^2*(xi + 6/5)",
    "x": "(xi + 9/10)*(xi + 1)*(xi + 6/5)*(xi + 7/5)",
    "z": "(xi + 1)^3*(x + 3/2)",
    "z^2": "(xi + 6/5)^2*(xi + 13/10)*(xi + 9/5)",
    "x*y": "(xi + 11/10)*(xi + 7/5)^2*(xi + 8/5)",
    "x^2": "(xi + 6/5)*(xi + 8/5)^2*(xi + 11/10)",
    "x*z": "(xi + 6/5)^2*(xi + 7/5)*(xi + 17/10)",
    "x*y*z": "(xi + 7/5)*(xi + 8/5)^2*(xi + 19/10)",
}

KLEIN_TABLE = {
    "1": "(xi + 1)^3",
    "x": "(xi + 8/7)*(xi + 9/7)*(xi + 11/7)",
    "x^2": "(xi + 9/7)*(xi + 11/7)*(xi + 15/7)",
    "x*y": "(xi + 10/7)*(xi + 12/7)*(xi + 13/7)",
    "x*y*z": "(xi + 2)^3",
    "x^7": "(xi + 5)*(xi + 3)*(xi + 2)",
}

NON_ISOLATED_TABLE = {
    "1": "(xi + 1)^4",
}

FOUR_VARIABLE_DIVISOR = "*".join(f"(xi + {k + 7}/6)" for k in range(12))

# the four-variable example: x y^2 + x^2 y + z t^3 + t z^3 + lambda x y z t
FOUR_VARIABLE_INPUT = {"monomials": [[1, 2, 0, 0], [2, 1, 0, 0], [0, 0, 1, 3], [0, 0, 3, 1]]}

ALL_TABLES = {
    "quintic": QUINTIC_TABLE,
    "klein": KLEIN_TABLE,
    "non_isolated": NON_ISOLATED_TABLE,
}
