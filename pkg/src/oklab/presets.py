"""Named example inputs, stored as canonical schema objects."""

from __future__ import annotations

from .errors import ValidationError

# Staircase with a genuinely non-polynomial volume function:
# pieces are the integers j with 2*sqrt(n1^2 + n2^2) <= j <= 2(n1 + n2).
NONPOLY = {
    "schema_version": 1, "r": 1, "s": 2,
    "staircase": {
        "lower": {"kind": "ceil_sqrt_quadratic",
                  "quadratic": [[4, 0], [0, 4]]},
        "upper": {"kind": "linear", "forms": [["2", "2"]]},
    },
}

# Volume function min(n1, n2); the global cone is spanned by
# (0|1,0), (0|0,1), (1|1,1).
MIN = {
    "schema_version": 1, "r": 1, "s": 2,
    "staircase": {
        "lower": {"kind": "linear", "forms": [["0", "0"]]},
        "upper": {"kind": "min", "forms": [["1", "0"], ["0", "1"]]},
    },
}

# A concave piecewise-linear volume function: min(2n1 + n2, n1 + 2n2).
CONCAVE_PL = {
    "schema_version": 1, "r": 1, "s": 2,
    "staircase": {
        "lower": {"kind": "linear", "forms": [["0", "0"]]},
        "upper": {"kind": "min", "forms": [["2", "1"], ["1", "2"]]},
    },
}

# Segre product: k[x1 t1, x2 t1, y1 t2, y2 t2].
SEGRE = {
    "schema_version": 1, "r": 4, "s": 2,
    "generators": [
        {"exp": [1, 0, 0, 0], "deg": [1, 0]},
        {"exp": [0, 1, 0, 0], "deg": [1, 0]},
        {"exp": [0, 0, 1, 0], "deg": [0, 1]},
        {"exp": [0, 0, 0, 1], "deg": [0, 1]},
    ],
}

# Golden-ratio staircase: pieces {0, ..., floor(89 n / 55)}, the 89/55
# convergent standing in for the irrational slope phi.
GOLDEN = {
    "schema_version": 1, "r": 1, "s": 1,
    "staircase": {
        "lower": {"kind": "linear", "forms": [["0"]]},
        "upper": {"kind": "linear", "forms": [["89/55"]]},
    },
}

PRESETS = {
    "nonpoly": NONPOLY,
    "min": MIN,
    "concave-pl": CONCAVE_PL,
    "segre": SEGRE,
    "golden": GOLDEN,
}


def preset(name):
    if name not in PRESETS:
        raise ValidationError(
            f"unknown preset {name!r}; valid names: "
            + ", ".join(sorted(PRESETS)))
    return PRESETS[name]
