"""Division-by-zero calculus: values of functions at isolated singularities."""

import json

from ._dbzcalc import (
    DEFAULT_ORDER,
    DEFAULT_PRECISION,
    DbzError,
    dbz_value,
    disk_map,
    ellipse_map,
    estimate_coeffs,
    invert,
    map_radius_center,
    segment_map,
    to_plane,
    to_sphere,
    yamada,
)
from . import _dbzcalc


def expand(expr, var="x", at="0", order=DEFAULT_ORDER, params="", mode="exact", precision=DEFAULT_PRECISION):
    """Laurent expansion of expr about at, as a dict in the series JSON schema."""
    return json.loads(_dbzcalc.expand_json(expr, var, at, order, params, mode, precision))


def corpus(mode="exact", precision=DEFAULT_PRECISION):
    """Runs the built-in corpus and returns the report dict."""
    return json.loads(_dbzcalc.corpus_json(mode, precision))


__all__ = [
    "DEFAULT_ORDER",
    "DEFAULT_PRECISION",
    "DbzError",
    "corpus",
    "dbz_value",
    "disk_map",
    "ellipse_map",
    "estimate_coeffs",
    "expand",
    "invert",
    "map_radius_center",
    "segment_map",
    "to_plane",
    "to_sphere",
    "yamada",
]
