"""Catalog of Gosper-product schemes, their file format and coefficient series."""

from .catalog import (
    FAMILIES,
    builtin_names,
    make_amdeberhan_cubic,
    make_amdeberhan_zeilberger,
    make_borwein,
    make_harmonic3_finite,
    make_koecher,
    make_leschiner,
    make_markov_hurwitz,
    make_tauraso,
    make_tauraso_quartic,
    resolve_builtin,
)
from .definition import (
    ConstantDescriptor,
    SchemeDef,
    SchemeError,
    SchemeSyntaxError,
    parse_rational,
    parse_scheme,
    render_scheme,
)
from .expr import ExprSyntaxError, parse_expr
from .run import dense_product, evaluate, stream
from .series import (
    borwein_coefficient_series,
    borwein_summands,
    koecher_coefficient_series,
    koecher_partial_sums,
    koecher_summands,
    leschiner_coefficient_series,
    leschiner_printed_series,
    leschiner_report,
    leschiner_summands,
)

__all__ = [
    "FAMILIES",
    "builtin_names",
    "make_amdeberhan_cubic",
    "make_amdeberhan_zeilberger",
    "make_borwein",
    "make_harmonic3_finite",
    "make_koecher",
    "make_leschiner",
    "make_markov_hurwitz",
    "make_tauraso",
    "make_tauraso_quartic",
    "resolve_builtin",
    "ConstantDescriptor",
    "SchemeDef",
    "SchemeError",
    "SchemeSyntaxError",
    "parse_rational",
    "parse_scheme",
    "render_scheme",
    "ExprSyntaxError",
    "parse_expr",
    "dense_product",
    "evaluate",
    "stream",
    "borwein_coefficient_series",
    "borwein_summands",
    "koecher_coefficient_series",
    "koecher_partial_sums",
    "koecher_summands",
    "leschiner_coefficient_series",
    "leschiner_printed_series",
    "leschiner_report",
    "leschiner_summands",
]
