"""Truncated evaluation of a scheme via the streaming band accumulator."""

from __future__ import annotations

from typing import Iterator, Optional

from ..banded import BandAccumulator
from ..gosper_core import GosperMatrix, finite_product, segmented_product
from .definition import SchemeDef, SchemeError

__all__ = ["evaluate", "stream", "dense_product"]


def _terms_for(scheme: SchemeDef, terms: Optional[int]) -> int:
    if terms is None:
        if scheme.finite_terms is None:
            raise SchemeError(f"{scheme.name} is infinite; give a number of terms")
        return scheme.finite_terms
    if terms < 1:
        raise SchemeError("terms must be >= 1")
    if scheme.finite_terms is not None and terms > scheme.finite_terms:
        raise SchemeError(f"{scheme.name} has exactly {scheme.finite_terms} factors")
    return terms


def evaluate(scheme: SchemeDef, terms: Optional[int] = None, prec: Optional[int] = None) -> BandAccumulator:
    """Accumulate the first ``terms`` factors (all of them for finite schemes)."""
    terms = _terms_for(scheme, terms)
    return BandAccumulator(scheme.dim, prec).extend(scheme.factors(terms))


def stream(scheme: SchemeDef, prec: Optional[int] = None, limit: Optional[int] = None) -> Iterator[BandAccumulator]:
    """Yield the (shared, mutated) accumulator after each factor."""
    if limit is None:
        limit = scheme.finite_terms
    acc = BandAccumulator(scheme.dim, prec)
    k = 1
    while limit is None or k <= limit:
        acc.accumulate(scheme.factor(k))
        yield acc
        k += 1


def dense_product(scheme: SchemeDef, terms: Optional[int] = None, workers: Optional[int] = None) -> GosperMatrix:
    """Exact dense product of the factor matrices, optionally segmented across processes."""
    terms = _terms_for(scheme, terms)
    ms = [f.to_gosper() for f in scheme.factors(terms)]
    if workers and workers > 1:
        return segmented_product(ms, scheme.dim, segments=workers, workers=workers)
    return finite_product(ms, scheme.dim)
