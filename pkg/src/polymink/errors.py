"""Exception hierarchy.

Every error carries a machine-readable ``code`` that the CLI puts into its
error documents. Subclasses of :class:`ValidationError` mean the input
polytope was rejected; everything else is a computation error.
"""

from __future__ import annotations


class PolyminkError(Exception):
    code = "error"


class ValidationError(PolyminkError):
    code = "validation_error"


class NotFullDimensional(ValidationError):
    code = "not_full_dimensional"


class FacetNotSupporting(ValidationError):
    code = "facet_not_supporting"


class DegenerateInput(ValidationError):
    code = "degenerate_input"


class FacetsRequired(ValidationError):
    code = "facets_required"


class DocumentError(PolyminkError):
    code = "malformed_document"


class PiPowerMismatch(PolyminkError):
    code = "pi_power_mismatch"


class UnsupportedDimension(PolyminkError):
    code = "unsupported_dimension"


class MethodUnsupported(PolyminkError):
    code = "method_unsupported"


class RankTooHigh(PolyminkError):
    code = "rank_too_high"


class DegenerateSimplex(PolyminkError):
    code = "degenerate_simplex"
