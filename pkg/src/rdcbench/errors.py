"""Exception kinds raised across the package.

Every error carries a short ``kind`` string so the command line front end can
emit structured records without inspecting exception types.
"""


class RdcError(ValueError):
    kind = "error"

    def __init__(self, message, record=None):
        super().__init__(message)
        self.record = record

    def to_record(self):
        out = {"kind": self.kind, "message": str(self)}
        if self.record is not None:
            out["record"] = self.record
        return out


class ParseError(RdcError):
    kind = "parse_error"


class InvariantViolation(RdcError):
    kind = "invariant_violation"


class DuplicateCodec(RdcError):
    kind = "duplicate_codec"


class DomainError(RdcError):
    """Query outside the domain of a fitted curve or a formula."""

    kind = "domain_error"


class NoOverlap(RdcError):
    kind = "no_overlap"


class NonMonotone(RdcError):
    kind = "non_monotone"


class DegenerateProjection(RdcError):
    kind = "degenerate_projection"


class DegenerateCurve(RdcError):
    kind = "degenerate_curve"


class GridMismatch(RdcError):
    kind = "grid_mismatch"
