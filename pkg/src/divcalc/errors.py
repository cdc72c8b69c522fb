"""Error hierarchy for divcalc.

Everything raised on purpose derives from DivcalcError so the CLI can map
failures to exit code 1 without fishing through stdlib exception types.
"""


class DivcalcError(Exception):
    """Base class for all deliberate divcalc failures."""


class ModelError(DivcalcError):
    """Invalid lattice model data (asymmetric gram, label mismatch, bad JSON)."""


class ModelMismatchError(DivcalcError):
    """Two classes from different lattice models were combined."""


class LabelError(DivcalcError):
    """A divisor expression referenced a label the surface does not have."""


class ExprSyntaxError(DivcalcError):
    """Divisor expression failed to parse; carries the offending position."""

    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position


class OverflowGuardError(DivcalcError):
    """A computed integer left the 64-bit envelope the contract promises."""


class NodalClassError(DivcalcError):
    """A supplied nodal class does not have self-intersection -2."""


class NonCurveClassError(DivcalcError):
    """Adjunction or chi parity failed, the class cannot be a curve class."""


class PhiBoundError(DivcalcError):
    """Boxed isotropic search ended without certifying the phi invariant.

    The box was too small (or held no isotropic class at all); a larger
    box may succeed. Distinct from PhiInvariantError, which is final.
    """


class PhiInvariantError(DivcalcError):
    """Certified search exhausted every slice and found no witness small
    enough for the invariant phi^2 <= L^2.

    This means the supplied isotropic span is too sparse to represent the
    ambient geometry, so no larger search would help.
    """


class EvidenceError(DivcalcError):
    """A criterion was asked to rule without the fields its branch needs."""

    def __init__(self, message, missing=()):
        super().__init__(message)
        self.missing = tuple(missing)


class FixtureError(DivcalcError):
    """Unknown fixture id."""


class RangeError(DivcalcError):
    """A numeric input fell outside the range a formula is stated for."""
