"""
Modtrace error hierarchy

Every mathematical failure is raised as a subclass of ModtraceError with a
stable ``code`` string; the CLI and the report service serialize that code.
"""


class ModtraceError(Exception):
    code = "modtrace_error"

    def __init__(self, message: str = "", **details):
        super().__init__(message or self.code)
        self.message = message or self.code
        self.details = details

    def to_dict(self) -> dict:
        body = {"error": self.code, "message": self.message}
        if self.details:
            body["details"] = {k: str(v) for k, v in self.details.items()}
        return body


# ==================================================================
# series
# ==================================================================

class DomainMismatch(ModtraceError):
    code = "domain_mismatch"


class NonInvertibleLeading(ModtraceError):
    code = "non_invertible_leading"


class ZeroDivide(ModtraceError):
    code = "zero_divide"


class OrderUnderflow(ModtraceError):
    code = "order_underflow"


class BadConstantTerm(ModtraceError):
    code = "bad_constant_term"


class FractionalLeadExponent(ModtraceError):
    code = "fractional_lead_exponent"


class UnknownName(ModtraceError):
    code = "unknown_name"


class InternalInconsistency(ModtraceError):
    code = "internal_inconsistency"


# ==================================================================
# hecke / lifts
# ==================================================================

class NonPositiveIndex(ModtraceError):
    code = "non_positive_index"


class BadLeadingCoefficient(ModtraceError):
    code = "bad_leading_coefficient"


class PlusSpaceViolation(ModtraceError):
    code = "plus_space_violation"


class InconsistentPowerSums(ModtraceError):
    code = "inconsistent_power_sums"


class RankDeficient(ModtraceError):
    code = "rank_deficient"


# ==================================================================
# qforms / lvalues
# ==================================================================

class BadDiscriminant(ModtraceError):
    code = "bad_discriminant"


class NoCoprimeRepresentationFound(ModtraceError):
    code = "no_coprime_representation"


class MethodDisagreement(ModtraceError):
    code = "method_disagreement"


# ==================================================================
# numeval
# ==================================================================

class PrecisionLoss(ModtraceError):
    code = "precision_loss"


class NotInvariant(ModtraceError):
    code = "not_invariant"


class StepTooLarge(ModtraceError):
    code = "step_too_large"


class ConvergenceFailure(ModtraceError):
    code = "convergence_failure"


# ==================================================================
# traces / borcherds
# ==================================================================

class NonRealResult(ModtraceError):
    code = "non_real_result"


class HypothesisViolated(ModtraceError):
    code = "hypothesis_violated"


class NonIntegralSolution(ModtraceError):
    code = "non_integral_solution"


class UniquenessFailure(ModtraceError):
    code = "uniqueness_failure"


class NonRealCoefficient(ModtraceError):
    code = "non_real_coefficient"
