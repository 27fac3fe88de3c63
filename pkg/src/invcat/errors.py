"""Exception hierarchy shared by all modules.

Every error carries a ``certificate`` dict that the CLI serializes verbatim,
so callers can report *which* condition failed and on which elements.
"""


class InvcatError(Exception):
    code = "error"

    def __init__(self, message, **certificate):
        super().__init__(message)
        self.certificate = certificate

    def to_json(self):
        return {"error": self.code, "message": str(self), **_jsonable(self.certificate)}


class InputError(InvcatError):
    """Malformed input (exit code 2 in the CLI)."""

    code = "input_error"


class CheckFailure(InvcatError):
    """A mathematical condition does not hold (exit code 1 in the CLI)."""

    code = "check_failed"


# wf-core
class CycleFound(CheckFailure):
    code = "cycle_found"

    def __init__(self, path):
        super().__init__(f"relation is not well-founded: cycle {' -> '.join(map(str, path))}", path=list(path))
        self.path = list(path)


class DuplicateLabel(InputError):
    code = "duplicate_label"


class UnknownLabel(InputError):
    code = "unknown_label"


class StepFailure(InvcatError):
    code = "step_failure"

    def __init__(self, element, cause):
        super().__init__(f"recursion step failed at {element!r}: {cause}", element=element)
        self.element = element
        self.__cause__ = cause


# base-cat
class NotAMap(InputError):
    code = "not_a_map"


class SimplicialIdentityError(InputError):
    code = "simplicial_identity"


class NonCommutingDiagram(CheckFailure):
    code = "non_commuting"


class CompositionMismatch(InputError):
    code = "composition_mismatch"


# inverse-cat
class AssocFailure(CheckFailure):
    code = "assoc_failure"


class SpanLegNotPrefibration(CheckFailure):
    code = "span_leg_not_prefibration"


class MissingComposite(InputError):
    code = "missing_composite"


class LabelClash(InputError):
    code = "label_clash"


class InvalidProfile(InputError):
    code = "invalid_profile"


# diagram-engine / hom-engine
class TargetMismatch(InputError):
    code = "target_mismatch"


class NotPrefibrantBelow(CheckFailure):
    code = "not_prefibrant_below"


class MatchingObjectFailure(CheckFailure):
    code = "matching_object_failure"


class NotFibrantBase(CheckFailure):
    code = "not_fibrant_base"


class NotPrefibrant(CheckFailure):
    code = "not_prefibrant"


class SizeBoundExceeded(InputError):
    code = "size_bound_exceeded"


class UniversalPropertyViolation(CheckFailure):
    code = "universal_property_violation"


# orbit-gen
class BoundExceeded(InputError):
    code = "bound_exceeded"


class NotPrime(InputError):
    code = "not_prime"


class GroupAxiomError(InputError):
    code = "group_axiom"


# tt-emit
class UnorderedObjects(InputError):
    code = "unordered_objects"


class ScopeError(InputError):
    code = "scope_error"


class TTSyntaxError(InputError):
    code = "syntax_error"

    def __init__(self, message, line, column):
        super().__init__(f"{line}:{column}: {message}", line=line, column=column)
        self.line = line
        self.column = column


# cli-io
class SpecSyntaxError(TTSyntaxError):
    code = "spec_syntax_error"


class UnresolvedName(InputError):
    code = "unresolved_name"


class InstanceMismatch(InputError):
    code = "instance_mismatch"


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return repr(value)
