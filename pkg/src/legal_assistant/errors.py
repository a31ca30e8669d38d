"""Exception hierarchy. Every error carries a machine-readable code for the API layer."""


class LegalAssistantError(Exception):
    """Base class; `code` is stable and machine-readable, the message is for humans."""

    code = "internal"
    retryable = False


class ArgumentError(LegalAssistantError, ValueError):
    code = "bad_argument"


class ParseError(LegalAssistantError):
    code = "parse_error"

    def __init__(self, message, missing_section=None):
        super().__init__(message)
        self.missing_section = missing_section


class ProviderError(LegalAssistantError):
    """Transient provider failure; callers may retry."""

    code = "provider_failure"
    retryable = True


class ProtocolError(LegalAssistantError):
    """Provider returned output that violates the expected schema. Never coerced."""

    code = "protocol_violation"


class FixtureMissError(LegalAssistantError):
    """Replay-mode provider has no recorded response for this request hash."""

    code = "fixture_miss"


class MergeConflictError(LegalAssistantError):
    code = "merge_conflict"


class UnknownNodeError(LegalAssistantError, KeyError):
    code = "unknown_node"


class EmptyGraphError(LegalAssistantError):
    code = "empty_graph"


class MissingEmbeddingError(LegalAssistantError, KeyError):
    code = "missing_embedding"


class ConfigError(LegalAssistantError):
    code = "bad_config"


class StateError(LegalAssistantError):
    """Operation applied in a session state that does not permit it."""

    code = "invalid_state"


class IncompleteSubmissionError(LegalAssistantError):
    code = "incomplete_submission"


class UnsupportedRegionError(LegalAssistantError):
    code = "unsupported_region"


class NoMatchError(LegalAssistantError):
    """No question template clears the minimum node overlap."""

    code = "no_template_match"


class DegenerateVectorError(LegalAssistantError):
    code = "degenerate_vector"


class NoProvisionsError(LegalAssistantError):
    code = "no_provisions"


class EnvironmentExhaustedError(LegalAssistantError):
    code = "no_candidates"
