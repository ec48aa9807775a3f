"""Exception hierarchy shared across the pipeline.

Every error carries the process exit code the CLI maps it to:
2 = bad input, 3 = a stage produced an empty result, 4 = I/O failure.
"""


class PipelineError(Exception):
    exit_code = 2

    def __init__(self, message, stage=None):
        super().__init__(message)
        self.stage = stage


class InputError(PipelineError):
    """Malformed or contradictory input data."""

    exit_code = 2


class EmptyResultError(PipelineError):
    """A stage legitimately ran but left nothing to work with."""

    exit_code = 3


class IoFailure(PipelineError):
    exit_code = 4


class MalformedRecord(InputError):
    def __init__(self, line_number, reason):
        super().__init__(f"line {line_number}: {reason}")
        self.line_number = line_number


class DuplicateId(InputError):
    def __init__(self, doc_id):
        super().__init__(f"duplicate document id {doc_id!r}")
        self.doc_id = doc_id


class DomainError(InputError):
    """A numeric argument outside its documented domain."""


class NegativeWeight(InputError):
    """A vector component violated the nonnegative-weight contract."""


class UnsortedInput(InputError):
    """A sequence that must be sorted ascending was not."""


class InvalidK(InputError):
    """Cluster or neighbor count outside [1, n]."""


class UnknownDocId(InputError):
    def __init__(self, doc_id):
        super().__init__(f"prediction refers to unknown document id {doc_id!r}")
        self.doc_id = doc_id


class ModelVersionMismatch(InputError):
    """Model file schema version not supported by this build."""


class EmptyResult(EmptyResultError):
    """No category survived filtering."""


class EmptyVocabulary(EmptyResultError):
    """No terms survived preprocessing."""


class EmptyCategory(EmptyResultError):
    def __init__(self, category):
        super().__init__(f"category {category!r} lost all representatives")
        self.category = category


class EmptyModel(EmptyResultError):
    """Model contains no representatives."""
