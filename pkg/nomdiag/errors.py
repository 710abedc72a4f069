"""Exception hierarchy shared by the library, the CLI and the HTTP API."""
from nomdiag.constants import (
    ERR_ARITY_MISMATCH,
    ERR_DUPLICATE_NAME,
    ERR_ILL_TYPED_RESULT,
    ERR_INTERFACE_MISMATCH,
    ERR_INTERNAL,
    ERR_KIND_MISMATCH,
    ERR_NAME_NOT_IN_DOMAIN,
    ERR_NO_MATCH,
    ERR_NOT_A_PERMUTATION,
    ERR_OVERLAP,
    ERR_PARSE,
    ERR_SEQ_MISMATCH,
    ERR_TYPE,
    ERR_TYPE_MISMATCH,
    ERR_TYPE_VIOLATION,
    ERR_UNKNOWN_GENERATOR,
    ERR_UNSUPPORTED_GENERATOR,
    EXIT_PARSE_ERROR,
    EXIT_TYPE_ERROR,
)


class NomdiagError(Exception):
    """Base error. ``code`` is machine-readable, ``exit_code`` is what the CLI returns."""

    code: str = ERR_INTERNAL
    exit_code: int = EXIT_TYPE_ERROR


class TermTypeError(NomdiagError):
    """A term, map or rule instance is ill-typed or outside its domain."""

    code = ERR_TYPE


class OverlapError(TermTypeError):
    """Tensor of two arrows whose interfaces intersect (the tensor is undefined)."""

    code = ERR_OVERLAP


class SeqMismatch(TermTypeError):
    code = ERR_SEQ_MISMATCH


class UnknownGenerator(TermTypeError):
    code = ERR_UNKNOWN_GENERATOR


class DuplicateName(TermTypeError):
    code = ERR_DUPLICATE_NAME


class TypeMismatch(TermTypeError):
    code = ERR_TYPE_MISMATCH


class InterfaceMismatch(TermTypeError):
    code = ERR_INTERFACE_MISMATCH


class KindMismatch(TermTypeError):
    code = ERR_KIND_MISMATCH


class NameNotInDomain(TermTypeError):
    code = ERR_NAME_NOT_IN_DOMAIN


class NotAPermutationTerm(TermTypeError):
    code = ERR_NOT_A_PERMUTATION


class UnsupportedGenerator(TermTypeError):
    code = ERR_UNSUPPORTED_GENERATOR


class ArityMismatch(TermTypeError):
    code = ERR_ARITY_MISMATCH


class TypeViolation(TermTypeError):
    """A signature morphism sends a generator to a term of the wrong type."""

    code = ERR_TYPE_VIOLATION


class IllTypedResult(TermTypeError):
    """A rewrite would produce a term that does not typecheck in its context."""

    code = ERR_ILL_TYPED_RESULT


class NoMatch(NomdiagError):
    code = ERR_NO_MATCH


class ParseError(NomdiagError):
    """Malformed input text.

    Args:
        message: What went wrong.
        position: Character offset into the input, when known.
    """

    code = ERR_PARSE
    exit_code = EXIT_PARSE_ERROR

    def __init__(self, message: str, position: int | None = None) -> None:
        if position is not None:
            message = f"{message} (at offset {position})"
        super().__init__(message)
        self.position = position
