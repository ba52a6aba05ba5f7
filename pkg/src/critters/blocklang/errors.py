"""Errors raised by block-language evaluation and (de)serialization."""


class BlocklangError(Exception):
    """Base class for all block-language errors."""


class TypeMismatchError(BlocklangError):
    """Two operands (or an attribute and its new value) have different types."""


class UnknownAttributeError(BlocklangError):
    """An expression referenced an attribute the state does not carry."""


class TileContextMissingError(BlocklangError):
    """A tile check was evaluated without a tile context."""


class CounterOverflowError(BlocklangError):
    """A counter attribute exceeded the configured cap."""


class AstSyntaxError(BlocklangError):
    """The input text is not valid JSON.

    ``pos`` is the character offset of the error when known.
    """

    def __init__(self, message: str, pos: int | None = None):
        super().__init__(message)
        self.pos = pos


class AstSchemaError(BlocklangError):
    """The JSON parsed, but does not describe a known node shape."""
