"""Exception types shared across the package."""


class SqlSynthError(Exception):
    pass


class NotFound(SqlSynthError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "not found"


class SchemaIntegrityError(SqlSynthError, ValueError):
    pass


class SqlSyntaxError(SqlSynthError, ValueError):
    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at offset {position})"
        super().__init__(message)
        self.position = position


class ResolutionError(SqlSynthError, ValueError):
    def __init__(self, identifier, message=None):
        super().__init__(message or f"cannot resolve identifier {identifier!r}")
        self.identifier = identifier


class UnsupportedQuery(SqlSynthError, ValueError):
    pass


class EmptyPool(SqlSynthError, ValueError):
    pass


class SlotUnfillable(SqlSynthError, RuntimeError):
    pass


class JoinPathUnavailable(SqlSynthError, RuntimeError):
    pass
