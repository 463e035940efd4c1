"""Exception types raised across the package."""


class AthnError(Exception):
    """Base class for all package errors."""


class SameHubError(AthnError):
    """Origin and destination map to the same transfer hub."""

    def __init__(self, order_id, hub):
        super().__init__(f"order {order_id}: origin and destination share hub {hub}")
        self.order_id = order_id
        self.hub = hub


class NoTrucksError(AthnError):
    """A subproblem has tasks but no trucks to perform them."""


class TooLargeError(AthnError):
    """Instance exceeds the size an exhaustive method can handle."""


class ParseError(AthnError):
    pass


class MalformedOrderError(AthnError):
    def __init__(self, order_number, reason=""):
        msg = f"malformed order {order_number}"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)
        self.order_number = order_number


class ConfigError(AthnError):
    pass


class SchemaError(AthnError):
    pass


class GenerationError(AthnError):
    pass
