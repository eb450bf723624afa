import os

DEFAULT_MAX_GROUP_ORDER = 64
ENV_VAR = "EQK_MAX_GROUP_ORDER"

# homomorphism search: maximum number of generator-image candidates tried
DEFAULT_HOM_BUDGET = 2_000_000


def max_group_order() -> int:
    raw = os.environ.get(ENV_VAR)
    if not raw:
        return DEFAULT_MAX_GROUP_ORDER
    try:
        value = int(raw)
    except ValueError:
        from .errors import ParseError

        raise ParseError(f"{ENV_VAR} must be an integer, got {raw!r}") from None
    if value < 1:
        from .errors import ParseError

        raise ParseError(f"{ENV_VAR} must be positive, got {value}")
    return value
