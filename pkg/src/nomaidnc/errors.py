class ConfigError(ValueError):
    """Invalid experiment or model parameters."""


class ContractError(ValueError):
    """A caller violated an operation's precondition."""


class OracleRefused(RuntimeError):
    """Exact search declined an instance larger than its vertex cap."""
