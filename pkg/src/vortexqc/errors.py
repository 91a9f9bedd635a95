"""Exception types raised by the simulator."""


class SizeError(ValueError):
    """Requested Fock space is empty or too large to hold densely."""


class DimensionError(ValueError):
    """Operands live on Fock spaces of different dimension."""


class ContractError(ValueError):
    """An input violates a precondition (non-Hermitian, unnormalized, bad index...)."""


class ConsistencyError(RuntimeError):
    """A numerically constructed object failed an internal identity check."""


class ResourceError(RuntimeError):
    """A schedule would need more integration steps than allowed."""


class LeakageError(ValueError):
    """State has weight outside the logical subspace a gate acts on."""


class ProtocolFailure(RuntimeError):
    """The two-qubit protocol could not locate the exchange oscillation."""
