"""Exception types shared across modules.

The command line maps them to exit codes: check failures to 1, usage
and input problems to 2, exhausted budgets to 3.
"""


class WreathGrowthError(Exception):
    exit_code = 2


class PreconditionError(WreathGrowthError, ValueError):
    pass


class DomainError(WreathGrowthError, ValueError):
    """Arguments from incompatible groups, or a point outside the simplex."""


class UnsupportedInputError(WreathGrowthError, ValueError):
    """Input accepted by the parser but outside the range where results are sound."""


class ContractViolation(WreathGrowthError):
    """A supplied map fails to be a homomorphism, or similar."""


class InvalidTransversalError(WreathGrowthError, ValueError):
    pass


class SpecParseError(WreathGrowthError, ValueError):
    pass


class ResourceError(WreathGrowthError, RuntimeError):
    exit_code = 3
