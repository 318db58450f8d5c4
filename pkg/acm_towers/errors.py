"""Exception hierarchy shared by all modules.

Modules declare their specific exceptions next to the code raising them and
derive from one of the two classes here so that the CLI can map them onto
exit codes.
"""


class AcmTowersError(Exception):
    """Base class for all errors raised by ``acm_towers``"""


class InputError(AcmTowersError, ValueError):
    """Input violates a precondition (exit code 2)"""


class InvariantViolation(AcmTowersError, RuntimeError):
    """A structural property or internal invariant failed on a concrete instance (exit code 3)"""
