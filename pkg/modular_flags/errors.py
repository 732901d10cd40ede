"""Exception hierarchy of the package.

Every exception carries a machine readable ``code`` and the exit status used
by the command line front end.
"""


class ModularFlagsError(Exception):
    code = "error"
    exit_code = 1


class InputError(ModularFlagsError, ValueError):
    code = "invalid_input"
    exit_code = 2


class NotACharacterError(InputError):
    code = "not_a_character"


class UnsupportedCaseError(ModularFlagsError, NotImplementedError):
    code = "unsupported"
    exit_code = 3


class CapExceededError(UnsupportedCaseError):
    code = "cap_exceeded"


class IndeterminateError(ModularFlagsError, ArithmeticError):
    code = "indeterminate"
    exit_code = 4


class ConsistencyError(ModularFlagsError, RuntimeError):
    code = "internal_consistency"
    exit_code = 5
