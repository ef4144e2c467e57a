from __future__ import annotations


class StabfanError(Exception):
    exit_code = 1


class InvalidRelation(StabfanError):
    exit_code = 2


class NotFiniteDimensional(StabfanError):
    exit_code = 2


class InvalidModule(StabfanError):
    exit_code = 2


class NonIntegral(StabfanError):
    pass


class EnumerationBudgetExceeded(StabfanError):
    exit_code = 3


class PrimeTooSmall(StabfanError):
    pass


class SplitFailed(StabfanError):
    exit_code = 3


class NotPresilting(StabfanError):
    pass


class NotInTbar(StabfanError):
    pass


class NotStringAlgebra(StabfanError):
    exit_code = 2


class VerificationFailed(StabfanError):
    exit_code = 4


class NotSemistable(StabfanError):
    pass
