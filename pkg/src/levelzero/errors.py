"""Exception hierarchy.  Every error carries the process exit code the CLI uses."""


class LevelZeroError(Exception):
    exit_code = 20


class LatticeError(LevelZeroError, ValueError):
    exit_code = 21


class SingularMatrix(LatticeError):
    exit_code = 22


class NotStable(LatticeError):
    exit_code = 23


class DenominatorError(LatticeError):
    exit_code = 24


class UnsupportedSpec(LevelZeroError, ValueError):
    exit_code = 10


class InvalidDatum(LevelZeroError, ValueError):
    exit_code = 25


class NotThetaStable(LevelZeroError, ValueError):
    exit_code = 26


class TooLarge(LevelZeroError):
    exit_code = 27


class BoundTooLarge(LevelZeroError):
    exit_code = 17


class IncompatiblePair(LevelZeroError, ValueError):
    exit_code = 28


class TwistedUnsupported(LevelZeroError):
    exit_code = 18


class NotAFace(LevelZeroError, ValueError):
    exit_code = 29


class BadVertex(LevelZeroError, ValueError):
    exit_code = 16


class ConfigError(LevelZeroError, ValueError):
    exit_code = 15


class InvalidPrimePower(ConfigError):
    exit_code = 11


class InvalidEll(ConfigError):
    exit_code = 12


class InvalidOrderBound(ConfigError):
    exit_code = 13


class InvalidThreads(ConfigError):
    exit_code = 14


class InvalidSize(ConfigError):
    exit_code = 19
