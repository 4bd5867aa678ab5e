"""Exception hierarchy; every error carries a machine-parseable category."""


class Neighbor2vecError(Exception):
    category = "internal"


class FormatError(Neighbor2vecError):
    """Malformed input files or inconsistent data shapes."""

    category = "format"


class ConfigError(Neighbor2vecError):
    """Bad configuration keys, values or flag combinations."""

    category = "config"


class DataError(Neighbor2vecError):
    """Task/split inconsistencies and invalid node or edge references."""

    category = "data"


class NumericError(Neighbor2vecError):
    """Non-finite values encountered during training."""

    category = "numeric"
