"""Exception hierarchy.

Config problems map to CLI exit code 2, everything else numerical to 3.
"""


class HornscanError(Exception):
    pass


class ConfigError(HornscanError):
    pass


class SafetyError(HornscanError):
    def __init__(self, ratio: float, limit: float):
        self.ratio = ratio
        self.limit = limit
        super().__init__(
            f"drive field is {ratio:.3f} of the poling field (limit {limit:.3f})"
        )


class GeometryError(HornscanError):
    pass


class ConvergenceError(HornscanError):
    pass


class NumericalBlowupError(HornscanError):
    pass


class MetricsError(HornscanError):
    pass


class ComparisonError(HornscanError):
    pass
