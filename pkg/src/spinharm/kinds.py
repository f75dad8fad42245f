import enum


class OperatorKind(enum.Enum):
    """The six operators; the primed ladder operators are divided by hbar."""

    Mx = "Mx"
    My = "My"
    Mz = "Mz"
    M2 = "M2"
    MplusPrime = "M+'"
    MminusPrime = "M-'"

    @classmethod
    def parse(cls, name: str) -> "OperatorKind":
        for k in cls:
            if name in (k.name, k.value):
                return k
        raise ValueError(f"unknown operator {name!r}")
