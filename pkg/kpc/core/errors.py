from typing import Any, Dict, Optional


class KPCError(ValueError):
    """Base for every domain error; `error` is the stable code shown to users"""

    error = "KPCError"

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details: Dict[str, Any] = details

    def to_dict(self) -> Dict[str, Any]:
        return {"error": self.error, "message": self.message, "details": self.details or None}


class NegativeOrZeroValue(KPCError):
    error = "NegativeOrZeroValue"


class IndexOutOfRange(KPCError):
    error = "IndexOutOfRange"


class SelfLoop(KPCError):
    error = "SelfLoop"


class CapacityNegative(KPCError):
    error = "CapacityNegative"


class LengthMismatch(KPCError):
    error = "LengthMismatch"


class NonIntegralValue(KPCError):
    error = "NonIntegralValue"


class ParseError(KPCError):
    error = "ParseError"

    def __init__(self, message: str, line: Optional[int] = None, **details: Any):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message, line=line, **details)
        self.line = line


class PartitionInvalid(KPCError):
    error = "PartitionInvalid"


class LimitsInvalid(KPCError):
    error = "LimitsInvalid"


class TooLargeForOracle(KPCError):
    error = "TooLargeForOracle"


class InfeasibleStart(KPCError):
    error = "InfeasibleStart"


class SpecInvalid(KPCError):
    error = "SpecInvalid"


class EmptyCampaign(KPCError):
    error = "EmptyCampaign"
