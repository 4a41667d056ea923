"""Exception hierarchy. Everything derives from :class:`MidhaulError`."""


class MidhaulError(Exception):
    pass


class SceneCapacityError(MidhaulError, ValueError):
    """More CU/DU nodes were requested than the scene has rooftops."""


class TraceFormatError(MidhaulError, ValueError):
    """A trace or node file row could not be parsed."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column!r}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class ReferentialIntegrityError(MidhaulError, ValueError):
    """A path references a node id that is not in the inventory."""


class DegenerateAlignmentError(MidhaulError, ValueError):
    """The mean departure direction of a CU's DUs is (nearly) zero."""


class ZFInfeasibleError(MidhaulError, ValueError):
    """Too few transmit antennas for zero-forcing."""


class UncoverableError(MidhaulError, ValueError):
    """Some DUs have no edge to any CU."""

    def __init__(self, du_ids):
        self.du_ids = tuple(du_ids)
        super().__init__("DUs without any CU above the power threshold: " + ", ".join(self.du_ids))


class PlanEvaluationError(MidhaulError, RuntimeError):
    """Alignment or precoding failed for a specific CU group."""
