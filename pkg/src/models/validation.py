"""Round-trip validation data models"""
from dataclasses import dataclass

REPORT_COLUMNS = [
    "product", "insertions", "deletions", "updates",
    "statementMoves", "modifiedLoc", "totalLoc", "repErr",
]


@dataclass
class DiffReport:
    """Structural differences between an original and a regenerated product"""
    insertions: int = 0
    deletions: int = 0
    updates: int = 0
    statement_moves: int = 0
    modified_loc: int = 0
    total_loc_original: int = 0

    def is_identical(self) -> bool:
        return not (self.insertions or self.deletions or self.updates or self.statement_moves)


@dataclass
class RoundTripResult:
    """Outcome of regenerating one integrated product"""
    product: str
    report: DiffReport
    rep_err: float

    def as_row(self) -> dict:
        return {
            "product": self.product,
            "insertions": self.report.insertions,
            "deletions": self.report.deletions,
            "updates": self.report.updates,
            "statementMoves": self.report.statement_moves,
            "modifiedLoc": self.report.modified_loc,
            "totalLoc": self.report.total_loc_original,
            "repErr": self.rep_err,
        }
