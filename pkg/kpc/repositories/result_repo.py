import csv
import io
from typing import Iterable, List, TextIO, Union
from pathlib import Path
from kpc.models import SolveStatus
from kpc.schemas import CSV_HEADER, ResultRow
from kpc.core.errors import ParseError

FLOAT_DIGITS = 6


def csv_float(value: float) -> float:
    """Round a float to the precision the CSV stores"""
    return float(f"{value:.{FLOAT_DIGITS}f}")


class ResultRepository:
    """Per-instance campaign CSV with the fixed header"""

    def dump(self, rows: Iterable[ResultRow], fh: TextIO) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow([
                row.instance,
                row.status.value,
                row.profit,
                row.upper_bound,
                f"{row.gap_percent:.{FLOAT_DIGITS}f}",
                row.nodes,
                f"{row.seconds:.{FLOAT_DIGITS}f}",
            ])

    def dumps(self, rows: Iterable[ResultRow]) -> str:
        buffer = io.StringIO()
        self.dump(rows, buffer)
        return buffer.getvalue()

    def write(self, rows: Iterable[ResultRow], path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            self.dump(rows, fh)
        return path

    def loads(self, text: str) -> List[ResultRow]:
        reader = csv.reader(io.StringIO(text))
        header = next(reader, None)
        if tuple(header or ()) != CSV_HEADER:
            raise ParseError(f"unexpected CSV header {header}", line=1)
        rows = []
        for lineno, record in enumerate(reader, start=2):
            if len(record) != len(CSV_HEADER):
                raise ParseError(f"expected {len(CSV_HEADER)} fields, got {len(record)}", line=lineno)
            try:
                rows.append(ResultRow(
                    instance=record[0],
                    status=SolveStatus(record[1]),
                    profit=int(record[2]),
                    upper_bound=int(record[3]),
                    gap_percent=float(record[4]),
                    nodes=int(record[5]),
                    seconds=float(record[6]),
                ))
            except ValueError as e:
                raise ParseError(str(e), line=lineno)
        return rows

    def read(self, path: Union[str, Path]) -> List[ResultRow]:
        return self.loads(Path(path).read_text(encoding="utf-8"))
