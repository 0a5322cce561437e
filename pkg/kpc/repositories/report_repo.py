from typing import Dict, List, Optional, Union
from pathlib import Path
from kpc.schemas import TableSummary

SET2_TABLES = {"set2_correlated", "set2_random"}


def _seconds(value: Optional[float]) -> str:
    return "-" if value is None else f"{value:.1f}"


class ReportRepository:
    """Markdown rendering of the grouped tables: Opt | Sec | Gap%, or Opt | Gap % | Sec for the second set"""

    def render_table(self, summary: TableSummary) -> str:
        set2 = summary.table in SET2_TABLES
        metrics = ["Opt", "Gap %", "Sec"] if set2 else ["Opt", "Sec", "Gap%"]
        header = list(summary.key_columns) + metrics
        lines = [
            f"### {summary.title}",
            "",
            "| " + " | ".join(header) + " |",
            "|" + "|".join(["---"] * len(summary.key_columns) + ["---:"] * len(metrics)) + "|",
        ]
        previous: Optional[str] = None
        for report in summary.groups:
            key = list(report.key)
            # first key column printed once per block
            if len(key) > 1 and key[0] == previous:
                shown = [""] + key[1:]
            else:
                shown = key
            previous = key[0]
            opt = str(report.opt_count)
            sec = _seconds(report.mean_seconds_over_solved)
            gap = f"{report.mean_gap_percent:.2f}"
            values = [opt, gap, sec] if set2 else [opt, sec, gap]
            lines.append("| " + " | ".join(shown + values) + " |")

        average = [
            f"{summary.average_opt:.1f}",
            f"{summary.average_gap:.2f}",
            _seconds(summary.average_seconds),
        ]
        if not set2:
            average = [average[0], average[2], average[1]]
        padding = [""] * (len(summary.key_columns) - 1)
        lines.append("| " + " | ".join(["Average"] + padding + average) + " |")
        return "\n".join(lines) + "\n"

    def render(self, summaries: Dict[str, TableSummary]) -> str:
        sections: List[str] = [self.render_table(s) for s in summaries.values()]
        return "\n".join(sections)

    def write(self, summaries: Dict[str, TableSummary], path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.render(summaries), encoding="utf-8")
        return path
