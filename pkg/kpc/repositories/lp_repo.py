from typing import List, Sequence, Union
from pathlib import Path
from kpc.models import Instance

MAX_LINE = 255
CONTINUATION = "   "


def _wrap(head: str, terms: Sequence[str], tail: str = "") -> List[str]:
    """Join terms with ' + ', breaking lines before MAX_LINE characters"""
    lines: List[str] = []
    line = head
    for pos, term in enumerate(terms):
        piece = term if pos == 0 else f" + {term}"
        if pos > 0 and len(line) + len(piece) > MAX_LINE:
            lines.append(line)
            line = f"{CONTINUATION}+ {term}"
        else:
            line += piece
    if tail:
        if len(line) + len(tail) > MAX_LINE:
            lines.append(line)
            line = CONTINUATION + tail.lstrip()
        else:
            line += tail
    lines.append(line)
    return lines


class LPRepository:
    """
    Writes the KPC model in LP format: profit objective, one capacity row,
    one `x_i + x_j <= 1` row per conflict edge (sorted), all variables binary.
    """

    def dumps(self, inst: Instance) -> str:
        n = inst.n
        lines = [f"\\ KPC model: {inst.name}" if inst.name else "\\ KPC model"]
        lines.append("Maximize")
        lines.extend(_wrap(" obj: ", [f"{inst.profits[i]} x{i}" for i in range(n)]))
        lines.append("Subject To")
        if n:
            lines.extend(_wrap(
                " capacity: ",
                [f"{inst.weights[i]} x{i}" for i in range(n)],
                f" <= {inst.capacity}",
            ))
        for i, j in inst.edges:
            lines.append(f" conflict_{i}_{j}: x{i} + x{j} <= 1")
        lines.append("Binaries")
        if n:
            line = ""
            for i in range(n):
                name = f"x{i}"
                if line and len(line) + len(name) + 1 > MAX_LINE:
                    lines.append(line)
                    line = ""
                line += f" {name}"
            lines.append(line)
        lines.append("End")
        return "\n".join(lines) + "\n"

    def write(self, inst: Instance, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.dumps(inst))
        return path
