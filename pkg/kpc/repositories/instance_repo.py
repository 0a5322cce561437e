import re
from typing import List, Tuple, Union
from pathlib import Path
from kpc.models import Instance
from kpc.schemas import InstanceCreate
from kpc.core.errors import ParseError

NAME_TAG = "# name:"
_INT = re.compile(r"^-?\d+$")
_NUMBER = re.compile(r"^-?(\d+\.\d*|\.\d+|\d+)([eE][-+]?\d+)?$")


class InstanceRepository:
    """Reads and writes the KPC text format (0-based indices, '#' comments)"""

    def dumps(self, inst: Instance) -> str:
        # line breaks are the only characters a name line cannot carry
        name = inst.name.replace("\r", " ").replace("\n", " ")
        lines = [f"{NAME_TAG} {name}" if name else NAME_TAG]
        lines.append(f"{inst.n} {len(inst.edges)} {inst.capacity}")
        lines.extend(f"{p} {w}" for p, w in zip(inst.profits, inst.weights))
        lines.extend(f"{i} {j}" for i, j in inst.edges)
        return "\n".join(lines) + "\n"

    def loads(self, text: str, default_name: str = "") -> InstanceCreate:
        name = default_name
        rows: List[Tuple[int, List[int]]] = []
        for lineno, line in enumerate(text.split("\n"), start=1):
            if line.startswith("#"):
                if line.startswith(NAME_TAG) and not rows:
                    name = line[len(NAME_TAG):].rstrip("\r")
                    name = name[1:] if name.startswith(" ") else name
                continue
            tokens = line.split()
            if not tokens:
                continue
            rows.append((lineno, [self._parse_int(tok, lineno) for tok in tokens]))

        if not rows:
            raise ParseError("missing header 'n m c'", line=None, section="header")

        lineno, header = rows[0]
        if len(header) != 3:
            raise ParseError(f"header needs 3 integers 'n m c', got {len(header)}", line=lineno, section="header")
        n, m, capacity = header
        if n < 0 or m < 0:
            raise ParseError("item and edge counts must be non-negative", line=lineno, section="header")

        body = rows[1:]
        items = body[:n]
        edges = body[n:n + m]
        if len(items) < n:
            raise ParseError(
                f"truncated file: items section expects {n} lines, found {len(items)}",
                line=None, section="items"
            )
        if len(edges) < m:
            raise ParseError(
                f"truncated file: edges section expects {m} lines, found {len(edges)}",
                line=None, section="edges"
            )
        if len(body) > n + m:
            extra_line = body[n + m][0]
            raise ParseError("unexpected content after the edges section", line=extra_line, section="trailer")

        for section, block in (("items", items), ("edges", edges)):
            for row_line, values in block:
                if len(values) != 2:
                    raise ParseError(f"{section} lines need exactly 2 integers", line=row_line, section=section)

        return InstanceCreate(
            name=name,
            capacity=capacity,
            profits=[values[0] for _, values in items],
            weights=[values[1] for _, values in items],
            edges=[(values[0], values[1]) for _, values in edges],
        )

    def read_raw(self, path: Union[str, Path]) -> InstanceCreate:
        path = Path(path)
        text = path.read_text(encoding="utf-8")
        return self.loads(text, default_name=path.stem)

    def write(self, inst: Instance, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.dumps(inst))
        return path

    def list_paths(self, root: Union[str, Path]) -> List[Path]:
        return sorted(Path(root).rglob("*.kpc"))

    @staticmethod
    def _parse_int(token: str, lineno: int) -> int:
        if _INT.match(token):
            return int(token)
        if _NUMBER.match(token):
            raise ParseError(f"fractional value '{token}' where an integer is required", line=lineno)
        raise ParseError(f"invalid token '{token}'", line=lineno)
