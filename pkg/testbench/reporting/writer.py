from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from testbench.core.exceptions import ArtifactIOError
from testbench.core.logger import log
from testbench.infrastructure.serialization import format_float, write_json, write_rows


def _cell(value: Any) -> str:
    if isinstance(value, float):
        return format_float(value)
    if value is None:
        return ""
    return str(value)


class ArtifactWriter:
    """
    Writes the CSV and JSON artifacts of one CLI run into a directory.

    Every report is stamped with the config digest and the library version so
    two runs with the same configuration produce byte-identical files.
    """

    def __init__(self, output_dir: str, stamp: Optional[Dict[str, str]] = None):
        """
        Args:
            output_dir: Directory receiving the artifacts, created on demand
            stamp: Fields merged into every JSON report (config digest, version)
        """
        self.output_dir = Path(output_dir)
        self.stamp = dict(stamp or {})
        self.written: List[Path] = []
        try:
            self.output_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise ArtifactIOError(
                f"cannot create output directory {self.output_dir}: {exc}"
            ) from exc

    def write_report(self, name: str, report: Dict[str, Any]) -> Path:
        payload = {**report, **self.stamp}
        path = write_json(payload, self.output_dir / f"{name}.json")
        self.written.append(path)
        log.debug("Report written", path=str(path))
        return path

    def write_table(self, name: str, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> Path:
        formatted = [[_cell(value) for value in row] for row in rows]
        path = write_rows(self.output_dir / f"{name}.csv", list(header), formatted)
        self.written.append(path)
        log.debug("Table written", path=str(path), rows=len(formatted))
        return path

    def summary(self) -> Dict[str, Any]:
        return {"output_dir": str(self.output_dir), "files": [p.name for p in self.written]}
