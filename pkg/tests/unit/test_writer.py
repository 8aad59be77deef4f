import json

import pytest

from testbench.core.exceptions import ArtifactIOError
from testbench.infrastructure.serialization import read_rows
from testbench.reporting.writer import ArtifactWriter


def test_reports_carry_the_stamp(tmp_path):
    writer = ArtifactWriter(str(tmp_path / "out"), stamp={"config_digest": "abc", "version": "0"})
    path = writer.write_report("region", {"status": "admissible"})
    payload = json.loads(path.read_text(encoding="utf-8"))
    assert payload == {"status": "admissible", "config_digest": "abc", "version": "0"}
    assert writer.summary()["files"] == ["region.json"]


def test_table_cells_are_formatted(tmp_path):
    writer = ArtifactWriter(str(tmp_path))
    path = writer.write_table("trials", ["trial", "ratio", "alpha"], [[0, 0.1, None], [1, 2.5, 0.3]])
    rows = read_rows(path)
    assert rows[0] == {"trial": "0", "ratio": "0.1", "alpha": ""}
    assert rows[1]["alpha"] == "0.3"


def test_output_dir_on_a_file_fails(tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("", encoding="utf-8")
    with pytest.raises(ArtifactIOError):
        ArtifactWriter(str(blocker / "out"))
