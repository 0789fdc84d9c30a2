"""CSV/JSON formatting shared across output paths.

CSV floats carry 17 significant digits so files round-trip doubles exactly
and golden outputs stay byte-stable across runs.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Sequence


def fmt(value: float) -> str:
    return f"{value:.17g}"


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[str]]) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_json(path: str | Path, obj: object) -> None:
    Path(path).write_text(json.dumps(obj, indent=2) + "\n", encoding="utf-8")


def json_pretty(obj: object) -> str:
    return json.dumps(obj, indent=2)
