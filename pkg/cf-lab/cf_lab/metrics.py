"""Line-delimited metrics stream.

The first line is a header record carrying the schema tag and the run's
identity; every following line is one record with a ``kind`` field
(``eval``, ``selfplay``, ``episode``, ``sample`` or ``loss``) and a
``timestep``. Keys are written sorted and no wall-clock data is stored, so
two runs of the same configuration produce identical bytes.
"""

from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

import numpy as np
import orjson
import structlog

from .errors import MetricsFormatError, UsageError

logger = structlog.get_logger(__name__)

SCHEMA = "cf-metrics/1"
RECORD_KINDS = ("eval", "selfplay", "episode", "sample", "loss")

_DUMP_OPTIONS = orjson.OPT_SORT_KEYS | orjson.OPT_SERIALIZE_NUMPY


def _plain(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, dict):
        return {key: _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    return value


def encode_record(record: Dict[str, Any]) -> bytes:
    return orjson.dumps(_plain(record), option=_DUMP_OPTIONS) + b"\n"


class MetricsWriter:
    """Appends records to a metrics file, enforcing non-decreasing timesteps."""

    def __init__(self, path: Union[str, Path], header: Dict[str, Any], append: bool = False):
        """Open a metrics stream.

        Args:
            path: Target file
            header: Header fields; ``kind`` and ``schema`` are filled in
            append: Continue an existing stream instead of truncating it
        """
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.last_timestep = 0
        self.records_written = 0

        if append and self.path.exists() and self.path.stat().st_size > 0:
            _, existing = read_metrics(self.path)
            if existing:
                self.last_timestep = int(existing[-1].get("timestep", 0))
            self._handle = open(self.path, "ab")
        else:
            self._handle = open(self.path, "wb")
            self._handle.write(encode_record({**header, "kind": "header", "schema": SCHEMA}))

    def write(self, record: Dict[str, Any]) -> None:
        kind = record.get("kind")
        if kind not in RECORD_KINDS:
            raise UsageError(f"unknown metrics record kind {kind!r}")
        timestep = int(record["timestep"])
        if timestep < self.last_timestep:
            raise UsageError(
                f"metrics timestep went backwards: {timestep} after {self.last_timestep}"
            )
        self._handle.write(encode_record(record))
        self.last_timestep = timestep
        self.records_written += 1

    def flush(self) -> None:
        self._handle.flush()

    def close(self) -> None:
        if not self._handle.closed:
            self._handle.close()

    def __enter__(self) -> "MetricsWriter":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()


def read_metrics(path: Union[str, Path]) -> Tuple[Dict[str, Any], List[Dict[str, Any]]]:
    """Parse a metrics file.

    Returns:
        (header, records in file order)

    Raises:
        MetricsFormatError: On the first line that is not a valid record
    """
    path = Path(path)
    header: Optional[Dict[str, Any]] = None
    records: List[Dict[str, Any]] = []
    with open(path, "rb") as handle:
        for line_number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = orjson.loads(line)
            except orjson.JSONDecodeError as e:
                raise MetricsFormatError(f"{path.name}: not a JSON record ({e})", line_number)
            if not isinstance(record, dict) or "kind" not in record:
                raise MetricsFormatError(f"{path.name}: record without a kind", line_number)
            if header is None:
                if record["kind"] != "header" or record.get("schema") != SCHEMA:
                    raise MetricsFormatError(
                        f"{path.name}: expected a {SCHEMA} header", line_number
                    )
                header = record
                continue
            if record["kind"] not in RECORD_KINDS or "timestep" not in record:
                raise MetricsFormatError(
                    f"{path.name}: unknown record kind {record['kind']!r}", line_number
                )
            records.append(record)
    if header is None:
        raise MetricsFormatError(f"{path.name}: empty metrics file", 1)
    return header, records


def records_of_kind(records: Iterable[Dict[str, Any]], kind: str) -> List[Dict[str, Any]]:
    return [record for record in records if record["kind"] == kind]
