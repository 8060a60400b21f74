import json
import logging
import os
from abc import ABC, abstractmethod
from typing import Any, Dict, Optional

import pandas as pd

from meanfix.exceptions import ConfigError

logger = logging.getLogger(__name__)

# document keys repeated as comment lines at the top of a CSV file
CSV_HEADER_KEYS = ("schema", "command", "seed", "config")


def long_format(document: Dict[str, Any]) -> pd.DataFrame:
    """A flat metric,value table of every scalar in a nested document."""
    flat = pd.json_normalize(document, sep=".")
    rows = []
    for metric, value in flat.iloc[0].items():
        if isinstance(value, (list, dict)):
            continue
        rows.append({"metric": metric, "value": value})
    return pd.DataFrame(rows, columns=["metric", "value"])


class TraceWriter(ABC):
    @abstractmethod
    def write(self, document: Dict[str, Any], path: str, table: Optional[pd.DataFrame] = None) -> None:
        pass

    @staticmethod
    def _prepare(path: str) -> None:
        parent = os.path.dirname(path)
        if parent and not os.path.exists(parent):
            logger.info(f"Creating directory to record outputs: {parent}")
            os.makedirs(parent)


class JsonTraceWriter(TraceWriter):
    def write(self, document: Dict[str, Any], path: str, table: Optional[pd.DataFrame] = None) -> None:
        self._prepare(path)
        payload = dict(document)
        if table is not None:
            payload["rows"] = table.to_dict(orient="records")
        with open(path, "w") as f:
            json.dump(payload, f, indent=2)
        logger.info(f"Wrote JSON report to {path}")


class CsvTraceWriter(TraceWriter):
    """Comment lines with the schema, seed and config echo, then one table."""

    def write(self, document: Dict[str, Any], path: str, table: Optional[pd.DataFrame] = None) -> None:
        self._prepare(path)
        if table is None:
            table = long_format({k: v for k, v in document.items() if k not in CSV_HEADER_KEYS})
        with open(path, "w", newline="") as f:
            for key in CSV_HEADER_KEYS:
                if key in document:
                    f.write(f"# {key}: {json.dumps(document[key])}\n")
            table.to_csv(f, index=False)
        logger.info(f"Wrote CSV report to {path} ({len(table)} rows)")


WRITER_MAPPING = {
    "json": JsonTraceWriter,
    "csv": CsvTraceWriter,
}


def get_writer(fmt: str) -> TraceWriter:
    try:
        return WRITER_MAPPING[fmt]()
    except KeyError:
        raise ConfigError(f"unknown output format {fmt!r}; choose one of {sorted(WRITER_MAPPING)}") from None
