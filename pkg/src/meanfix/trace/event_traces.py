import os
from datetime import datetime
from typing import Any, Dict, List

from meanfix.config.config_setup import LogsConfig
from meanfix.trace.trace_writer import JsonTraceWriter


class ExperimentTrace:
    """Named check outcomes gathered while one command runs."""

    def __init__(self, run_id: str, command: str, example: str, seed: int):
        self.run_id = run_id
        self.command = command
        self.example = example
        self.seed = seed
        self.timestamp = datetime.now().isoformat()
        self.events: List[Dict[str, Any]] = []

    def trace_check_event(self, check_id: str, passed: bool, **detail):
        self.events.append({"id": check_id, "passed": bool(passed), "detail": detail})

    @property
    def failed(self) -> List[str]:
        return [e["id"] for e in self.events if not e["passed"]]

    @property
    def passed(self) -> bool:
        return not self.failed

    def as_dict(self) -> Dict[str, Any]:
        return {"run_id": self.run_id, "command": self.command, "example": self.example, "seed": self.seed,
                "timestamp": self.timestamp, "events": self.events}

    def persist_trace(self, logs_config: LogsConfig):
        path = os.path.join(logs_config.log_dir, logs_config.event_trace_loc, f"{self.run_id}.json")
        JsonTraceWriter().write(self.as_dict(), path)
