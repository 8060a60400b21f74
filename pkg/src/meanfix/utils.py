import logging
import os
import sys
from logging import Formatter
from typing import Optional

from loguru import logger as run_logger
from pythonjsonlogger import jsonlogger

logger = logging.getLogger(__name__)

LOGURU_FORMAT = "{time:YYYY-MM-DD HH:mm:ss.SSS} - {name} - {level} - [{extra[run_id]}] - {message}"


class RunIdAwareLogFormatter(Formatter):
    def __init__(self, run_id: str = ""):
        super().__init__("%(asctime)s - %(name)s - %(levelname)s")
        self.run_id = run_id

    def format(self, record):
        og_message = super().format(record)
        run_id_part = f"[{self.run_id}] " if self.run_id else ""
        return f"{og_message} - {run_id_part}- {record.getMessage()}"


class RunJsonFormatter(jsonlogger.JsonFormatter):
    """One JSON object per record with message, logger, severity and the current run id."""

    def __init__(self, run_id_formatter: Optional[RunIdAwareLogFormatter] = None):
        super().__init__("%(name)s %(message)s")
        self.run_id_formatter = run_id_formatter

    def add_fields(self, log_record, record, message_dict):
        super().add_fields(log_record, record, message_dict)
        log_record["severity"] = record.levelname
        if self.run_id_formatter is not None and self.run_id_formatter.run_id:
            log_record["run_id"] = self.run_id_formatter.run_id


def make_run_id(command: str, example: str, seed: int) -> str:
    return f"{command}-{example}-seed{seed}"


def init_settings(logs_dir: str, log_level: str = "INFO") -> RunIdAwareLogFormatter:
    def setup_logging() -> RunIdAwareLogFormatter:
        # LOG_FORMAT=json emits one JSON object per line with a severity field
        fmt = os.getenv("LOG_FORMAT")
        rid_log_fmt = RunIdAwareLogFormatter()
        if fmt == "json":
            json_handler = logging.StreamHandler(stream=sys.stdout)
            json_handler.setFormatter(RunJsonFormatter(rid_log_fmt))
            handlers = [json_handler]
        else:
            handlers = []
            # log lower levels to stdout
            stdout_handler = logging.StreamHandler(stream=sys.stdout)
            stdout_handler.addFilter(lambda rec: rec.levelno <= logging.INFO)
            handlers.append(stdout_handler)

            # log higher levels to stderr
            stderr_handler = logging.StreamHandler(stream=sys.stderr)
            stderr_handler.addFilter(lambda rec: rec.levelno > logging.INFO)
            handlers.append(stderr_handler)
            for handler in handlers:
                handler.setFormatter(rid_log_fmt)

        logging.basicConfig(level=log_level, handlers=handlers, force=True)
        return rid_log_fmt

    os.makedirs(logs_dir, exist_ok=True)
    return setup_logging()


def init_run_logger(log_level: str = "INFO", run_id: str = "") -> None:
    """Route the loguru logger used by the runner and CLI to stderr, tagged with the run id."""
    run_logger.remove()
    run_logger.configure(extra={"run_id": run_id})
    run_logger.add(sys.stderr, level=log_level, format=LOGURU_FORMAT,
                   serialize=os.getenv("LOG_FORMAT") == "json")
