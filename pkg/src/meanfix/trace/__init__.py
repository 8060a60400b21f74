from .event_traces import ExperimentTrace
from .trace_writer import CsvTraceWriter, JsonTraceWriter, TraceWriter, get_writer, long_format

__all__ = ["ExperimentTrace", "CsvTraceWriter", "JsonTraceWriter", "TraceWriter", "get_writer", "long_format"]
