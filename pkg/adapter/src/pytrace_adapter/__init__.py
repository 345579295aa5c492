"""Trace real Python test runs into the patch-classification wire format."""

__version__ = "0.1.0"

from .align import SourceAlignment, align_sources, align_trees  # noqa: F401
from .config import AdapterConfig, ConfigError, TestCommand, load_config  # noqa: F401
from .ids import FileIds, IdMap, build_id_map, load_id_map, save_id_map  # noqa: F401
from .manifest import build_manifest  # noqa: F401
from .tracer import TraceRecord, run_traced, write_trace  # noqa: F401
