"""Patch correctness classification from execution-trace similarity."""

__version__ = "0.1.0"

from .baselines import (  # noqa: F401
    crash_oracle,
    semantic_distance_led,
    syntactic_distance,
)
from .classify import (  # noqa: F401
    PatchSimConfig,
    TestSimConfig,
    Verdict,
    classify_patch,
    classify_test,
    measure_patch_distances,
    measure_test_distances,
)
from .corpus import (  # noqa: F401
    CorpusEntry,
    ManifestError,
    load_corpus,
    load_manifest,
    make_entry,
    save_corpus,
    save_manifest,
    validate_entry,
)
from .distance import DistanceConfig, distance, lcs_length, spectrum_distance  # noqa: F401
from .generate import GenConfig, ValuePools, generate  # noqa: F401
from .golden import golden_corpus  # noqa: F401
from .pipeline import (  # noqa: F401
    EvaluationReport,
    PipelineConfig,
    PipelineRun,
    classify_from_traces,
    distance_summary,
    evaluate,
    run_pipeline,
    sweep,
)
from .trace import (  # noqa: F401
    Alignment,
    FormatError,
    MalformedTrace,
    PatchSpec,
    Spectrum,
    TestCase,
    TraceEvent,
    extract_context_spectrum,
    extract_full_spectrum,
    read_trace_file,
    write_trace_file,
)
