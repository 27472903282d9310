"""Cross-modality video person re-identification: re-ranking and evaluation.

Public API lives in the ``vireid.core`` subpackage:

    from vireid.core.temporal import temporal_rerank
    from vireid.core.metrics import evaluate

Convenience re-exports are provided at the package root for the most
commonly used names; explicit ``vireid.core`` imports remain the
recommended style for clarity.
"""

from .core.config import PipelineConfig, RerankConfig, ScheduleConfig, SynthConfig
from .core.enums import Modality, RerankMode, RetrievalDirection, ScheduleStrategy
from .core.errors import ConfigError, DataError, VireidError
from .core.models import DistanceMatrix, EvalReport, EvalSplit, TrackletRecord
from .core.storage import load_split, save_split
from .core.distance import feature_distances
from .core.kreciprocal import kreciprocal_rerank
from .core.temporal import cross_temporal, temporal_rerank
from .core.metrics import evaluate
from .core.curriculum import CurriculumScheduler, alpha, combine
from .core.synth import generate
from .core.pipeline import ReidPipeline, run_eval
from .core.benchmark import RerankBenchmark

__version__ = "0.1.0"

__all__ = [
    "PipelineConfig",
    "RerankConfig",
    "ScheduleConfig",
    "SynthConfig",
    "Modality",
    "RerankMode",
    "RetrievalDirection",
    "ScheduleStrategy",
    "ConfigError",
    "DataError",
    "VireidError",
    "DistanceMatrix",
    "EvalReport",
    "EvalSplit",
    "TrackletRecord",
    "load_split",
    "save_split",
    "feature_distances",
    "kreciprocal_rerank",
    "cross_temporal",
    "temporal_rerank",
    "evaluate",
    "CurriculumScheduler",
    "alpha",
    "combine",
    "generate",
    "ReidPipeline",
    "run_eval",
    "RerankBenchmark",
]
