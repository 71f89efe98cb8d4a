"""Fingerspelling recognition from hand landmarks.

The pipeline is landmark frames -> normalized features -> a small dense
classifier -> letter predictions, with evaluation reporting and a streaming
prediction server on top. Everything runs on numpy; no ML framework.
"""

from .dataset import (
    LABELS,
    NUM_CLASSES,
    Dataset,
    augment_jitter,
    load_csv,
    save_csv,
    stratified_split,
    synth_generate,
)
from .landmarks import NUM_FEATURES, NUM_LANDMARKS, extract_features
from .metrics import (
    ClassMetrics,
    EvalReport,
    confusion,
    f1_score,
    metrics_from_confusion,
    render_confusion_csv,
    render_report,
)
from .model import (
    EpochStats,
    Layer,
    ModelParams,
    TrainConfig,
    forward,
    grad_check,
    init_params,
    load_model,
    loss_and_grads,
    predict,
    save_model,
    train,
)
from .server import handle_message, run_server, serve_forever

__version__ = "0.1.0"

__all__ = [
    "LABELS",
    "NUM_CLASSES",
    "NUM_FEATURES",
    "NUM_LANDMARKS",
    "ClassMetrics",
    "Dataset",
    "EpochStats",
    "EvalReport",
    "Layer",
    "ModelParams",
    "TrainConfig",
    "augment_jitter",
    "confusion",
    "extract_features",
    "f1_score",
    "forward",
    "grad_check",
    "handle_message",
    "init_params",
    "load_csv",
    "load_model",
    "loss_and_grads",
    "metrics_from_confusion",
    "predict",
    "render_confusion_csv",
    "render_report",
    "run_server",
    "save_csv",
    "save_model",
    "serve_forever",
    "stratified_split",
    "synth_generate",
    "train",
]
