"""Service layer: pydantic request/response models, handlers, FastAPI app."""

from .handlers import COMMANDS
from .models import (
    CumulantsRequest,
    EmbedCheckRequest,
    FreenessRequest,
    GraphModel,
    MomentsRequest,
    RelationsRequest,
    ReportResponse,
    RTransformRequest,
    VerifyCatalanRequest,
    load_graph_model,
    parse_graph_file,
)

__all__ = [
    "COMMANDS",
    "GraphModel",
    "MomentsRequest",
    "CumulantsRequest",
    "RTransformRequest",
    "VerifyCatalanRequest",
    "FreenessRequest",
    "RelationsRequest",
    "EmbedCheckRequest",
    "ReportResponse",
    "load_graph_model",
    "parse_graph_file",
]
