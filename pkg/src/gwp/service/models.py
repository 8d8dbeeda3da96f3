"""Pydantic request/response models shared by the HTTP API and the CLI."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, Field

from ..graphs import Graph, build_graph

Mode = Literal["symbolic", "numeric", "both"]


class EdgeModel(BaseModel):
    id: str
    src: str
    dst: str


class GraphModel(BaseModel):
    """JSON wire form of a graph: vertex ids plus (id, src, dst) edges."""

    vertices: list[str]
    edges: list[EdgeModel]

    def to_graph(self) -> Graph:
        return build_graph(self.vertices, [(e.id, e.src, e.dst) for e in self.edges])


def parse_graph_file(path: str | Path) -> Graph:
    """Load and validate a graph JSON file."""
    return load_graph_model(path).to_graph()


def load_graph_model(path: str | Path) -> GraphModel:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return GraphModel.model_validate(data)


class _ElementRequest(BaseModel):
    graph: GraphModel
    vertex: Optional[str] = None
    order: int = Field(default=8, ge=1, le=16)
    expr: Optional[str] = None
    mode: Mode = "both"
    scale: str = "1"
    paper_normalization: bool = False


class MomentsRequest(_ElementRequest):
    pass


class CumulantsRequest(_ElementRequest):
    pass


class RTransformRequest(_ElementRequest):
    pass


class VerifyCatalanRequest(BaseModel):
    graph: GraphModel
    vertex: Optional[str] = None
    max_order: int = Field(default=10, ge=1, le=16)
    mode: Mode = "both"
    scale: str = "1"
    paper_normalization: bool = False


class FreenessRequest(BaseModel):
    graph: GraphModel
    w1: str
    w2: str
    scan_order: int = Field(default=4, ge=2, le=8)


class RelationsRequest(BaseModel):
    graph: GraphModel
    cutoff: int = Field(default=4, ge=2, le=10)
    max_word_len: Optional[int] = None


class EmbedCheckRequest(BaseModel):
    graph: GraphModel
    vertex: Optional[str] = None
    loops: Optional[int] = Field(default=None, ge=1)
    max_order: int = Field(default=8, ge=1, le=12)
    compress_order: int = Field(default=6, ge=1, le=10)


class RowModel(BaseModel):
    label: str
    exact: Optional[str] = None
    numeric: Optional[float] = None
    verified: bool


class ReportResponse(BaseModel):
    command: str
    rows: list[RowModel]
    warnings: list[str]
