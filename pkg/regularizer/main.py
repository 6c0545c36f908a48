# =============================================================================
# IMPORTS
# =============================================================================
import logging
from datetime import datetime
from typing import Any, Dict, Optional

import uvicorn
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, ConfigDict, Field, ValidationError

import config
from analysis import vulnerability
from classify import Category, classify_graph, witness_matches
from cli_io import (
    KERNEL_LABEL,
    LP_CLASSES,
    canonical_report,
    export_dot,
    export_lp,
    format_witness,
    parse_graph,
    parse_witness,
    verdict_report,
    witness_for,
)
from errors import (
    GraphFormatError,
    GraphKindError,
    RegularizationError,
    TooLarge,
    WeightLengthError,
)
from graph_core import Graph, verify_assignment
from synth import kernel_witness
from transform import canonical_form

VERSION = "1.0.0"

config.configure_logging()
logger = logging.getLogger(__name__)

# =============================================================================
# FASTAPI APP SETUP
# =============================================================================
app = FastAPI(title="Graph Regularizer", version=VERSION)
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


# =============================================================================
# REQUEST MODELS
# =============================================================================
class GraphRequest(BaseModel):
    """
    What: Any request that carries a graph
    Why: Every endpoint reads the same GraphFile text
    """

    model_config = ConfigDict(populate_by_name=True)

    graph: str


class ClassRequest(GraphRequest):
    weight_class: str = Field(default="best", alias="class")


class VerifyRequest(GraphRequest):
    witness: str


class VulnerabilityRequest(GraphRequest):
    max_n: Optional[int] = None


class DotRequest(GraphRequest):
    witness: Optional[str] = None


# =============================================================================
# ERROR MAPPING
# =============================================================================
_INPUT_ERRORS = (GraphFormatError, WeightLengthError, GraphKindError, TooLarge)


def _http_error(exc: Exception) -> HTTPException:
    """Bad input -> 400, graph outside the requested class -> 422."""
    if isinstance(exc, (_INPUT_ERRORS, ValidationError, ValueError)):
        return HTTPException(status_code=400, detail=str(exc))
    return HTTPException(status_code=422, detail=f"{type(exc).__name__}: {exc}")


def _load(text: str) -> Graph:
    try:
        return parse_graph(text)
    except (GraphFormatError, ValidationError) as exc:
        raise _http_error(exc)


# =============================================================================
# ENDPOINTS
# =============================================================================
@app.get("/health")
def health_check() -> Dict[str, Any]:
    """
    What: Health check endpoint
    Why: Callers verify the service is up before sending graphs
    """
    return {
        "status": "healthy",
        "timestamp": datetime.now().isoformat(),
        "version": VERSION,
        "categories": [c.value for c in Category],
    }


@app.post("/classify")
def classify(request: GraphRequest) -> Dict[str, Any]:
    """
    What: Places the graph in the hierarchy
    Why: The main query; returns the same report as `classify --json`
    """
    g = _load(request.graph)
    try:
        return verdict_report(g, classify_graph(g))
    except RegularizationError as exc:
        logger.error("classification failed: %s", exc)
        raise HTTPException(status_code=500, detail=str(exc))


@app.post("/weights")
def weights(request: ClassRequest) -> Dict[str, Any]:
    g = _load(request.graph)
    try:
        label, witness = witness_for(g, request.weight_class)
    except (RegularizationError, ValueError) as exc:
        raise _http_error(exc)
    return {"class": label, "witness": format_witness(g, witness, label)}


@app.post("/verify")
def verify(request: VerifyRequest) -> Dict[str, Any]:
    g = _load(request.graph)
    try:
        witness = parse_witness(request.witness, g)
    except (RegularizationError, ValidationError) as exc:
        raise _http_error(exc)
    category = witness.category
    if category is not None and category is not Category.NOT_REGULARIZABLE:
        valid = witness_matches(g, category, witness.assignment)
    else:
        valid = verify_assignment(g, witness.assignment)
    return {"valid": valid, "class": witness.label}


@app.post("/canonical")
def canonical(request: GraphRequest) -> Dict[str, Any]:
    g = _load(request.graph)
    try:
        return canonical_report(canonical_form(g))
    except RegularizationError as exc:
        raise _http_error(exc)


@app.post("/kernel")
def kernel(request: GraphRequest) -> Dict[str, Any]:
    g = _load(request.graph)
    try:
        witness = kernel_witness(g)
    except RegularizationError as exc:
        raise _http_error(exc)
    return {"witness": format_witness(g, witness, KERNEL_LABEL)}


@app.post("/lp")
def lp(request: ClassRequest) -> Dict[str, Any]:
    g = _load(request.graph)
    allowed = [c.value for c in LP_CLASSES]
    if request.weight_class not in allowed:
        raise HTTPException(status_code=400, detail=f"class must be one of {allowed}")
    return {"lp": export_lp(g, Category(request.weight_class))}


@app.post("/vulnerability")
def vulnerability_endpoint(request: VulnerabilityRequest) -> Dict[str, Any]:
    g = _load(request.graph)
    try:
        report = vulnerability(g, request.max_n)
    except RegularizationError as exc:
        raise _http_error(exc)
    return report.model_dump()


@app.post("/dot")
def dot(request: DotRequest) -> Dict[str, Any]:
    g = _load(request.graph)
    try:
        witness = parse_witness(request.witness, g).assignment if request.witness else None
        return {"dot": export_dot(g, witness)}
    except (RegularizationError, ValidationError) as exc:
        raise _http_error(exc)


# =============================================================================
# STARTUP MESSAGE - SHOWS WHEN SERVER STARTS
# =============================================================================
if __name__ == "__main__":
    print("🚀 Starting Graph Regularizer...")
    print(f"🌐 Server will be available at: http://{config.HOST}:{config.PORT}")
    print(f"📚 API Documentation: http://{config.HOST}:{config.PORT}/docs")
    print(f"🔧 Vulnerability cap: n <= {config.VULN_MAX_N}")
    uvicorn.run(app, host=config.HOST, port=config.PORT)
