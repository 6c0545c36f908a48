"""
File formats, exports and the command-line surface.

GraphFile
    directed | undirected
    n m
    u v            (m lines, 1-based)

WitnessFile
    class <label>
    degree <r>
    <edge_index> <tail> <head> <weight>     (m lines)

Lines starting with "#" are comments anywhere in either file. Rationals are
written as p or p/q.
"""

import argparse
import json
import logging
import os
import sys
import tempfile
import time
from fractions import Fraction
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import pulp
import pydot
from pydantic import BaseModel, ConfigDict, ValidationError

import config
from analysis import VulnerabilityReport, vulnerability
from classify import (
    Category,
    HierarchyVerdict,
    classify_graph,
    is_regular,
    witness_matches,
)
from errors import (
    AcyclicOnlyTrivial,
    GraphFormatError,
    GraphKindError,
    InvalidWitness,
    NoIndependentSet,
    NoSupport,
    NotArbitrarilyRegularizable,
    NotInClass,
    NoTotalSupport,
    TooLarge,
    WeightLengthError,
    ZeroRowOrColumn,
)
from graph_core import (
    Graph,
    WeightAssignment,
    build_incidence,
    format_rational,
    parse_rational,
    strengths,
    verify_assignment,
)
from synth import kernel_witness, regular_witness, synth_arbitrary, synth_nonnegative, synth_positive
from transform import CanonicalForm, canonical_form

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_INPUT = 2

KERNEL_LABEL = "kernel"
LP_CLASSES = (Category.ARBITRARY, Category.NONNEGATIVE, Category.POSITIVE)


# =============================================================================
# GRAPH FILES
# =============================================================================
def _content_lines(text: str) -> List[Tuple[int, str]]:
    """(line number, stripped text) of every non-blank, non-comment line."""
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if stripped and not stripped.startswith("#"):
            lines.append((number, stripped))
    return lines


def _integers(number: int, line: str, count: int, what: str) -> List[int]:
    fields = line.split()
    if len(fields) != count:
        raise GraphFormatError(number, f"expected {what}, got {line!r}")
    try:
        return [int(field) for field in fields]
    except ValueError:
        raise GraphFormatError(number, f"expected integers for {what}, got {line!r}")


def parse_graph(text: str) -> Graph:
    lines = _content_lines(text)
    if not lines:
        raise GraphFormatError(1, "empty graph file")
    number, header = lines[0]
    if header not in ("directed", "undirected"):
        raise GraphFormatError(number, f"header must be 'directed' or 'undirected', got {header!r}")
    directed = header == "directed"
    if len(lines) < 2:
        raise GraphFormatError(number + 1, "missing 'n m' line")
    number, sizes = lines[1]
    n, m = _integers(number, sizes, 2, "'n m'")
    if n <= 0 or m < 0:
        raise GraphFormatError(number, f"need n > 0 and m >= 0, got n={n} m={m}")

    edges: List[Tuple[int, int]] = []
    seen = set()
    for number, line in lines[2:2 + m]:
        tail, head = _integers(number, line, 2, "'u v'")
        if not (1 <= tail <= n and 1 <= head <= n):
            raise GraphFormatError(number, f"endpoint out of range 1..{n}: {tail} {head}")
        key = (tail, head) if directed or tail <= head else (head, tail)
        if key in seen:
            raise GraphFormatError(number, f"duplicate edge {tail} {head}")
        seen.add(key)
        edges.append((tail, head))
    if len(edges) < m:
        last = lines[-1][0]
        raise GraphFormatError(last + 1, f"expected {m} edge lines, found {len(edges)}")
    if len(lines) > 2 + m:
        raise GraphFormatError(lines[2 + m][0], "unexpected content after the edge list")
    return Graph(directed=directed, node_count=n, edges=tuple(edges))


def serialize_graph(g: Graph) -> str:
    lines = ["directed" if g.directed else "undirected", f"{g.node_count} {g.edge_count}"]
    lines.extend(f"{tail} {head}" for tail, head in g.edges)
    return "\n".join(lines) + "\n"


# =============================================================================
# WITNESS FILES
# =============================================================================
class WitnessFile(BaseModel):
    """A labelled weight assignment; the label is a category value or "kernel"."""

    model_config = ConfigDict(frozen=True)

    label: str
    assignment: WeightAssignment

    @property
    def category(self) -> Optional[Category]:
        try:
            return Category(self.label)
        except ValueError:
            return None


def format_witness(g: Graph, w: WeightAssignment, label: str) -> str:
    if len(w.weights) != g.edge_count:
        raise WeightLengthError(g.edge_count, len(w.weights))
    lines = [f"class {label}", f"degree {format_rational(w.degree)}"]
    for index, ((tail, head), weight) in enumerate(zip(g.edges, w.weights), start=1):
        lines.append(f"{index} {tail} {head} {format_rational(weight)}")
    return "\n".join(lines) + "\n"


def _keyword(number: int, line: str, keyword: str) -> str:
    fields = line.split()
    if len(fields) != 2 or fields[0] != keyword:
        raise GraphFormatError(number, f"expected '{keyword} <value>', got {line!r}")
    return fields[1]


def parse_witness(text: str, g: Graph) -> WitnessFile:
    """Parse a WitnessFile for `g`; edge lines must list g's edges in order."""
    lines = _content_lines(text)
    if len(lines) < 2:
        raise GraphFormatError(len(text.splitlines()) + 1, "witness needs 'class' and 'degree' lines")
    label = _keyword(*lines[0], "class")
    if label != KERNEL_LABEL and label not in {c.value for c in Category}:
        raise GraphFormatError(lines[0][0], f"unknown class {label!r}")
    try:
        degree = parse_rational(_keyword(*lines[1], "degree"))
    except ValueError as exc:
        raise GraphFormatError(lines[1][0], str(exc))

    edge_lines = lines[2:]
    if len(edge_lines) != g.edge_count:
        raise WeightLengthError(g.edge_count, len(edge_lines))
    weights: List[Fraction] = []
    for expected, (number, line) in enumerate(edge_lines, start=1):
        fields = line.split()
        if len(fields) != 4:
            raise GraphFormatError(number, f"expected '<index> <tail> <head> <weight>', got {line!r}")
        try:
            index, tail, head = (int(field) for field in fields[:3])
            weight = parse_rational(fields[3])
        except ValueError as exc:
            raise GraphFormatError(number, str(exc))
        if index != expected:
            raise GraphFormatError(number, f"expected edge index {expected}, got {index}")
        known = g.edges[index - 1]
        matches = (tail, head) == known or (not g.directed and (head, tail) == known)
        if not matches:
            raise GraphFormatError(number, f"edge {index} is {known[0]} {known[1]}, not {tail} {head}")
        weights.append(weight)
    return WitnessFile(label=label, assignment=WeightAssignment(weights=tuple(weights), degree=degree))


# =============================================================================
# LP EXPORT
# =============================================================================
def lp_problem(g: Graph, category: Category) -> pulp.LpProblem:
    """
    Feasibility model B w - r e = 0 with a zero objective.

      arbitrary    w free,  r >= 1
      nonnegative  w >= 0,  r >= 1
      positive     w >= 1,  r free
    """
    if category not in LP_CLASSES:
        raise ValueError(f"no LP model for class {category.value!r}")
    weight_bound = {Category.ARBITRARY: None, Category.NONNEGATIVE: 0, Category.POSITIVE: 1}[category]
    degree_bound = None if category is Category.POSITIVE else 1

    problem = pulp.LpProblem(f"regularization_{category.value}", pulp.LpMinimize)
    weights = [pulp.LpVariable(f"w{index}", lowBound=weight_bound) for index in range(1, g.edge_count + 1)]
    degree = pulp.LpVariable("r", lowBound=degree_bound)
    problem += 0

    incidence = build_incidence(g)
    members: List[List[int]] = [[] for _ in range(incidence.row_count)]
    for column, rows in enumerate(incidence.column_rows):
        for row in rows:
            members[row - 1].append(column)
    width = len(str(incidence.row_count))
    for row, columns in enumerate(members, start=1):
        problem += pulp.lpSum(weights[c] for c in columns) - degree == 0, f"row_{row:0{width}d}"
    return problem


def export_lp(g: Graph, category: Category) -> str:
    problem = lp_problem(g, category)
    with tempfile.TemporaryDirectory() as workdir:
        path = os.path.join(workdir, "model.lp")
        problem.writeLP(path)
        with open(path, encoding="utf-8") as handle:
            return handle.read()


def lp_point(w: WeightAssignment) -> Dict[str, Fraction]:
    point = {f"w{index}": weight for index, weight in enumerate(w.weights, start=1)}
    point["r"] = w.degree
    return point


def check_lp_point(problem: pulp.LpProblem, values: Mapping[str, Any]) -> bool:
    """Substitute exact values (missing names read 0) and test every bound and row with eps = 0."""
    for variable in problem.variables():
        variable.varValue = parse_rational(values.get(variable.name, 0))
    return bool(problem.valid(0))


# =============================================================================
# DOT EXPORT
# =============================================================================
def export_dot(g: Graph, w: Optional[WeightAssignment] = None) -> str:
    """
    Edges in edge order; with a witness each edge is labelled with its
    weight, negatives dashed. Kernel vectors (r = 0) are accepted.
    """
    if w is not None:
        if w.is_zero or w.degree < 0 or any(total != w.degree for total in strengths(g, w)):
            raise InvalidWitness("weights do not satisfy B w = r e with r >= 0")
    graph = pydot.Dot("regularizer", graph_type="digraph" if g.directed else "graph")
    for node in range(1, g.node_count + 1):
        graph.add_node(pydot.Node(str(node)))
    for index, (tail, head) in enumerate(g.edges):
        attributes: Dict[str, str] = {}
        if w is not None:
            weight = w.weights[index]
            attributes["label"] = f'"{format_rational(weight)}"'
            if weight < 0:
                attributes["style"] = "dashed"
        graph.add_edge(pydot.Edge(str(tail), str(head), **attributes))
    return graph.to_string()


# =============================================================================
# REPORTS
# =============================================================================
def _timed(call: Callable[[], Any]) -> Tuple[Any, int]:
    started = time.perf_counter_ns()
    result = call()
    return result, (time.perf_counter_ns() - started) // 1000


def verdict_report(g: Graph, verdict: HierarchyVerdict, timings: Optional[Dict[str, int]] = None) -> Dict[str, Any]:
    """JSON-ready mirror of a verdict; rationals as "p/q", timings in microseconds."""
    report = verdict.model_dump(mode="json")
    report["graph"] = {"directed": g.directed, "n": g.node_count, "m": g.edge_count}
    report["timings_us"] = timings or {}
    return report


def canonical_report(form: CanonicalForm) -> Dict[str, Any]:
    report = form.model_dump(mode="json")
    report["all_square"] = form.all_square
    return report


def vulnerability_text(report: VulnerabilityReport) -> str:
    return (
        f"vulnerability {report.value}\n"
        f"set {' '.join(map(str, report.witness))}\n"
        f"neighbours {' '.join(map(str, report.neighbourhood))}\n"
    )


# =============================================================================
# COMMAND LINE
# =============================================================================
def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as handle:
        return handle.read()


def _load_graph(path: str) -> Graph:
    return parse_graph(_read(path))


def witness_for(g: Graph, requested: str) -> Tuple[str, WeightAssignment]:
    """(label, witness) for a class name or "best"; raises when g is not in that class."""
    if requested == "best":
        verdict = classify_graph(g)
        if verdict.category is Category.NOT_REGULARIZABLE:
            reason = verdict.certificate.description if verdict.certificate else ""
            raise NotArbitrarilyRegularizable(reason)
        return verdict.category.value, verdict.witness
    category = Category(requested)
    if category is Category.REGULAR:
        if not is_regular(g):
            raise NotInClass("graph is not regular")
        return category.value, regular_witness(g)
    if category is Category.POSITIVE:
        return category.value, synth_positive(g)
    if category is Category.NONNEGATIVE:
        return category.value, synth_nonnegative(g)
    return category.value, synth_arbitrary(g)[0]


# Errors meaning "predicate false" as opposed to bad input
_PREDICATE_FALSE = (
    NotInClass,
    NoTotalSupport,
    NoSupport,
    NotArbitrarilyRegularizable,
    AcyclicOnlyTrivial,
    ZeroRowOrColumn,
    InvalidWitness,
    NoIndependentSet,
)
_INPUT_ERRORS = (
    GraphFormatError,
    WeightLengthError,
    GraphKindError,
    TooLarge,
    ValidationError,
    UnicodeDecodeError,
    OSError,
)


def _cmd_classify(args: argparse.Namespace) -> int:
    g = _load_graph(args.file)
    verdict, micros = _timed(lambda: classify_graph(g))
    if args.json:
        print(json.dumps(verdict_report(g, verdict, {"classify": micros}), indent=2))
    else:
        print(verdict.category.value)
        if verdict.certificate is not None:
            print(verdict.certificate.description)
        if verdict.blocking_edges:
            print("edges outside every spanning cycle forest: " + " ".join(map(str, verdict.blocking_edges)))
    return EXIT_FALSE if verdict.category is Category.NOT_REGULARIZABLE else EXIT_OK


def _cmd_weights(args: argparse.Namespace) -> int:
    g = _load_graph(args.file)
    label, witness = witness_for(g, args.weight_class)
    sys.stdout.write(format_witness(g, witness, label))
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    g = _load_graph(args.file)
    witness = parse_witness(_read(args.witness), g)
    category = witness.category
    if category is not None and category is not Category.NOT_REGULARIZABLE:
        valid = witness_matches(g, category, witness.assignment)
    else:
        valid = verify_assignment(g, witness.assignment)
    print("valid" if valid else "invalid")
    return EXIT_OK if valid else EXIT_FALSE


def _cmd_canonical(args: argparse.Namespace) -> int:
    g = _load_graph(args.file)
    form = canonical_form(g)
    if args.json:
        print(json.dumps(canonical_report(form), indent=2))
    else:
        print("rows " + " ".join(map(str, form.row_perm)))
        print("cols " + " ".join(map(str, form.col_perm)))
        print("blocks " + " ".join(f"{r}x{c}" for r, c in form.blocks))
    return EXIT_OK if form.all_square else EXIT_FALSE


def _cmd_kernel(args: argparse.Namespace) -> int:
    g = _load_graph(args.file)
    sys.stdout.write(format_witness(g, kernel_witness(g), KERNEL_LABEL))
    return EXIT_OK


def _cmd_lp(args: argparse.Namespace) -> int:
    g = _load_graph(args.file)
    text = export_lp(g, Category(args.lp_class))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_vuln(args: argparse.Namespace) -> int:
    g = _load_graph(args.file)
    sys.stdout.write(vulnerability_text(vulnerability(g, args.max_n)))
    return EXIT_OK


def _cmd_dot(args: argparse.Namespace) -> int:
    g = _load_graph(args.file)
    witness = parse_witness(_read(args.witness), g).assignment if args.witness else None
    sys.stdout.write(export_dot(g, witness))
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from main import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="regularizer", description="Graph regularizability hierarchy tools")
    commands = parser.add_subparsers(dest="command", required=True)

    classify_cmd = commands.add_parser("classify", help="place a graph in the hierarchy")
    classify_cmd.add_argument("file")
    classify_cmd.add_argument("--json", action="store_true")
    classify_cmd.set_defaults(handler=_cmd_classify)

    weights_cmd = commands.add_parser("weights", help="synthesize a witness")
    weights_cmd.add_argument("file")
    weights_cmd.add_argument(
        "--class",
        dest="weight_class",
        choices=["regular", "positive", "nonnegative", "arbitrary", "best"],
        default="best",
    )
    weights_cmd.set_defaults(handler=_cmd_weights)

    verify_cmd = commands.add_parser("verify", help="check a witness file")
    verify_cmd.add_argument("file")
    verify_cmd.add_argument("--witness", required=True)
    verify_cmd.set_defaults(handler=_cmd_verify)

    canonical_cmd = commands.add_parser("canonical", help="block-diagonal canonical form")
    canonical_cmd.add_argument("file")
    canonical_cmd.add_argument("--json", action="store_true")
    canonical_cmd.set_defaults(handler=_cmd_canonical)

    kernel_cmd = commands.add_parser("kernel", help="nonzero solution of B w = 0")
    kernel_cmd.add_argument("file")
    kernel_cmd.set_defaults(handler=_cmd_kernel)

    lp_cmd = commands.add_parser("lp", help="export an LP feasibility model")
    lp_cmd.add_argument("file")
    lp_cmd.add_argument("--class", dest="lp_class", choices=[c.value for c in LP_CLASSES], required=True)
    lp_cmd.add_argument("-o", "--output")
    lp_cmd.set_defaults(handler=_cmd_lp)

    vuln_cmd = commands.add_parser("vuln", help="vulnerability of an undirected graph")
    vuln_cmd.add_argument("file")
    vuln_cmd.add_argument("--max-n", type=int, default=config.VULN_MAX_N)
    vuln_cmd.set_defaults(handler=_cmd_vuln)

    dot_cmd = commands.add_parser("dot", help="export DOT, optionally labelled with a witness")
    dot_cmd.add_argument("file")
    dot_cmd.add_argument("--witness")
    dot_cmd.set_defaults(handler=_cmd_dot)

    serve_cmd = commands.add_parser("serve", help="run the HTTP service")
    serve_cmd.add_argument("--host", default=config.HOST)
    serve_cmd.add_argument("--port", type=int, default=config.PORT)
    serve_cmd.set_defaults(handler=_cmd_serve)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    config.configure_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except _PREDICATE_FALSE as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FALSE
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
