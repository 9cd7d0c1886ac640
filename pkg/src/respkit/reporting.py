"""Renderers: DOT graphs, Markdown and CSV tables, text/JSON reports.

All renderers are pure; rendering the same value twice yields identical
bytes.  Layout of diagrams is left to external tools: the DOT emitter
produces structure and styling only.

Diagram conventions: responsibilities are rounded boxes; agent labels keep
their angle brackets, physical resources their square brackets and
information resources their vertical bars.  Solid arrows carry information
from source agents into items and from items into the responsibilities
that require them (and from responsibilities out to the items they
produce).  Sequence links are dashed arrows.  Assignment and physical
``uses`` edges are drawn without arrowheads.
"""

from __future__ import annotations

import csv
import io
import json

from .analysis import Finding, PerceptionInconsistency
from .elicitation import InfoTable
from .hazards import Worksheet
from .model import Model, RequirementRecord, ResourceKind, TraceRef


# ---------------------------------------------------------------------------
# DOT
# ---------------------------------------------------------------------------


def _dot_quote(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(model: Model) -> str:
    """Emit the model as a deterministic DOT digraph.

    Node ids are slugs; agent and resource ids are prefixed with their kind
    so that a same-named agent and resource cannot collapse into one node.
    """
    out: list[str] = []
    title = _dot_quote(model.name) if model.name else '"responsibility-model"'
    out.append(f"digraph {title} {{")
    out.append("  rankdir=LR;")

    for agent in model.agents:
        out.append(f"  {_dot_quote('agent-' + agent.id)} "
                   f"[shape=plaintext, label={_dot_quote('<' + agent.name + '>')}];")
    for resource in model.resources:
        wrapped = (f"[{resource.name}]" if resource.kind is ResourceKind.PHYSICAL
                   else f"|{resource.name}|")
        out.append(f"  {_dot_quote('resource-' + resource.id)} "
                   f"[shape=plaintext, label={_dot_quote(wrapped)}];")
    for resp in model.responsibilities:
        out.append(f"  {_dot_quote(resp.id)} "
                   f"[shape=box, style=rounded, label={_dot_quote(resp.name)}];")

    edges: list[str] = []

    def edge(source: str, target: str, attrs: str = "") -> None:
        suffix = f" [{attrs}]" if attrs else ""
        line = f"  {_dot_quote(source)} -> {_dot_quote(target)}{suffix};"
        if line not in edges:
            edges.append(line)

    for resp in model.responsibilities:
        for agent_id in resp.assigned_to:
            edge("agent-" + agent_id, resp.id, "dir=none")
    for resp in model.responsibilities:
        for need in resp.needs:
            for agent_id in need.sources:
                edge("agent-" + agent_id, "resource-" + need.resource)
            edge("resource-" + need.resource, resp.id)
        for product in resp.products:
            edge(resp.id, "resource-" + product.resource)
        for used in resp.uses:
            edge(resp.id, "resource-" + used, "dir=none")
    for source, target in model.sequence_links:
        edge(source, target, "style=dashed")

    out.extend(edges)
    out.append("}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------


def table_to_markdown(table: InfoTable) -> str:
    """Pipe-delimited table; literal pipes in cells are escaped."""

    def cell(value: str) -> str:
        return value.replace("|", "\\|")

    lines = ["| " + " | ".join(cell(c) for c in table.columns) + " |"]
    lines.append("| " + " | ".join("---" for _ in table.columns) + " |")
    for row in table.rows:
        lines.append("| " + " | ".join(cell(c) for c in row) + " |")
    return "\n".join(lines) + "\n"


def table_to_csv(table: InfoTable) -> str:
    """RFC 4180 CSV: CRLF line endings, minimal double-quote quoting."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\r\n")
    writer.writerow(table.columns)
    writer.writerows(table.rows)
    return buffer.getvalue()


def worksheet_table(model: Model, worksheet: Worksheet) -> InfoTable:
    """Flatten a hazard worksheet into a renderable table."""
    rows = []
    for entry in worksheet.rows:
        rows.append((
            model.resource_name(entry.item),
            entry.guide_word.value,
            entry.consequence,
            entry.severity.token,
            entry.mitigation or "",
        ))
    return InfoTable(
        title=f'Information hazards for "{worksheet.responsibility}"',
        columns=("Information item", "Guide word", "Consequence", "Severity",
                 "Mitigation"),
        rows=tuple(rows),
    )


# ---------------------------------------------------------------------------
# Requirement reports
# ---------------------------------------------------------------------------


class TraceResolutionError(ValueError):
    def __init__(self, unresolved: list[tuple[str, TraceRef]]):
        self.unresolved = list(unresolved)
        listing = "; ".join(f"{req_id}: {ref.render()}"
                            for req_id, ref in unresolved)
        super().__init__(f"unresolved trace references: {listing}")


def resolve_trace(model: Model, ref: TraceRef) -> bool:
    """Check one trace link against the model.

    Hazard traces resolve when the item is an information resource that at
    least one responsibility requires or produces, i.e. the referenced
    deviation row exists in some worksheet (assessed or not).
    """
    if ref.kind == "agent":
        return model.agent_named(ref.name) is not None
    if ref.kind == "responsibility":
        return model.responsibility_named(ref.name) is not None
    if ref.kind in ("information", "physical"):
        resource = model.resource_named(ref.name)
        wanted = (ResourceKind.INFORMATION if ref.kind == "information"
                  else ResourceKind.PHYSICAL)
        return resource is not None and resource.kind is wanted
    if ref.kind == "hazard":
        resource = model.resource_named(ref.name)
        if resource is None or resource.kind is not ResourceKind.INFORMATION:
            return False
        return any(
            resp.need_for(resource.id) or resp.product_for(resource.id)
            for resp in model.responsibilities
        )
    return False


def check_traces(model: Model,
                 records: list[RequirementRecord]) -> None:
    unresolved = [(record.id, ref)
                  for record in records
                  for ref in record.traces
                  if not resolve_trace(model, ref)]
    if unresolved:
        raise TraceResolutionError(unresolved)


def requirements_report(model: Model, records: list[RequirementRecord]) -> str:
    """Numbered Markdown report in authored order.

    Each entry shows the requirement text, its rationale in italic
    parentheses, and the trace links rendered verbatim.  Unresolved traces
    abort the report.
    """
    check_traces(model, records)
    lines = ["# Requirements", ""]
    for number, record in enumerate(records, start=1):
        lines.append(f"{number}. [{record.id}] {record.text}")
        lines.append(f"   *({record.rationale})*")
        if record.traces:
            lines.append("   traces: "
                         + ", ".join(ref.render() for ref in record.traces))
        lines.append("")
    count = len(records)
    lines.append(f"{count} requirement." if count == 1 else f"{count} requirements.")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Finding and diff reports
# ---------------------------------------------------------------------------


def findings_report(findings: list[Finding], fmt: str = "text") -> str:
    if fmt == "json":
        payload = [
            {
                "code": f.code,
                "severity": f.severity.token,
                "subjects": list(f.subjects),
                "explanation": f.explanation,
            }
            for f in findings
        ]
        return json.dumps(payload, indent=2) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown findings format {fmt!r}")
    lines = [f.render() for f in findings]
    count = len(findings)
    lines.append(f"{count} finding." if count == 1 else f"{count} findings.")
    return "\n".join(lines) + "\n"


def diff_report(inconsistencies: list[PerceptionInconsistency],
                fmt: str = "text") -> str:
    if fmt == "json":
        payload = [
            {
                "kind": item.kind.value,
                "responsibility": item.responsibility,
                "left": item.left,
                "right": item.right,
            }
            for item in inconsistencies
        ]
        return json.dumps(payload, indent=2) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown diff format {fmt!r}")
    lines = [item.render() for item in inconsistencies]
    count = len(inconsistencies)
    lines.append(f"{count} inconsistency." if count == 1
                 else f"{count} inconsistencies.")
    return "\n".join(lines) + "\n"
