"""Vulnerability detection and cross-model comparison.

Every analysis is a pure, read-only function of the model; the full set may
run concurrently over one shared model.  Findings carry a code from the
catalog below, each with a fixed severity, and are returned in canonical
order (code, then subject).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .model import Model, Responsibility, Severity

UNASSIGNED_RESP = "UNASSIGNED_RESP"
UNSOURCED_INFO = "UNSOURCED_INFO"
UNUSED_RESOURCE = "UNUSED_RESOURCE"
SINGLE_CHANNEL = "SINGLE_CHANNEL"
DUPLICATE_SOURCE = "DUPLICATE_SOURCE"
AGENT_OVERLOAD = "AGENT_OVERLOAD"
SEQUENCE_CYCLE = "SEQUENCE_CYCLE"

#: Finding codes and their fixed severities.
FINDING_CATALOG: dict[str, Severity] = {
    UNASSIGNED_RESP: Severity.HIGH,
    UNSOURCED_INFO: Severity.MEDIUM,
    UNUSED_RESOURCE: Severity.LOW,
    SINGLE_CHANNEL: Severity.MEDIUM,
    DUPLICATE_SOURCE: Severity.LOW,
    AGENT_OVERLOAD: Severity.MEDIUM,
    SEQUENCE_CYCLE: Severity.HIGH,
}

#: Agents assigned strictly more responsibilities than this are overloaded.
DEFAULT_LOAD_THRESHOLD = 5


@dataclass(frozen=True)
class Finding:
    code: str
    severity: Severity
    subjects: tuple[str, ...]
    explanation: str

    @property
    def subject(self) -> str:
        return ",".join(self.subjects)

    def render(self) -> str:
        return f"{self.code} {self.severity.token} {self.subject}: {self.explanation}"


def _finding(code: str, subjects: tuple[str, ...], explanation: str) -> Finding:
    return Finding(code, FINDING_CATALOG[code], subjects, explanation)


def _sorted(findings: list[Finding]) -> list[Finding]:
    return sorted(findings, key=lambda f: (f.code, f.subjects))


def find_unassigned(model: Model) -> list[Finding]:
    """One finding per responsibility that no agent holds."""
    return _sorted([
        _finding(UNASSIGNED_RESP, (resp.id,),
                 f'responsibility "{resp.name}" has no assigned agent')
        for resp in model.responsibilities if not resp.assigned_to
    ])


def find_unsourced_info(model: Model) -> list[Finding]:
    """Needs with no recorded source and no producing responsibility."""
    produced = {p.resource for r in model.responsibilities for p in r.products}
    findings = []
    for resp in model.responsibilities:
        for need in resp.needs:
            if not need.sources and need.resource not in produced:
                findings.append(_finding(
                    UNSOURCED_INFO, (f"{resp.id}/{need.resource}",),
                    f"|{model.resource_name(need.resource)}| required by "
                    f'"{resp.name}" has no source and no producer in the model'))
    return _sorted(findings)


def _effective_channel_count(model: Model, channels: tuple[str, ...]) -> int:
    if len(channels) != 1:
        return len(channels)
    only = channels[0]
    chan = model.channel_by_id(only)
    has_partner = any(
        other.id != only and (other.backup_of == only
                              or (chan is not None and chan.backup_of == other.id))
        for other in model.channels
    )
    return 2 if has_partner else 1


def find_single_channel(model: Model) -> list[Finding]:
    """Information flows that depend on exactly one channel.

    A single listed channel counts as two when the model declares a backup
    partner for it.  Flows with no channel at all are a strict-validation
    concern, not a finding.
    """
    findings = []
    for resp in model.responsibilities:
        flows = [(need.resource, need.channels, "required") for need in resp.needs]
        flows += [(p.resource, p.channels, "produced") for p in resp.products]
        for resource, channels, how in flows:
            if _effective_channel_count(model, channels) == 1:
                channel_name = model.channel_name(channels[0])
                findings.append(_finding(
                    SINGLE_CHANNEL, (f"{resp.id}/{resource}",),
                    f"|{model.resource_name(resource)}| {how} by \"{resp.name}\" "
                    f"relies on the single channel \"{channel_name}\" with no backup"))
    return _sorted(findings)


def find_duplicate_sources(model: Model) -> list[Finding]:
    """Information kept in more than one place.

    Flags a resource that different responsibilities require from
    non-identical source sets, and a resource produced by more than one
    responsibility.
    """
    findings = []
    required: dict[str, list[tuple[Responsibility, frozenset[str]]]] = {}
    producers: dict[str, list[Responsibility]] = {}
    for resp in model.responsibilities:
        for need in resp.needs:
            required.setdefault(need.resource, []).append(
                (resp, frozenset(need.sources)))
        for product in resp.products:
            producers.setdefault(product.resource, []).append(resp)

    for resource, entries in required.items():
        source_sets = {sources for _, sources in entries}
        if len(source_sets) > 1:
            resp_names = ", ".join(sorted(f'"{r.name}"' for r, _ in entries))
            findings.append(_finding(
                DUPLICATE_SOURCE, (resource,),
                f"|{model.resource_name(resource)}| is required with differing "
                f"sources by {resp_names}"))
    for resource, resps in producers.items():
        if len(resps) > 1:
            resp_names = ", ".join(sorted(f'"{r.name}"' for r in resps))
            findings.append(_finding(
                DUPLICATE_SOURCE, (resource,),
                f"|{model.resource_name(resource)}| is produced by more than "
                f"one responsibility: {resp_names}"))
    return _sorted(findings)


def find_unused_resources(model: Model) -> list[Finding]:
    """Declared resources that no responsibility touches."""
    touched: set[str] = set()
    for resp in model.responsibilities:
        touched.update(need.resource for need in resp.needs)
        touched.update(product.resource for product in resp.products)
        touched.update(resp.uses)
        touched.update(entry.item for entry in resp.hazards)
    return _sorted([
        _finding(UNUSED_RESOURCE, (resource.id,),
                 f"resource \"{resource.name}\" is declared but never used")
        for resource in model.resources if resource.id not in touched
    ])


def agent_load(model: Model,
               threshold: int = DEFAULT_LOAD_THRESHOLD) -> list[Finding]:
    """Agents holding strictly more responsibilities than the threshold."""
    if threshold < 1:
        raise ValueError("threshold must be at least 1")
    counts: dict[str, int] = {}
    for resp in model.responsibilities:
        for agent_id in resp.assigned_to:
            counts[agent_id] = counts.get(agent_id, 0) + 1
    findings = []
    for agent_id, count in counts.items():
        if count > threshold:
            findings.append(_finding(
                AGENT_OVERLOAD, (agent_id,),
                f"<{model.agent_name(agent_id)}> holds {count} responsibilities "
                f"(threshold {threshold})"))
    return _sorted(findings)


def detect_sequence_cycles(model: Model) -> list[Finding]:
    """Strongly connected components (or self-loops) in the precedes graph."""
    graph: dict[str, list[str]] = {r.id: [] for r in model.responsibilities}
    for source, target in model.sequence_links:
        graph.setdefault(source, []).append(target)

    # Iterative Tarjan; recursion depth is unbounded on long chains.
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    sccs: list[list[str]] = []
    counter = [0]

    def strongconnect(root: str) -> None:
        work = [(root, iter(graph.get(root, ())))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, edges = work[-1]
            advanced = False
            for succ in edges:
                if succ not in index:
                    index[succ] = low[succ] = counter[0]
                    counter[0] += 1
                    stack.append(succ)
                    on_stack.add(succ)
                    work.append((succ, iter(graph.get(succ, ()))))
                    advanced = True
                    break
                if succ in on_stack:
                    low[node] = min(low[node], index[succ])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                component = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.append(member)
                    if member == node:
                        break
                sccs.append(component)

    for node in graph:
        if node not in index:
            strongconnect(node)

    self_loops = {source for source, target in model.sequence_links
                  if source == target}
    findings = []
    for component in sccs:
        if len(component) < 2 and component[0] not in self_loops:
            continue
        names = sorted(model.responsibility_by_id(m).name for m in component)
        members = tuple(sorted(
            component, key=lambda m: model.responsibility_by_id(m).name))
        listing = ", ".join(f'"{n}"' for n in names)
        findings.append(_finding(
            SEQUENCE_CYCLE, members,
            f"responsibilities {listing} precede one another in a cycle"))
    return _sorted(findings)


def run_all(model: Model,
            load_threshold: int = DEFAULT_LOAD_THRESHOLD) -> list[Finding]:
    """Run every analysis and return one canonically ordered finding list."""
    findings = (
        find_unassigned(model)
        + find_unsourced_info(model)
        + find_unused_resources(model)
        + find_single_channel(model)
        + find_duplicate_sources(model)
        + agent_load(model, load_threshold)
        + detect_sequence_cycles(model)
    )
    return _sorted(findings)


# ---------------------------------------------------------------------------
# Cross-model comparison
# ---------------------------------------------------------------------------


class InconsistencyKind(Enum):
    MISSING_RESPONSIBILITY = "MissingResponsibility"
    ASSIGNMENT_MISMATCH = "AssignmentMismatch"
    SOURCE_MISMATCH = "SourceMismatch"
    CHANNEL_MISMATCH = "ChannelMismatch"


@dataclass(frozen=True)
class PerceptionInconsistency:
    kind: InconsistencyKind
    responsibility: str
    left: str
    right: str

    def render(self) -> str:
        return (f'{self.kind.value} "{self.responsibility}": '
                f"left: {self.left}; right: {self.right}")

    def swapped(self) -> "PerceptionInconsistency":
        return PerceptionInconsistency(self.kind, self.responsibility,
                                       self.right, self.left)


def _describe_agents(model: Model, agent_ids: tuple[str, ...]) -> str:
    if not agent_ids:
        return "unassigned"
    names = sorted(model.agent_name(a) for a in agent_ids)
    return ", ".join(f"<{n}>" for n in names)


def _describe_names(names: set[str], wrap: str, empty: str) -> str:
    if not names:
        return empty
    if wrap == "<>":
        return ", ".join(f"<{n}>" for n in sorted(names))
    return ", ".join(f'"{n}"' for n in sorted(names))


def diff_models(left: Model, right: Model) -> list[PerceptionInconsistency]:
    """Compare how two models perceive the same responsibilities.

    Responsibilities are matched by exact (trimmed) name.  The result is
    symmetric: diff(a, b) equals diff(b, a) with left and right swapped.
    """
    results: list[PerceptionInconsistency] = []
    left_by_name = {r.name: r for r in left.responsibilities}
    right_by_name = {r.name: r for r in right.responsibilities}

    for name in sorted(left_by_name.keys() | right_by_name.keys()):
        left_resp = left_by_name.get(name)
        right_resp = right_by_name.get(name)
        if left_resp is None or right_resp is None:
            results.append(PerceptionInconsistency(
                InconsistencyKind.MISSING_RESPONSIBILITY, name,
                "present" if left_resp else "absent",
                "present" if right_resp else "absent"))
            continue

        left_assigned = {left.agent_name(a) for a in left_resp.assigned_to}
        right_assigned = {right.agent_name(a) for a in right_resp.assigned_to}
        if left_assigned != right_assigned:
            results.append(PerceptionInconsistency(
                InconsistencyKind.ASSIGNMENT_MISMATCH, name,
                _describe_agents(left, left_resp.assigned_to),
                _describe_agents(right, right_resp.assigned_to)))

        left_needs = {left.resource_name(n.resource): n for n in left_resp.needs}
        right_needs = {right.resource_name(n.resource): n for n in right_resp.needs}
        for resource in sorted(left_needs.keys() | right_needs.keys()):
            l_need = left_needs.get(resource)
            r_need = right_needs.get(resource)
            if l_need is None or r_need is None:
                present = (f"|{resource}| required from "
                           + _describe_names(
                               {(left if l_need else right).agent_name(a)
                                for a in (l_need or r_need).sources},
                               "<>", "no recorded source"))
                results.append(PerceptionInconsistency(
                    InconsistencyKind.SOURCE_MISMATCH, name,
                    present if l_need else f"|{resource}| not required",
                    present if r_need else f"|{resource}| not required"))
                continue
            l_sources = {left.agent_name(a) for a in l_need.sources}
            r_sources = {right.agent_name(a) for a in r_need.sources}
            if l_sources != r_sources:
                results.append(PerceptionInconsistency(
                    InconsistencyKind.SOURCE_MISMATCH, name,
                    f"|{resource}| from "
                    + _describe_names(l_sources, "<>", "no recorded source"),
                    f"|{resource}| from "
                    + _describe_names(r_sources, "<>", "no recorded source")))
            l_channels = {left.channel_name(c) for c in l_need.channels}
            r_channels = {right.channel_name(c) for c in r_need.channels}
            if l_channels != r_channels:
                results.append(PerceptionInconsistency(
                    InconsistencyKind.CHANNEL_MISMATCH, name,
                    f"|{resource}| required via "
                    + _describe_names(l_channels, '"', "no channel"),
                    f"|{resource}| required via "
                    + _describe_names(r_channels, '"', "no channel")))

        left_products = {left.resource_name(p.resource): p
                         for p in left_resp.products}
        right_products = {right.resource_name(p.resource): p
                          for p in right_resp.products}
        for resource in sorted(left_products.keys() | right_products.keys()):
            l_prod = left_products.get(resource)
            r_prod = right_products.get(resource)
            if l_prod is None or r_prod is None:
                produced = (f"|{resource}| produced via "
                            + _describe_names(
                                {(left if l_prod else right).channel_name(c)
                                 for c in (l_prod or r_prod).channels},
                                '"', "no channel"))
                results.append(PerceptionInconsistency(
                    InconsistencyKind.CHANNEL_MISMATCH, name,
                    produced if l_prod else f"|{resource}| not produced",
                    produced if r_prod else f"|{resource}| not produced"))
                continue
            l_channels = {left.channel_name(c) for c in l_prod.channels}
            r_channels = {right.channel_name(c) for c in r_prod.channels}
            if l_channels != r_channels:
                results.append(PerceptionInconsistency(
                    InconsistencyKind.CHANNEL_MISMATCH, name,
                    f"|{resource}| produced via "
                    + _describe_names(l_channels, '"', "no channel"),
                    f"|{resource}| produced via "
                    + _describe_names(r_channels, '"', "no channel")))

    results.sort(key=lambda r: (r.kind.value, r.responsibility,
                                min(r.left, r.right), max(r.left, r.right)))
    return results
