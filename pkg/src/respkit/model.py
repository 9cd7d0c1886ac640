"""Immutable domain model for responsibility modelling.

A model holds agents, resources, channels and responsibilities, plus the
sequencing links between responsibilities.  Values are frozen dataclasses:
once built they are safe to share between threads and between analyses.

Element identifiers are deterministic slugs of display names, so two
elements of the same kind may not have names that collapse to the same
slug.  Top-level collections are kept in canonical order (lexicographic by
display name); clause-level collections (sources, channels, needs, ...)
keep their authored first-mention order, which rendering code may re-sort.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum, IntEnum
from typing import Iterable, Optional


class Severity(IntEnum):
    """Five-level severity scale with a total order."""

    NONE = 0
    LOW = 1
    MEDIUM = 2
    HIGH = 3
    CRITICAL = 4

    @property
    def token(self) -> str:
        return self.name.lower()

    @classmethod
    def from_token(cls, token: str) -> "Severity":
        try:
            return cls[token.upper()]
        except KeyError:
            raise ValueError(
                f"unknown severity {token!r}; expected one of {SEVERITY_TOKENS}"
            ) from None


SEVERITY_TOKENS = ", ".join(s.token for s in Severity)


class AgentKind(Enum):
    ORGANIZATION = "organization"
    ROLE = "role"
    PERSON = "person"
    SYSTEM = "system"
    GROUP = "group"


class ResourceKind(Enum):
    PHYSICAL = "physical"
    INFORMATION = "information"


class GuideWord(Enum):
    """The five deviation prompts, in their fixed presentation order."""

    UNAVAILABLE = "unavailable"
    INACCURATE = "inaccurate"
    INCOMPLETE = "incomplete"
    LATE = "late"
    EARLY = "early"

    @classmethod
    def from_token(cls, token: str) -> "GuideWord":
        try:
            return cls(token)
        except ValueError:
            raise ValueError(
                f"unknown guide word {token!r}; expected one of {GUIDE_WORD_TOKENS}"
            ) from None


GUIDE_WORDS = tuple(GuideWord)
GUIDE_WORD_TOKENS = ", ".join(g.value for g in GuideWord)


def slugify(name: str) -> str:
    """Deterministic identifier for a display name.

    Lowercases the trimmed name and collapses every maximal run of
    non-alphanumeric characters into a single hyphen.  Idempotent.  Raises
    ValueError when nothing alphanumeric survives.
    """
    trimmed = name.strip()
    if not trimmed:
        raise ValueError("cannot slugify an empty name")
    runs: list[str] = []
    buf: list[str] = []
    for ch in trimmed.lower():
        if ch.isalnum():
            buf.append(ch)
        elif buf:
            runs.append("".join(buf))
            buf = []
    if buf:
        runs.append("".join(buf))
    if not runs:
        raise ValueError(f"name {name!r} has no alphanumeric characters")
    return "-".join(runs)


def dedupe(items: Iterable[str]) -> tuple[str, ...]:
    """Drop duplicates while keeping first-mention order."""
    seen: set[str] = set()
    out: list[str] = []
    for item in items:
        if item not in seen:
            seen.add(item)
            out.append(item)
    return tuple(out)


# ---------------------------------------------------------------------------
# Elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Agent:
    id: str
    name: str
    kind: AgentKind = AgentKind.ORGANIZATION
    # Provenance only: ignored by equality so that canonical print/parse
    # round trips compare equal.
    implicit: bool = field(default=False, compare=False)

    @classmethod
    def of(cls, name: str, kind: AgentKind = AgentKind.ORGANIZATION,
           implicit: bool = False) -> "Agent":
        return cls(slugify(name), name.strip(), kind, implicit)


@dataclass(frozen=True)
class Resource:
    id: str
    name: str
    kind: ResourceKind
    implicit: bool = field(default=False, compare=False)

    @classmethod
    def of(cls, name: str, kind: ResourceKind, implicit: bool = False) -> "Resource":
        return cls(slugify(name), name.strip(), kind, implicit)


@dataclass(frozen=True)
class Channel:
    id: str
    name: str
    medium: Optional[str] = None
    backup_of: Optional[str] = None
    implicit: bool = field(default=False, compare=False)

    @classmethod
    def of(cls, name: str, medium: Optional[str] = None,
           backup_of: Optional[str] = None, implicit: bool = False) -> "Channel":
        return cls(slugify(name), name.strip(), medium, backup_of, implicit)


@dataclass(frozen=True)
class InfoNeed:
    """One information requirement of a responsibility.

    ``sources`` and ``channels`` are ordered sets: duplicates are merged at
    load time (union of sources and channels per resource).
    """

    resource: str
    sources: tuple[str, ...] = ()
    channels: tuple[str, ...] = ()
    criticality: Optional[Severity] = None

    def merged_with(self, other: "InfoNeed") -> "InfoNeed":
        if other.resource != self.resource:
            raise ValueError("cannot merge needs for different resources")
        crit = self.criticality
        if other.criticality is not None and (crit is None or other.criticality > crit):
            crit = other.criticality
        return InfoNeed(
            resource=self.resource,
            sources=dedupe(self.sources + other.sources),
            channels=dedupe(self.channels + other.channels),
            criticality=crit,
        )


@dataclass(frozen=True)
class InfoProduct:
    """Information created or recorded while discharging a responsibility."""

    resource: str
    channels: tuple[str, ...] = ()
    rationale: Optional[str] = None

    def merged_with(self, other: "InfoProduct") -> "InfoProduct":
        if other.resource != self.resource:
            raise ValueError("cannot merge products for different resources")
        return InfoProduct(
            resource=self.resource,
            channels=dedupe(self.channels + other.channels),
            rationale=self.rationale if self.rationale else other.rationale,
        )


@dataclass(frozen=True)
class HazardEntry:
    """Assessment of one (information item, guide word) deviation.

    An empty consequence means the row has not been assessed yet.  At most
    one entry exists per (responsibility, item, guide word).
    """

    responsibility: str
    item: str
    guide_word: GuideWord
    consequence: str = ""
    severity: Severity = Severity.NONE
    mitigation: Optional[str] = None

    @property
    def assessed(self) -> bool:
        return bool(self.consequence)

    def merged_with(self, other: "HazardEntry") -> "HazardEntry":
        if (other.item, other.guide_word) != (self.item, self.guide_word):
            raise ValueError("cannot merge unrelated hazard entries")
        return HazardEntry(
            responsibility=self.responsibility,
            item=self.item,
            guide_word=self.guide_word,
            consequence=self.consequence if self.consequence else other.consequence,
            severity=max(self.severity, other.severity),
            mitigation=self.mitigation if self.mitigation else other.mitigation,
        )


@dataclass(frozen=True)
class Responsibility:
    """A named duty, optionally assigned to agents.

    An empty ``assigned_to`` is legal (models may be incomplete) but is
    surfaced by validation and analysis.
    """

    id: str
    name: str
    assigned_to: tuple[str, ...] = ()
    needs: tuple[InfoNeed, ...] = ()
    products: tuple[InfoProduct, ...] = ()
    uses: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()
    hazards: tuple[HazardEntry, ...] = ()

    def need_for(self, resource_id: str) -> Optional[InfoNeed]:
        for need in self.needs:
            if need.resource == resource_id:
                return need
        return None

    def product_for(self, resource_id: str) -> Optional[InfoProduct]:
        for product in self.products:
            if product.resource == resource_id:
                return product
        return None

    def hazard_for(self, item: str, guide_word: GuideWord) -> Optional[HazardEntry]:
        for entry in self.hazards:
            if entry.item == item and entry.guide_word == guide_word:
                return entry
        return None


@dataclass(frozen=True)
class Model:
    name: str = ""
    agents: tuple[Agent, ...] = ()
    resources: tuple[Resource, ...] = ()
    channels: tuple[Channel, ...] = ()
    responsibilities: tuple[Responsibility, ...] = ()
    sequence_links: tuple[tuple[str, str], ...] = ()

    # -- lookups ------------------------------------------------------------

    def agent_by_id(self, agent_id: str) -> Optional[Agent]:
        return next((a for a in self.agents if a.id == agent_id), None)

    def resource_by_id(self, resource_id: str) -> Optional[Resource]:
        return next((r for r in self.resources if r.id == resource_id), None)

    def channel_by_id(self, channel_id: str) -> Optional[Channel]:
        return next((c for c in self.channels if c.id == channel_id), None)

    def responsibility_by_id(self, resp_id: str) -> Optional[Responsibility]:
        return next((r for r in self.responsibilities if r.id == resp_id), None)

    def responsibility_named(self, name: str) -> Optional[Responsibility]:
        wanted = name.strip()
        return next((r for r in self.responsibilities if r.name == wanted), None)

    def agent_named(self, name: str) -> Optional[Agent]:
        wanted = name.strip()
        return next((a for a in self.agents if a.name == wanted), None)

    def resource_named(self, name: str) -> Optional[Resource]:
        wanted = name.strip()
        return next((r for r in self.resources if r.name == wanted), None)

    def channel_named(self, name: str) -> Optional[Channel]:
        wanted = name.strip()
        return next((c for c in self.channels if c.name == wanted), None)

    def agent_name(self, agent_id: str) -> str:
        agent = self.agent_by_id(agent_id)
        return agent.name if agent else agent_id

    def resource_name(self, resource_id: str) -> str:
        resource = self.resource_by_id(resource_id)
        return resource.name if resource else resource_id

    def channel_name(self, channel_id: str) -> str:
        channel = self.channel_by_id(channel_id)
        return channel.name if channel else channel_id

    def with_responsibility(self, updated: Responsibility) -> "Model":
        """Replace one responsibility, keeping canonical collection order."""
        resps = tuple(updated if r.id == updated.id else r
                      for r in self.responsibilities)
        return replace(self, responsibilities=resps)


def canonical_elements(elements: Iterable) -> tuple:
    """Sort a collection of named elements into canonical order."""
    return tuple(sorted(elements, key=lambda e: e.name))


class UnknownResponsibility(KeyError):
    """Raised when an operation names a responsibility the model lacks."""

    def __init__(self, name: str, model: Model):
        self.name = name
        self.available = tuple(r.name for r in model.responsibilities)
        listing = ", ".join(f'"{n}"' for n in self.available) or "(none)"
        super().__init__(
            f'unknown responsibility "{name}"; model defines: {listing}'
        )

    def __str__(self) -> str:  # KeyError quotes its payload otherwise
        return self.args[0]


# ---------------------------------------------------------------------------
# Answer records
# ---------------------------------------------------------------------------
#
# Structured answers reference elements by display name, not id: an answer
# may mention elements the model has not declared yet, and materializing
# those as implicit declarations needs the verbatim name.


@dataclass(frozen=True)
class NeedAnswer:
    resource: str
    sources: tuple[str, ...] = ()
    channels: tuple[str, ...] = ()


@dataclass(frozen=True)
class RecordAnswer:
    resource: str
    channels: tuple[str, ...] = ()
    rationale: Optional[str] = None


@dataclass(frozen=True)
class HazardAnswer:
    item: str
    guide_word: GuideWord
    consequence: str
    severity: Severity = Severity.NONE


@dataclass(frozen=True)
class ElicitationRecord:
    """Answers captured for one responsibility in one session."""

    responsibility: str
    by: Optional[str] = None
    date: Optional[str] = None
    needs: tuple[NeedAnswer, ...] = ()
    records: tuple[RecordAnswer, ...] = ()
    hazards: tuple[HazardAnswer, ...] = ()


# ---------------------------------------------------------------------------
# Requirements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TraceRef:
    """A trace link from a requirement into the model.

    ``kind`` is one of agent | information | physical | responsibility |
    hazard; ``guide_word`` is set for hazard traces only.
    """

    kind: str
    name: str
    guide_word: Optional[GuideWord] = None

    def render(self) -> str:
        if self.kind == "agent":
            return f"<{self.name}>"
        if self.kind == "information":
            return f"|{self.name}|"
        if self.kind == "physical":
            return f"[{self.name}]"
        if self.kind == "responsibility":
            return f'responsibility "{self.name}"'
        if self.kind == "hazard":
            word = self.guide_word.value if self.guide_word else "?"
            return f"hazard |{self.name}| {word}"
        raise ValueError(f"unknown trace kind {self.kind!r}")


@dataclass(frozen=True)
class RequirementRecord:
    id: str
    text: str
    rationale: str
    traces: tuple[TraceRef, ...] = ()
    derived_from: Optional[TraceRef] = None


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

UNASSIGNED_RESP = "UNASSIGNED_RESP"
UNSOURCED_INFO = "UNSOURCED_INFO"
IMPLICIT_DECL = "IMPLICIT_DECL"
NO_CHANNEL = "NO_CHANNEL"

#: Every code ``validate`` may emit, with its fixed severity.  IMPLICIT_DECL
#: and NO_CHANNEL are reported in strict mode only.
VALIDATION_CATALOG: dict[str, Severity] = {
    UNASSIGNED_RESP: Severity.HIGH,
    UNSOURCED_INFO: Severity.MEDIUM,
    IMPLICIT_DECL: Severity.LOW,
    NO_CHANNEL: Severity.LOW,
}


@dataclass(frozen=True)
class Diagnostic:
    code: str
    severity: Severity
    message: str
    subject: str
    location: Optional[tuple[str, int]] = None

    def render(self) -> str:
        prefix = f"{self.location[0]}:{self.location[1]}: " if self.location else ""
        return f"{prefix}{self.code} {self.severity.token} {self.subject}: {self.message}"


def validate(model: Model, strict: bool = False) -> list[Diagnostic]:
    """Report model weaknesses without failing.

    Lenient validation reports unassigned responsibilities and needs whose
    information comes from nowhere.  Strict validation additionally reports
    every implicitly declared element and every need or product with no
    communication channel.  The result is sorted by (code, subject) and is a
    pure function of the model.
    """
    diagnostics: list[Diagnostic] = []
    produced = {p.resource for r in model.responsibilities for p in r.products}

    for resp in model.responsibilities:
        if not resp.assigned_to:
            diagnostics.append(Diagnostic(
                code=UNASSIGNED_RESP,
                severity=VALIDATION_CATALOG[UNASSIGNED_RESP],
                message=f'responsibility "{resp.name}" has no assigned agent',
                subject=resp.id,
            ))
        for need in resp.needs:
            if not need.sources and need.resource not in produced:
                diagnostics.append(Diagnostic(
                    code=UNSOURCED_INFO,
                    severity=VALIDATION_CATALOG[UNSOURCED_INFO],
                    message=(
                        f'|{model.resource_name(need.resource)}| required by '
                        f'"{resp.name}" has no source and no producer'
                    ),
                    subject=f"{resp.id}/{need.resource}",
                ))

    if strict:
        implicit = (
            [("agent", a.id, a.name) for a in model.agents if a.implicit]
            + [("resource", r.id, r.name) for r in model.resources if r.implicit]
            + [("channel", c.id, c.name) for c in model.channels if c.implicit]
        )
        for kind, element_id, name in implicit:
            diagnostics.append(Diagnostic(
                code=IMPLICIT_DECL,
                severity=VALIDATION_CATALOG[IMPLICIT_DECL],
                message=f'{kind} "{name}" was never declared explicitly',
                subject=element_id,
            ))
        for resp in model.responsibilities:
            for need in resp.needs:
                if not need.channels:
                    diagnostics.append(Diagnostic(
                        code=NO_CHANNEL,
                        severity=VALIDATION_CATALOG[NO_CHANNEL],
                        message=(
                            f'no communication channel recorded for '
                            f'|{model.resource_name(need.resource)}| '
                            f'required by "{resp.name}"'
                        ),
                        subject=f"{resp.id}/{need.resource}",
                    ))
            for product in resp.products:
                if not product.channels:
                    diagnostics.append(Diagnostic(
                        code=NO_CHANNEL,
                        severity=VALIDATION_CATALOG[NO_CHANNEL],
                        message=(
                            f'no communication channel recorded for '
                            f'|{model.resource_name(product.resource)}| '
                            f'produced by "{resp.name}"'
                        ),
                        subject=f"{resp.id}/{product.resource}",
                    ))

    diagnostics.sort(key=lambda d: (d.code, d.subject))
    return diagnostics
