"""Resolve parsed declarations into an immutable model.

Elements first mentioned inside a responsibility block are materialized as
implicit declarations: agents default to kind organization, channels carry
no medium, resource kinds follow the bracket notation they were written
with.  Explicit declarations anywhere in the file win over implicit ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from . import dsl
from .model import (
    Agent,
    AgentKind,
    Channel,
    HazardEntry,
    InfoNeed,
    InfoProduct,
    Model,
    Resource,
    ResourceKind,
    Responsibility,
    canonical_elements,
    dedupe,
    slugify,
)


@dataclass(frozen=True)
class BuildIssue:
    message: str
    span: Optional[dsl.SourceSpan] = None

    def render(self) -> str:
        if self.span:
            return (f"{self.span.file}:{self.span.line}:{self.span.column}: "
                    f"error: {self.message}")
        return f"error: {self.message}"


class ModelBuildError(ValueError):
    def __init__(self, issues: list[BuildIssue]):
        self.issues = list(issues)
        super().__init__("\n".join(i.render() for i in self.issues))


class _Builder:
    def __init__(self) -> None:
        self.issues: list[BuildIssue] = []
        self.agents: dict[str, Agent] = {}
        self.resources: dict[str, Resource] = {}
        self.channels: dict[str, Channel] = {}
        # Pending backup targets, resolved once all channels are known.
        self.backup_names: dict[str, tuple[str, dsl.SourceSpan]] = {}

    def error(self, message: str, span: Optional[dsl.SourceSpan] = None) -> None:
        self.issues.append(BuildIssue(message, span))

    def _slug(self, name: str, what: str, span: dsl.SourceSpan) -> Optional[str]:
        try:
            return slugify(name)
        except ValueError:
            self.error(f"{what} name {name!r} needs at least one alphanumeric "
                       "character", span)
            return None

    # -- explicit declarations ----------------------------------------------

    def declare_agent(self, decl: dsl.AgentDecl) -> None:
        slug = self._slug(decl.name, "agent", decl.span)
        if slug is None:
            return
        kind = decl.kind or AgentKind.ORGANIZATION
        existing = self.agents.get(slug)
        if existing is None:
            self.agents[slug] = Agent(slug, decl.name.strip(), kind)
        elif existing.name != decl.name.strip():
            self.error(f"agents {existing.name!r} and {decl.name.strip()!r} "
                       f"collide on id '{slug}'", decl.span)
        elif existing.implicit:
            self.agents[slug] = Agent(slug, existing.name, kind)
        elif decl.kind is not None and existing.kind is not kind:
            self.error(f"conflicting agent kind for <{existing.name}>: "
                       f"{existing.kind.value} vs {kind.value}", decl.span)

    def declare_resource(self, name: str, kind: ResourceKind,
                         span: dsl.SourceSpan, implicit: bool = False) -> Optional[str]:
        slug = self._slug(name, "resource", span)
        if slug is None:
            return None
        existing = self.resources.get(slug)
        if existing is None:
            self.resources[slug] = Resource(slug, name.strip(), kind, implicit)
            return slug
        if existing.name != name.strip():
            self.error(f"resources {existing.name!r} and {name.strip()!r} "
                       f"collide on id '{slug}'", span)
            return slug
        if existing.kind is not kind:
            self.error(f"conflicting resource kind: {existing.name!r} is "
                       f"{existing.kind.value} and {kind.value}", span)
            return slug
        if existing.implicit and not implicit:
            self.resources[slug] = Resource(slug, name.strip(), kind)
        return slug

    def declare_channel(self, decl: dsl.ChannelDecl) -> None:
        slug = self._slug(decl.name, "channel", decl.span)
        if slug is None:
            return
        existing = self.channels.get(slug)
        if existing is not None and existing.name != decl.name.strip():
            self.error(f"channels {existing.name!r} and {decl.name.strip()!r} "
                       f"collide on id '{slug}'", decl.span)
            return
        if existing is not None and not existing.implicit:
            prior_backup = self.backup_names.get(slug, (None, None))[0]
            if existing.medium != decl.medium or prior_backup != decl.backup_of:
                self.error(f"conflicting re-declaration of channel "
                           f"{existing.name!r}", decl.span)
            return
        self.channels[slug] = Channel(slug, decl.name.strip(), decl.medium)
        if decl.backup_of is not None:
            self.backup_names[slug] = (decl.backup_of, decl.span)

    # -- implicit mentions ----------------------------------------------------

    def mention_agent(self, name: str, span: dsl.SourceSpan) -> Optional[str]:
        slug = self._slug(name, "agent", span)
        if slug is None:
            return None
        existing = self.agents.get(slug)
        if existing is None:
            self.agents[slug] = Agent(slug, name.strip(),
                                      AgentKind.ORGANIZATION, implicit=True)
        elif existing.name != name.strip():
            self.error(f"agents {existing.name!r} and {name.strip()!r} collide "
                       f"on id '{slug}'", span)
        return slug

    def mention_resource(self, name: str, kind: ResourceKind,
                         span: dsl.SourceSpan) -> Optional[str]:
        slug = self._slug(name, "resource", span)
        if slug is None:
            return None
        existing = self.resources.get(slug)
        if existing is None:
            self.resources[slug] = Resource(slug, name.strip(), kind, implicit=True)
            return slug
        if existing.name != name.strip():
            self.error(f"resources {existing.name!r} and {name.strip()!r} "
                       f"collide on id '{slug}'", span)
        elif existing.kind is not kind:
            self.error(f"conflicting resource kind: {existing.name!r} is "
                       f"{existing.kind.value} but is used as {kind.value}", span)
        return slug

    def mention_channel(self, name: str, span: dsl.SourceSpan) -> Optional[str]:
        slug = self._slug(name, "channel", span)
        if slug is None:
            return None
        existing = self.channels.get(slug)
        if existing is None:
            self.channels[slug] = Channel(slug, name.strip(), implicit=True)
        elif existing.name != name.strip():
            self.error(f"channels {existing.name!r} and {name.strip()!r} collide "
                       f"on id '{slug}'", span)
        return slug

    # -- backup resolution ----------------------------------------------------

    def resolve_backups(self) -> None:
        for slug, (target_name, span) in self.backup_names.items():
            channel = self.channels[slug]
            try:
                target = slugify(target_name)
            except ValueError:
                target = None
            if target is None or target not in self.channels:
                self.error(f"backup_of target {target_name!r} is not a declared "
                           f"channel", span)
                continue
            if target == slug:
                self.error(f"channel {channel.name!r} cannot back itself up", span)
                continue
            self.channels[slug] = Channel(slug, channel.name, channel.medium,
                                          target, channel.implicit)
        # Chains must be acyclic.
        for slug in self.channels:
            seen = {slug}
            current: Optional[str] = self.channels[slug].backup_of
            while current is not None:
                if current in seen:
                    self.error(
                        f"backup chain through channel "
                        f"{self.channels[slug].name!r} is cyclic")
                    return
                seen.add(current)
                chan = self.channels.get(current)
                current = chan.backup_of if chan else None


def build_model(declarations: list[dsl.Declaration]) -> Model:
    """Resolve declarations into a model, or raise ModelBuildError."""
    builder = _Builder()
    name = ""
    resp_decls: list[dsl.ResponsibilityDecl] = []

    for decl in declarations:
        if isinstance(decl, dsl.ModelDecl):
            name = decl.name
        elif isinstance(decl, dsl.AgentDecl):
            builder.declare_agent(decl)
        elif isinstance(decl, dsl.ResourceDecl):
            builder.declare_resource(decl.name, decl.kind, decl.span)
        elif isinstance(decl, dsl.ChannelDecl):
            builder.declare_channel(decl)
        elif isinstance(decl, dsl.ResponsibilityDecl):
            resp_decls.append(decl)

    responsibilities: dict[str, Responsibility] = {}
    spans: dict[str, dsl.SourceSpan] = {}
    precedes: list[tuple[str, str, dsl.SourceSpan]] = []

    for decl in resp_decls:
        slug = builder._slug(decl.name, "responsibility", decl.span)
        if slug is None:
            continue
        if slug in responsibilities:
            other = responsibilities[slug].name
            if other == decl.name:
                builder.error(f"duplicate responsibility {decl.name!r}", decl.span)
            else:
                builder.error(f"responsibilities {other!r} and {decl.name!r} "
                              f"collide on id '{slug}'", decl.span)
            continue
        responsibilities[slug] = _build_responsibility(builder, slug, decl, precedes)
        spans[slug] = decl.span

    # Hazard items must be required or produced by their responsibility.
    for slug, resp in responsibilities.items():
        known = {n.resource for n in resp.needs} | {p.resource for p in resp.products}
        for entry in resp.hazards:
            if entry.item not in known:
                item_name = builder.resources[entry.item].name \
                    if entry.item in builder.resources else entry.item
                builder.error(
                    f'hazard on |{item_name}| but "{resp.name}" neither '
                    f"requires nor produces it", spans[slug])

    links: list[tuple[str, str]] = []
    by_name = {r.name: slug for slug, r in responsibilities.items()}
    for source_slug, target_name, span in precedes:
        target = by_name.get(target_name)
        if target is None:
            builder.error(f"precedes target {target_name!r} is not a declared "
                          f"responsibility", span)
            continue
        links.append((source_slug, target))

    builder.resolve_backups()

    if builder.issues:
        raise ModelBuildError(builder.issues)

    ordered_resps = canonical_elements(responsibilities.values())
    resp_name = {slug: r.name for slug, r in responsibilities.items()}
    ordered_links = tuple(sorted(
        set(links),
        key=lambda link: (resp_name[link[0]], resp_name[link[1]]),
    ))

    return Model(
        name=name,
        agents=canonical_elements(builder.agents.values()),
        resources=canonical_elements(builder.resources.values()),
        channels=canonical_elements(builder.channels.values()),
        responsibilities=ordered_resps,
        sequence_links=ordered_links,
    )


def _build_responsibility(
    builder: _Builder,
    slug: str,
    decl: dsl.ResponsibilityDecl,
    precedes: list[tuple[str, str, dsl.SourceSpan]],
) -> Responsibility:
    assigned: list[str] = []
    needs: dict[str, InfoNeed] = {}
    products: dict[str, InfoProduct] = {}
    uses: list[str] = []
    notes: list[str] = []
    hazards: dict[tuple[str, object], HazardEntry] = {}

    for item in decl.items:
        if isinstance(item, dsl.AssignClause):
            for agent_name in item.agents:
                agent_id = builder.mention_agent(agent_name, item.span)
                if agent_id:
                    assigned.append(agent_id)
        elif isinstance(item, dsl.RequireClause):
            resource = builder.mention_resource(
                item.resource, ResourceKind.INFORMATION, item.span)
            if resource is None:
                continue
            sources = [s for s in (builder.mention_agent(a, item.span)
                                   for a in item.sources) if s]
            channels = [c for c in (builder.mention_channel(ch, item.span)
                                    for ch in item.channels) if c]
            need = InfoNeed(resource, tuple(sources), tuple(channels),
                            item.criticality)
            needs[resource] = needs[resource].merged_with(need) \
                if resource in needs else need
        elif isinstance(item, dsl.ProduceClause):
            resource = builder.mention_resource(
                item.resource, ResourceKind.INFORMATION, item.span)
            if resource is None:
                continue
            channels = [c for c in (builder.mention_channel(ch, item.span)
                                    for ch in item.channels) if c]
            product = InfoProduct(resource, tuple(channels), item.rationale)
            products[resource] = products[resource].merged_with(product) \
                if resource in products else product
        elif isinstance(item, dsl.UseClause):
            resource = builder.mention_resource(
                item.resource, ResourceKind.PHYSICAL, item.span)
            if resource:
                uses.append(resource)
        elif isinstance(item, dsl.HazardClause):
            resource = builder.mention_resource(
                item.item, ResourceKind.INFORMATION, item.span)
            if resource is None:
                continue
            entry = HazardEntry(decl.name, resource, item.guide_word,
                                item.consequence, item.severity, item.mitigated_by)
            key = (resource, item.guide_word)
            hazards[key] = hazards[key].merged_with(entry) \
                if key in hazards else entry
        elif isinstance(item, dsl.PrecedesClause):
            precedes.append((slug, item.target, item.span))
        elif isinstance(item, dsl.NoteClause):
            notes.append(item.text)

    return Responsibility(
        id=slug,
        name=decl.name,
        assigned_to=dedupe(assigned),
        needs=tuple(needs.values()),
        products=tuple(products.values()),
        uses=dedupe(uses),
        notes=tuple(notes),
        hazards=tuple(hazards.values()),
    )


def load_model(source: Union[str, Path], filename: Optional[str] = None) -> Model:
    """Parse and build a model from a path or from document text."""
    if isinstance(source, Path):
        text = source.read_text(encoding="utf-8")
        filename = filename or str(source)
    else:
        text = source
        filename = filename or "<string>"
    return build_model(dsl.parse_model(text, filename))
