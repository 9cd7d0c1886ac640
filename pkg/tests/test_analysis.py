import re

import pytest
from hypothesis import given, settings

from respkit import build_model, diff_models, print_model, run_all
from respkit.analysis import (
    FINDING_CATALOG,
    InconsistencyKind,
    agent_load,
    detect_sequence_cycles,
    find_duplicate_sources,
    find_single_channel,
    find_unassigned,
    find_unsourced_info,
    find_unused_resources,
)
from respkit.dsl import parse_model
from respkit.model import Severity

from strategies import model_pairs, models


def build(text: str):
    return build_model(parse_model(text))


class TestFindUnassigned:
    def test_corpus_names_the_omission(self, evacuation):
        findings = find_unassigned(evacuation)
        assert [f.subject for f in findings] == ["collect-evacuee-information"]
        assert findings[0].severity is Severity.HIGH

    def test_fully_assigned_model(self):
        model = build('responsibility "R" { assigned to <A> }')
        assert find_unassigned(model) == []

    def test_two_of_three_lexicographic(self):
        # Oracle: enumerate the three responsibilities by hand; B and C lack
        # agents and sort lexicographically by name.
        model = build('responsibility "Charlie" {}\n'
                      'responsibility "Alpha" { assigned to <A> }\n'
                      'responsibility "Bravo" {}')
        findings = find_unassigned(model)
        assert [f.subject for f in findings] == ["bravo", "charlie"]

    def test_empty_iff_every_responsibility_assigned(self, evacuation):
        # Brute force over all responsibilities.
        expected = [r.id for r in evacuation.responsibilities if not r.assigned_to]
        assert [f.subject for f in find_unassigned(evacuation)] == sorted(expected)


class TestFindUnsourcedInfo:
    def test_sourced_need_not_flagged(self):
        model = build('responsibility "R" {\n'
                      '  requires |Threat information| from <Environment agency>\n'
                      '}')
        assert find_unsourced_info(model) == []

    def test_orphan_need_flagged(self):
        model = build('responsibility "R" { requires |Facts| }')
        (finding,) = find_unsourced_info(model)
        assert finding.subject == "r/facts"

    def test_produced_elsewhere_not_flagged(self):
        model = build('responsibility "R" { requires |Facts| }\n'
                      'responsibility "S" { produces |Facts| }')
        assert find_unsourced_info(model) == []


class TestFindSingleChannel:
    def test_two_channels_not_flagged(self):
        model = build(
            'responsibility "R" {\n'
            '  produces |Log| via "Radio report", "Email or fax if available"\n'
            '}')
        assert find_single_channel(model) == []

    def test_corpus_area_map_flagged(self, evacuation):
        findings = find_single_channel(evacuation)
        assert "evacuate-area/area-map" in [f.subject for f in findings]

    def test_backup_pair_counts_as_two(self):
        model = build('channel "Email"\n'
                      'channel "Radio" backup_of "Email"\n'
                      'responsibility "R" { requires |Facts| via "Email" }')
        assert find_single_channel(model) == []

    def test_backup_counts_from_either_side(self):
        model = build('channel "Email"\n'
                      'channel "Radio" backup_of "Email"\n'
                      'responsibility "R" { requires |Facts| via "Radio" }')
        assert find_single_channel(model) == []

    def test_unrelated_channel_is_no_backup(self):
        model = build('channel "Email"\n'
                      'channel "Radio"\n'
                      'responsibility "R" { requires |Facts| via "Email" }')
        (finding,) = find_single_channel(model)
        assert finding.severity is Severity.MEDIUM

    def test_zero_channels_not_flagged_here(self):
        model = build('responsibility "R" { requires |Facts| from <A> }')
        assert find_single_channel(model) == []


class TestFindDuplicateSources:
    def test_identical_sources_not_flagged(self):
        model = build(
            'responsibility "R" { requires |Area map| from <County council> }\n'
            'responsibility "S" { requires |Area map| from <County council> }')
        assert find_duplicate_sources(model) == []

    def test_differing_sources_flagged(self):
        model = build(
            'responsibility "R" { requires |Area map| from <County council> }\n'
            'responsibility "S" { requires |Area map| from <District Council> }')
        (finding,) = find_duplicate_sources(model)
        assert finding.subject == "area-map"

    def test_two_producers_flagged(self):
        model = build('responsibility "R" { produces |Log| }\n'
                      'responsibility "S" { produces |Log| }')
        (finding,) = find_duplicate_sources(model)
        assert finding.subject == "log"
        assert finding.severity is Severity.LOW


class TestFindUnusedResources:
    def test_referenced_resources_not_flagged(self, evacuation):
        assert find_unused_resources(evacuation) == []

    def test_dangling_declaration_flagged(self):
        model = build('resource [Spare truck]\nresponsibility "R" {}')
        (finding,) = find_unused_resources(model)
        assert finding.subject == "spare-truck"


class TestAgentLoad:
    def test_empty_model(self):
        assert agent_load(build(""), 1) == []

    def test_corpus_under_threshold(self, evacuation, resp_path):
        # Oracle: count "assigned to" mentions per agent in the corpus text.
        text = resp_path.read_text(encoding="utf-8")
        counts: dict[str, int] = {}
        for line in text.splitlines():
            match = re.match(r"\s*assigned to (.+)", line)
            if match:
                for agent in re.findall(r"<([^>]+)>", match.group(1)):
                    counts[agent] = counts.get(agent, 0) + 1
        assert max(counts.values()) <= 3
        assert agent_load(evacuation, 3) == []

    def test_overloaded_agent_reports_count(self):
        model = build("\n".join(
            f'responsibility "R{i}" {{ assigned to <Ops> }}' for i in range(4)))
        (finding,) = agent_load(model, 3)
        assert finding.subject == "ops"
        assert "4" in finding.explanation and "3" in finding.explanation

    def test_threshold_must_be_positive(self, evacuation):
        with pytest.raises(ValueError):
            agent_load(evacuation, 0)


class TestSequenceCycles:
    def test_corpus_single_link_clean(self, evacuation):
        assert evacuation.sequence_links == (
            ("initiate-evacuation", "evacuate-area"),)
        assert detect_sequence_cycles(evacuation) == []

    def test_two_cycle(self):
        model = build('responsibility "A" { precedes "B" }\n'
                      'responsibility "B" { precedes "A" }')
        (finding,) = detect_sequence_cycles(model)
        assert finding.subjects == ("a", "b")

    def test_self_loop(self):
        model = build('responsibility "A" { precedes "A" }')
        (finding,) = detect_sequence_cycles(model)
        assert finding.subjects == ("a",)

    def test_chain_of_five_clean(self):
        text = "\n".join(
            f'responsibility "R{i}" {{ precedes "R{i + 1}" }}' for i in range(4))
        text += '\nresponsibility "R4" {}'
        assert detect_sequence_cycles(build(text)) == []

    def test_cycle_with_tail(self):
        model = build('responsibility "A" { precedes "B" }\n'
                      'responsibility "B" { precedes "C" }\n'
                      'responsibility "C" { precedes "B" }')
        (finding,) = detect_sequence_cycles(model)
        assert finding.subjects == ("b", "c")


class TestRunAll:
    def test_catalog_severities_applied(self, evacuation):
        for finding in run_all(evacuation):
            assert finding.severity is FINDING_CATALOG[finding.code]

    def test_canonical_ordering(self, evacuation):
        findings = run_all(evacuation)
        assert findings == sorted(findings, key=lambda f: (f.code, f.subjects))

    def test_analyses_do_not_mutate(self, evacuation):
        before = print_model(evacuation)
        run_all(evacuation)
        diff_models(evacuation, evacuation)
        assert print_model(evacuation) == before


class TestDiffModels:
    def test_identity(self, evacuation):
        assert diff_models(evacuation, evacuation) == []

    def test_reassignment_is_one_mismatch(self, evacuation, resp_path):
        text = resp_path.read_text(encoding="utf-8")
        assert text.count("assigned to <Police>") == 1
        mutated = build(text.replace("assigned to <Police>",
                                     "assigned to <Fire Service>"))
        result = diff_models(evacuation, mutated)
        assert len(result) == 1
        item = result[0]
        assert item.kind is InconsistencyKind.ASSIGNMENT_MISMATCH
        assert item.responsibility == "Evacuate area"
        assert item.left == "<Police>"
        assert item.right == "<Fire Service>"

    def test_missing_responsibility(self):
        left = build('responsibility "Only here" {}')
        right = build("")
        (item,) = diff_models(left, right)
        assert item.kind is InconsistencyKind.MISSING_RESPONSIBILITY
        assert (item.left, item.right) == ("present", "absent")
        (swapped,) = diff_models(right, left)
        assert (swapped.left, swapped.right) == ("absent", "present")

    def test_source_mismatch(self):
        left = build('responsibility "R" { requires |Map| from <A> }')
        right = build('responsibility "R" { requires |Map| from <B> }')
        (item,) = diff_models(left, right)
        assert item.kind is InconsistencyKind.SOURCE_MISMATCH

    def test_channel_mismatch(self):
        left = build('responsibility "R" { requires |Map| from <A> via "C1" }')
        right = build('responsibility "R" { requires |Map| from <A> via "C2" }')
        (item,) = diff_models(left, right)
        assert item.kind is InconsistencyKind.CHANNEL_MISMATCH

    def test_assignment_order_is_irrelevant(self):
        left = build('responsibility "R" { assigned to <A>, <B> }')
        right = build('responsibility "R" { assigned to <B>, <A> }')
        assert diff_models(left, right) == []

    @settings(max_examples=50, deadline=None)
    @given(model_pairs())
    def test_symmetry(self, pair):
        left, right = pair
        forward = diff_models(left, right)
        backward = diff_models(right, left)
        assert len(forward) == len(backward)
        assert sorted(f.render() for f in backward) == sorted(
            f.swapped().render() for f in forward)

    @settings(max_examples=25, deadline=None)
    @given(models())
    def test_self_diff_is_empty(self, model):
        assert diff_models(model, model) == []
