import pytest
from hypothesis import given, settings

from respkit import (
    answers_skeleton,
    build_model,
    generate_questionnaire,
    information_recorded_table,
    information_required_table,
    ingest,
    ingest_all,
    print_model,
)
from respkit.dsl import parse_answers, parse_model
from respkit.elicitation import AnswerSlot, IngestError
from respkit.model import ElicitationRecord, NeedAnswer, UnknownResponsibility

from strategies import models


def build(text: str):
    return build_model(parse_model(text))


class TestQuestionnaire:
    def test_always_six_questions(self, evacuation):
        for resp in evacuation.responsibilities:
            sheet = generate_questionnaire(evacuation, resp.name)
            assert [q.number for q in sheet.questions] == [1, 2, 3, 4, 5, 6]

    def test_sixth_question_lists_guide_words(self, evacuation):
        sheet = generate_questionnaire(evacuation, "Evacuate area")
        assert ("unavailable, inaccurate, incomplete, late, early"
                in sheet.questions[5].prompt)

    def test_slot_kinds(self, evacuation):
        sheet = generate_questionnaire(evacuation, "Evacuate area")
        slots = [q.slot for q in sheet.questions]
        assert slots == [
            AnswerSlot.NEED_LINES, AnswerSlot.CHANNEL_ANNOTATIONS,
            AnswerSlot.NEED_LINES, AnswerSlot.RECORD_LINES,
            AnswerSlot.CHANNEL_ANNOTATIONS, AnswerSlot.HAZARD_BLOCKS,
        ]

    def test_unknown_name_lists_available(self, evacuation):
        with pytest.raises(UnknownResponsibility) as excinfo:
            generate_questionnaire(evacuation, "X")
        message = str(excinfo.value)
        assert '"Evacuate area"' in message
        assert '"Collect evacuee information"' in message

    def test_existing_needs_prepopulate_drafts(self, evacuation):
        sheet = generate_questionnaire(evacuation, "Evacuate area")
        assert len(sheet.draft_needs) == 8
        assert len(sheet.draft_products) == 3

    def test_skeleton_reparses(self, evacuation):
        skeleton = answers_skeleton(evacuation, "Evacuate area")
        (record,) = parse_answers(skeleton)
        assert record.responsibility == "Evacuate area"
        assert len(record.needs) == 8
        assert len(record.records) == 3

    def test_skeleton_has_hazard_block_per_item(self, evacuation):
        skeleton = answers_skeleton(evacuation, "Evacuate area")
        blocks = [line for line in skeleton.splitlines()
                  if line.startswith("  hazards |")]
        assert len(blocks) == 8


class TestIngest:
    def test_corpus_answers_merge_to_eight_needs(self, evacuation,
                                                 evacuation_answers):
        merged = ingest_all(evacuation, evacuation_answers)
        resp = merged.responsibility_named("Evacuate area")
        assert len(resp.needs) == 8
        assert len(resp.hazards) == 5

    def test_empty_record_is_identity(self, evacuation):
        record = ElicitationRecord(responsibility="Evacuate area")
        merged = ingest(evacuation, record)
        assert print_model(merged) == print_model(evacuation)

    def test_idempotent_on_corpus_answers(self, evacuation, evacuation_answers):
        once = ingest_all(evacuation, evacuation_answers)
        twice = ingest_all(once, evacuation_answers)
        assert print_model(twice) == print_model(once)

    def test_monotone_never_drops_needs(self, evacuation, evacuation_answers):
        merged = ingest_all(evacuation, evacuation_answers)
        before = evacuation.responsibility_named("Evacuate area")
        after = merged.responsibility_named("Evacuate area")
        assert set(n.resource for n in before.needs) <= set(
            n.resource for n in after.needs)

    def test_new_need_is_appended(self, evacuation):
        record = ElicitationRecord(
            responsibility="Collect evacuee information",
            needs=(NeedAnswer("Evacuee register", ("Police",), ()),),
        )
        merged = ingest(evacuation, record)
        resp = merged.responsibility_named("Collect evacuee information")
        assert [merged.resource_name(n.resource) for n in resp.needs] == [
            "Evacuee register"]
        assert merged.resource_named("Evacuee register").implicit

    def test_unknown_responsibility_rejected(self, evacuation):
        record = ElicitationRecord(responsibility="Ghost duty")
        with pytest.raises(UnknownResponsibility):
            ingest(evacuation, record)

    def test_strict_mode_rejects_new_references(self, evacuation):
        record = ElicitationRecord(
            responsibility="Collect evacuee information",
            needs=(NeedAnswer("Never declared", (), ()),),
        )
        with pytest.raises(IngestError, match="unknown information resource"):
            ingest(evacuation, record, strict=True)

    def test_strict_mode_accepts_known_references(self, evacuation,
                                                  evacuation_answers):
        merged = ingest_all(evacuation, evacuation_answers, strict=True)
        assert len(merged.responsibility_named("Evacuate area").hazards) == 5

    def test_hazard_for_unrelated_item_rejected(self, evacuation):
        (record,) = parse_answers(
            'elicitation "Evacuate area" {\n'
            '  hazards |Never required| { late "slow" }\n'
            '}')
        with pytest.raises(IngestError, match="neither requires nor produces"):
            ingest(evacuation, record)

    def test_hazard_on_product_is_accepted(self, evacuation):
        (record,) = parse_answers(
            'elicitation "Evacuate area" {\n'
            '  hazards |Information about unsafe routes| { late "stale" }\n'
            '}')
        merged = ingest(evacuation, record)
        resp = merged.responsibility_named("Evacuate area")
        assert any(h.item == "information-about-unsafe-routes"
                   for h in resp.hazards)

    def test_tables_equal_ingest_then_render(self, evacuation,
                                             evacuation_answers):
        # The corpus model already contains the answer content, so merging
        # must not change what the tables show.
        merged = ingest_all(evacuation, evacuation_answers)
        assert information_required_table(
            merged, "Evacuate area") == information_required_table(
            evacuation, "Evacuate area")
        assert information_recorded_table(
            merged, "Evacuate area") == information_recorded_table(
            evacuation, "Evacuate area")

    @settings(max_examples=25, deadline=None)
    @given(models())
    def test_empty_record_identity_property(self, model):
        if not model.responsibilities:
            return
        record = ElicitationRecord(
            responsibility=model.responsibilities[0].name)
        assert print_model(ingest(model, record)) == print_model(model)


class TestInformationTables:
    def test_required_shape_and_first_row(self, evacuation):
        table = information_required_table(evacuation, "Evacuate area")
        assert table.columns == (
            "Information required", "Source", "Communication channel")
        assert len(table.rows) == 8
        assert table.rows[0] == (
            "Area map", "County council",
            "Radio data link to printers in local command centre")

    def test_joint_sources_render_comma_separated(self, evacuation):
        table = information_required_table(evacuation, "Evacuate area")
        by_item = {row[0]: row for row in table.rows}
        assert by_item["Evacuated premises"][1] == "Police, Fire Service"

    def test_no_needs_gives_header_only(self, evacuation):
        table = information_required_table(evacuation, "Search and rescue")
        assert table.rows == ()

    def test_recorded_shape(self, evacuation):
        table = information_recorded_table(evacuation, "Evacuate area")
        assert table.columns == ("Information created/recorded", "Channels")
        assert [row[0] for row in table.rows] == [
            "Information about evacuated premises, evacuation time and units "
            "responsible for evacuation",
            "Information about unchecked premises",
            "Information about unsafe routes",
        ]

    def test_recorded_channels_cell_has_both_phrases(self, evacuation):
        table = information_recorded_table(evacuation, "Evacuate area")
        cell = table.rows[0][1]
        assert "Radio or verbal report from ground units to local Bronze Command" in cell
        assert "Email or fax to Silver Command if available, otherwise radio" in cell

    def test_no_products_gives_header_only(self, evacuation):
        table = information_recorded_table(evacuation, "Arrange transport")
        assert table.rows == ()

    def test_unknown_responsibility(self, evacuation):
        with pytest.raises(UnknownResponsibility):
            information_required_table(evacuation, "X")
