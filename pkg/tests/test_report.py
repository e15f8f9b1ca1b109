import json
from pathlib import Path

import jsonschema
import pytest

from spbw.corpus import corpus_doc
from spbw.pipeline import run_smooth
from spbw.report import Report

SCHEMA = json.loads(
    (Path(__file__).resolve().parents[1] / "src" / "spbw" / "schema" / "report.schema.json").read_text()
)


@pytest.fixture(scope="module")
def weyl_report():
    return run_smooth(corpus_doc("weyl"))


def test_report_round_trip(weyl_report):
    again = Report.from_json(weyl_report.to_json())
    assert again == weyl_report


def test_report_matches_schema(weyl_report):
    jsonschema.validate(weyl_report.to_dict(), SCHEMA)


def test_broken_report_matches_schema():
    rep = run_smooth(corpus_doc("broken"))
    jsonschema.validate(rep.to_dict(), SCHEMA)
    assert rep.verdict == "failed"
    assert rep.failed_check == "pbw-consistency"


def test_zero_timing_is_byte_stable(weyl_report):
    a = weyl_report.to_json(zero_timing=True)
    b = Report.from_json(weyl_report.to_json()).to_json(zero_timing=True)
    assert a == b


def test_human_text_mentions_every_stage(weyl_report):
    text = weyl_report.human_text()
    for stage in ("pbw-consistency", "connectedness", "integrability", "verdict"):
        assert stage in text
