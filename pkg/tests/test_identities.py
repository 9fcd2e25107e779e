import json

import pytest

from calbch.bruck import BruckEnvelope
from calbch.calts import A, B
from calbch.identities import CATALOGUE, DEFAULT_DEGREES, HOPF_SUITE, tangent_check, verify_identity


@pytest.mark.parametrize("name", sorted(CATALOGUE))
def test_identity_holds_at_default_degree(name):
    rep = verify_identity(name)
    assert rep.degree == DEFAULT_DEGREES[name]
    assert rep.checked > 0
    assert rep.ok, rep.failures[:2]


def test_hopf_suite_is_in_catalogue():
    assert set(HOPF_SUITE) <= set(CATALOGUE)


def test_report_json_shape():
    doc = json.loads(verify_identity("dot_comm", 3).to_json())
    assert set(doc) == {"identity", "degree", "checked", "failures"}
    assert doc["identity"] == "dot_comm" and doc["degree"] == 3 and doc["failures"] == []


def test_unknown_identity():
    with pytest.raises(KeyError):
        verify_identity("moufang")
    with pytest.raises(ValueError):
        verify_identity("dot_comm", 99)


def test_tangent_structure_degree_7():
    rep = tangent_check(7)
    assert rep.ok and rep.checked > 100


def test_verifier_reports_a_planted_counterexample():
    H = BruckEnvelope.free2(3)
    a, b = H.letter(A), H.letter(B)
    H.dot_mono(a, b)
    H._dotm[(a, b)] = {(a[0], b[0]): 2}  # corrupt one cached product
    rep = verify_identity("dot_comm", 3, H)
    assert not rep.ok
    assert rep.failures[0]["witness"] == ["a", "b"]
