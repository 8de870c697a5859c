"""Shared fixtures: the blood-test example log and its hand-built net."""

import pytest

from opera.ocel import OCEL, Event
from opera.ocpn import OCPN, LabeledPetriNet

# Relative timestamps (seconds from epoch) keep expected values integral.
FIXTURE_CSV = """\
event_id,activity,start_timestamp,complete_timestamp,test,sample
e1,prepare test,1970-01-01T00:00:10Z,1970-01-01T00:00:15Z,T1,
e2,take sample,1970-01-01T00:01:55Z,1970-01-01T00:02:00Z,,S1
e3,take sample,1970-01-01T00:02:25Z,1970-01-01T00:02:30Z,,S2
e4,conduct test,1970-01-01T00:03:00Z,1970-01-01T00:04:00Z,T1,S1;S2
"""


def make_fixture_log() -> OCEL:
    events = (
        Event(ei="e1", act="prepare test", st=10.0, ct=15.0,
              omap={"test": frozenset({"T1"})}),
        Event(ei="e2", act="take sample", st=115.0, ct=120.0,
              omap={"sample": frozenset({"S1"})}),
        Event(ei="e3", act="take sample", st=145.0, ct=150.0,
              omap={"sample": frozenset({"S2"})}),
        Event(ei="e4", act="conduct test", st=180.0, ct=240.0,
              omap={"test": frozenset({"T1"}), "sample": frozenset({"S1", "S2"})}),
    )
    return OCEL(events=events, objects={})


def make_blood_test_net() -> OCPN:
    """Hand-built net: test path p1-t1-p3-t3-p5-t6-p9, sample path
    p2-t2-p4-t3-p6-t4-p7-t5-p8, with t3 shared by both types."""
    arcs = frozenset({
        ("p1", "t1"), ("t1", "p3"), ("p3", "t3"), ("t3", "p5"),
        ("p5", "t6"), ("t6", "p9"),
        ("p2", "t2"), ("t2", "p4"), ("p4", "t3"), ("t3", "p6"),
        ("p6", "t4"), ("t4", "p7"), ("p7", "t5"), ("t5", "p8"),
    })
    net = LabeledPetriNet(
        places=frozenset({"p1", "p2", "p3", "p4", "p5", "p6", "p7", "p8", "p9"}),
        transitions=frozenset({"t1", "t2", "t3", "t4", "t5", "t6"}),
        arcs=arcs,
        labels={
            "t1": "prepare test",
            "t2": "take sample",
            "t3": "conduct test",
            "t4": "transfer samples",
            "t5": "clear sample",
            "t6": "report result",
        },
    )
    place_types = {
        "p1": "test", "p3": "test", "p5": "test", "p9": "test",
        "p2": "sample", "p4": "sample", "p6": "sample", "p7": "sample", "p8": "sample",
    }
    variable = frozenset({("p4", "t3"), ("t3", "p6"), ("p6", "t4"), ("t4", "p7")})
    return OCPN(net=net, place_types=place_types, variable_arcs=variable)


@pytest.fixture
def fixture_log() -> OCEL:
    return make_fixture_log()


@pytest.fixture
def blood_test_net() -> OCPN:
    return make_blood_test_net()


@pytest.fixture
def fixture_csv() -> str:
    return FIXTURE_CSV
