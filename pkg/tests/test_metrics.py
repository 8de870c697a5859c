"""Performance measures: golden values, oracle equivalence, identities."""

import json
import random

import pytest

from loggen import random_ocel, traces_to_ocel
from opera.discovery import discover_ocpn
from opera.errors import MissingVisit, UnknownMeasure
from opera.metrics import (
    MeasureKind,
    all_measures,
    analyze,
    expand_measures,
    measure_basic,
    measure_frequency,
    measure_typed,
    related_token_visits,
    report_to_json,
)
from opera.ocel import Event, OCEL
from opera.replay import replay


def naive_related(eo, rr, net):
    """Direct argmax over all token visits in the transition's input places."""
    preset = net.net.preset(eo.t)
    out = set()
    for oi in sorted(eo.e.objects):
        candidates = [v for v in rr.visits if v.place in preset and v.oi == oi]
        if candidates:
            out.add(max(candidates, key=lambda v: (v.bt, v.place)))
    return frozenset(out)


@pytest.fixture
def fixture_replay(fixture_log, blood_test_net):
    return replay(fixture_log, blood_test_net)


@pytest.fixture
def eo1(fixture_replay):
    return fixture_replay.occurrence_of("e4")


class TestRelatedTokenVisits:
    def test_golden(self, eo1, fixture_replay):
        rel = related_token_visits(eo1, fixture_replay)
        assert {(v.place, v.oi, v.bt, v.et) for v in rel} == {
            ("p3", "T1", 15.0, 180.0),
            ("p4", "S1", 120.0, 180.0),
            ("p4", "S2", 150.0, 180.0),
        }

    def test_single_object_event(self, fixture_replay):
        eo = fixture_replay.occurrence_of("e1")
        rel = related_token_visits(eo, fixture_replay)
        assert len(rel) == 1

    def test_matches_naive_scan_on_acyclic(self, fixture_log, blood_test_net, fixture_replay):
        for eo in fixture_replay.occurrences:
            assert related_token_visits(eo, fixture_replay) == naive_related(
                eo, fixture_replay, blood_test_net
            )

    def test_loop_uses_consumed_visit_not_later_one(self):
        log = traces_to_ocel([["a", "b", "a"]])
        net = discover_ocpn(log)
        rr = replay(log, net)
        first_a = rr.occurrence_of("e000000")
        rel = related_token_visits(first_a, rr)
        assert rel == rr.consumption_index[first_a]
        # the plain argmax would pick the visit produced by the loop-back
        assert rel != naive_related(first_a, rr, net)
        (visit,) = rel
        assert visit.bt <= first_a.e.st

    def test_unknown_occurrence(self, fixture_replay, fixture_log, blood_test_net):
        from opera.replay import EventOccurrence
        ghost = EventOccurrence(t="t9", e=fixture_log.events[0])
        with pytest.raises(MissingVisit):
            related_token_visits(ghost, fixture_replay)


class TestGoldenMeasures:
    def test_basic(self, eo1, fixture_replay):
        assert measure_basic("flow", eo1, fixture_replay) == 225.0
        assert measure_basic("sojourn", eo1, fixture_replay) == 90.0
        assert measure_basic("wait", eo1, fixture_replay) == 30.0
        assert measure_basic("service", eo1, fixture_replay) == 60.0
        assert measure_basic("sync", eo1, fixture_replay) == 135.0

    def test_typed(self, eo1, fixture_replay):
        assert measure_typed("pool", "sample", eo1, fixture_replay) == 30.0
        assert measure_typed("pool", "test", eo1, fixture_replay) == 0.0
        assert measure_typed("lag", "test", eo1, fixture_replay) == 135.0
        assert measure_typed("lag", "sample", eo1, fixture_replay) == 0.0

    def test_pool_undefined_for_absent_type(self, eo1, fixture_replay):
        assert measure_typed("pool", "order", eo1, fixture_replay) is None

    def test_frequencies(self, eo1, fixture_replay):
        assert measure_frequency("object_freq", eo1) == 3
        assert measure_frequency("object_type_freq", eo1) == 2

    def test_constructed_event_frequencies(self):
        e = Event(ei="x", act="a", st=0.0, ct=1.0, omap={
            "A": frozenset({"A1", "A2"}),
            "B": frozenset({"B1", "B2"}),
            "C": frozenset({"C1"}),
        })
        from opera.replay import EventOccurrence
        eo = EventOccurrence(t="t", e=e)
        assert measure_frequency("object_freq", eo) == 5
        assert measure_frequency("object_type_freq", eo) == 3

    def test_degenerate_instant_event(self):
        log = OCEL(events=(
            Event(ei="e1", act="a", st=5.0, ct=5.0, omap={"A": frozenset({"A1"})}),
        ), objects={})
        net = discover_ocpn(log)
        rr = replay(log, net)
        eo = rr.occurrences[0]
        for kind in ("flow", "sojourn", "wait", "service", "sync"):
            assert measure_basic(kind, eo, rr) == 0.0


class TestMeasureKinds:
    def test_parse_and_expand(self):
        kinds = expand_measures(["sync", "pool:sample", "lag"], ["test", "sample"])
        assert [k.key() for k in kinds] == ["sync", "pool:sample", "lag:sample", "lag:test"]

    def test_unknown_rejected(self):
        with pytest.raises(UnknownMeasure):
            expand_measures(["speed"], [])
        with pytest.raises(UnknownMeasure):
            MeasureKind(name="pool")
        with pytest.raises(UnknownMeasure):
            MeasureKind(name="sync", ot="sample")


class TestAnalyze:
    def test_wait_aggregation(self, fixture_log, blood_test_net):
        report = analyze(fixture_log, blood_test_net, expand_measures(["wait"], []))
        stats = report.stats("t3", "wait")
        assert stats.samples == (30.0,)
        assert (stats.mean, stats.median, stats.min, stats.max, stats.count) == (
            30.0, 30.0, 30.0, 30.0, 1,
        )

    def test_window_excluding_shared_event(self, fixture_log, blood_test_net):
        report = analyze(fixture_log, blood_test_net,
                         expand_measures(["sync"], []), window=(0.0, 160.0))
        stats = report.stats("t3", "sync")
        assert stats.count == 0
        assert stats.mean is None

    def test_all_kinds_match_golden(self, fixture_log, blood_test_net):
        kinds = all_measures(fixture_log.object_types)
        report = analyze(fixture_log, blood_test_net, kinds)
        expected = {
            "flow": 225.0, "sojourn": 90.0, "wait": 30.0, "service": 60.0,
            "sync": 135.0, "pool:sample": 30.0, "pool:test": 0.0,
            "lag:test": 135.0, "lag:sample": 0.0,
            "object_freq": 3.0, "object_type_freq": 2.0,
        }
        for key, value in expected.items():
            assert report.stats("t3", key).samples == (value,), key

    def test_pool_undefined_counted_separately(self, fixture_log, blood_test_net):
        report = analyze(fixture_log, blood_test_net,
                         expand_measures(["pool"], fixture_log.object_types))
        stats = report.stats("t1", "pool:sample")  # t1 has no sample objects
        assert stats.count == 0
        assert stats.undefined_count == 1

    def test_report_lists_every_labeled_transition(self, fixture_log, blood_test_net):
        report = analyze(fixture_log, blood_test_net, expand_measures(["sync"], []))
        assert set(report.transitions) == {"t1", "t2", "t3", "t4", "t5", "t6"}

    def test_report_json_deterministic(self, fixture_log, blood_test_net):
        kinds = all_measures(fixture_log.object_types)
        first = report_to_json(analyze(fixture_log, blood_test_net, kinds))
        second = report_to_json(analyze(fixture_log, blood_test_net, kinds))
        assert first == second
        doc = json.loads(first)
        assert doc["transitions"]["t3"]["sync"]["mean"] == 135.0
        assert doc["window"] is None


def each_occurrence_measures(log):
    net = discover_ocpn(log)
    rr = replay(log, net)
    types = log.object_types
    for eo in rr.occurrences:
        flow = measure_basic("flow", eo, rr)
        sojourn = measure_basic("sojourn", eo, rr)
        wait = measure_basic("wait", eo, rr)
        service = measure_basic("service", eo, rr)
        sync = measure_basic("sync", eo, rr)
        pools = {ot: measure_typed("pool", ot, eo, rr) for ot in types}
        lags = {ot: measure_typed("lag", ot, eo, rr) for ot in types}
        yield eo, flow, sojourn, wait, service, sync, pools, lags


class TestIdentities:
    @pytest.mark.parametrize("seed", range(8))
    def test_algebraic_identities(self, seed):
        log = random_ocel(random.Random(seed), n_cases=12)
        count = 0
        for eo, flow, sojourn, wait, service, sync, pools, lags in each_occurrence_measures(log):
            count += 1
            assert abs(flow - (sync + sojourn)) < 1e-9
            assert abs(sojourn - (wait + service)) < 1e-9
            assert wait >= 0 and sync >= 0 and service >= 0
            for value in pools.values():
                if value is not None:
                    assert -1e-9 <= value <= sync + 1e-9
            for value in lags.values():
                assert -1e-9 <= value <= sync + 1e-9
            if len(eo.e.objects) == 1:
                assert sync == 0
                for ot, value in pools.items():
                    if value is not None:
                        assert value == 0
                for value in lags.values():
                    assert value == 0
        assert count > 0


class TestOracleEquivalence:
    @pytest.mark.parametrize("seed", range(6))
    def test_random_acyclic_logs(self, seed):
        rng = random.Random(seed)
        log = random_ocel(rng, n_cases=6, activities=tuple("abcdefgh"), max_steps=4)
        net = discover_ocpn(log)
        rr = replay(log, net)
        for eo in rr.occurrences:
            left = related_token_visits(eo, rr)
            right = naive_related(eo, rr, net)
            if left != right:
                # acceptable only on cyclic models; verify a cycle exists
                assert _net_has_cycle(net), (seed, eo.e.ei)


def _net_has_cycle(net) -> bool:
    graph: dict[str, set[str]] = {}
    for src, tgt in net.net.arcs:
        graph.setdefault(src, set()).add(tgt)
    state: dict[str, int] = {}

    def dfs(node: str) -> bool:
        state[node] = 1
        for nxt in graph.get(node, ()):
            if state.get(nxt, 0) == 1:
                return True
            if state.get(nxt, 0) == 0 and dfs(nxt):
                return True
        state[node] = 2
        return False

    return any(state.get(n, 0) == 0 and dfs(n) for n in list(graph))
