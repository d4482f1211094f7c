"""Feasibility intervals, dispositions, and full coding-plan round-trips."""

import itertools

import pytest

from torus_cse.blocks import is_primitive, make_block, rank_of
from torus_cse.errors import (
    InconsistentCountsError,
    NotPrimitiveError,
)
from torus_cse.counting import B1, B3, build_ledger, coding_order
from torus_cse.inference import (
    DERIVE,
    FORCED,
    TRANSMIT,
    Disposition,
    Interval,
    disposition,
    feasible_interval,
    finalize_size,
    plan_block,
    rebuild_block,
    transmit_condition,
    transmit_interval,
)

P2 = make_block([[0, 1], [1, 1]])
P4 = make_block([[0, 1, 1], [1, 1, 1]])


def all_blocks(m, n, alphabet=2):
    for cells in itertools.product(range(alphabet), repeat=m * n):
        yield make_block(
            [list(cells[i * n:(i + 1) * n]) for i in range(m)], alphabet=alphabet
        )


def primitive_blocks(m, n, alphabet=2):
    return [p for p in all_blocks(m, n, alphabet) if is_primitive(p)]


class TestIntervals:
    def test_interval_basics(self):
        iv = Interval(1, 3)
        assert iv.width == 3
        assert 2 in iv and 4 not in iv
        assert iv.intersect(Interval(2, 9)) == Interval(2, 3)

    def test_forced_interval_on_p4(self):
        led = build_ledger(P4)
        iv = feasible_interval(make_block([[1, 0, 1]]), led, "cols")
        assert iv == Interval(1, 1)

    def test_open_interval_on_p4(self):
        led = build_ledger(P4)
        # parts: N(01)=1, N(10)=1, N([1])=5 -> lo=0, hi=1
        iv = feasible_interval(make_block([[0, 1, 0]]), led, "cols")
        assert iv == Interval(0, 1)

    def test_single_cell_interval_spans_total(self):
        led = build_ledger(P2)
        assert transmit_interval(make_block([[0]]), led) == Interval(0, 3)

    def test_condition_matches_slack(self):
        led = build_ledger(P4)
        assert not transmit_condition(make_block([[1, 0, 1]]), led, "cols")
        assert transmit_condition(make_block([[0, 1, 0]]), led, "cols")


class TestDispositions:
    def test_p2_pair_walk(self):
        led = build_ledger(P2)
        kinds = {}
        for cells in ([[0, 0]], [[0, 1]], [[1, 0]], [[1, 1]]):
            b = make_block(cells)
            kinds[b] = disposition(b, led)
        assert kinds[make_block([[0, 0]])] == Disposition(
            TRANSMIT, interval=Interval(0, 1))
        # blocks touching the top symbol on either end are derived
        for cells in ([[0, 1]], [[1, 0]], [[1, 1]]):
            assert kinds[make_block(cells)].kind == DERIVE
            assert kinds[make_block(cells)].axis == "cols"

    def test_forced_disposition_on_p4(self):
        led = build_ledger(P4)
        d = disposition(make_block([[1, 0, 1]]), led)
        assert d == Disposition(FORCED, value=1)

    def test_transmit_disposition_on_p4(self):
        led = build_ledger(P4)
        d = disposition(make_block([[0, 1, 0]]), led)
        assert d == Disposition(TRANSMIT, interval=Interval(0, 1))


class TestFinalize:
    def test_single_unknown_family(self):
        led = build_ledger(P2)
        entries = [
            (make_block([[0, 0]]), Disposition(TRANSMIT, interval=Interval(0, 1)), 0),
            (make_block([[0, 1]]), Disposition(DERIVE, axis="cols"), None),
            (make_block([[1, 0]]), Disposition(DERIVE, axis="cols"), None),
            (make_block([[1, 1]]), Disposition(DERIVE, axis="cols"), None),
        ]
        table = finalize_size(entries, led)
        assert table == {
            make_block([[0, 1]]): 1,
            make_block([[1, 0]]): 1,
            make_block([[1, 1]]): 2,
        }

    def test_oversubscribed_family_rejected(self):
        led = build_ledger(P2)
        # both members of the trim-last-col family under N([[0]])=1 claim 1
        entries = [
            (make_block([[0, 0]]), Disposition(TRANSMIT, interval=Interval(0, 1)), 1),
            (make_block([[0, 1]]), Disposition(TRANSMIT, interval=Interval(0, 1)), 1),
            (make_block([[1, 0]]), Disposition(DERIVE, axis="cols"), None),
            (make_block([[1, 1]]), Disposition(DERIVE, axis="cols"), None),
        ]
        with pytest.raises(InconsistentCountsError):
            finalize_size(entries, led)

    def test_value_outside_interval_rejected(self):
        led = build_ledger(P2)
        entries = [
            (make_block([[0, 0]]), Disposition(TRANSMIT, interval=Interval(0, 1)), 2),
        ]
        with pytest.raises(InconsistentCountsError):
            finalize_size(entries, led)


class TestPlan:
    def test_p2_transmitted_sequence(self):
        plan = plan_block(P2)
        got = [(r.size, r.block, r.cls, r.interval, r.value)
               for r in plan.transmitted]
        assert got == [
            ((1, 1), make_block([[0]]), B1, Interval(0, 3), 1),
            ((1, 2), make_block([[0, 0]]), B3, Interval(0, 1), 0),
            ((2, 1), make_block([[0], [0]]), B3, Interval(0, 1), 0),
            ((2, 2), make_block([[0, 1], [1, 0]]), B3, Interval(0, 1), 0),
            ((2, 2), make_block([[1, 0], [0, 1]]), B3, Interval(0, 1), 0),
        ]
        assert plan.rank == rank_of(P2)

    def test_p4_early_sizes(self):
        plan = plan_block(P4)
        by_size = {}
        for r in plan.transmitted:
            by_size.setdefault(r.size, []).append(r)
        assert [(r.block, r.value) for r in by_size[(1, 1)]] == [
            (make_block([[0]]), 1)]
        assert [(r.block, r.value) for r in by_size[(1, 2)]] == [
            (make_block([[0, 0]]), 0)]
        assert [(r.block, r.value) for r in by_size[(1, 3)]] == [
            (make_block([[0, 1, 0]]), 0)]

    def test_rejects_non_primitive(self):
        with pytest.raises(NotPrimitiveError):
            plan_block(make_block([[0, 1], [0, 1]]))
        with pytest.raises(NotPrimitiveError):
            plan_block(make_block([[0, 1]]))

    def test_plan_values_lie_in_intervals(self):
        for p in primitive_blocks(2, 3):
            for r in plan_block(p).transmitted:
                assert r.value in r.interval

    def test_b1_count_is_alphabet_minus_one(self):
        for p in primitive_blocks(2, 2, alphabet=3)[:20]:
            plan = plan_block(p)
            assert sum(1 for r in plan.transmitted if r.cls == B1) == 2


class TestRoundTrip:
    @pytest.mark.parametrize("shape", [(2, 2), (2, 3), (3, 2), (3, 3)])
    def test_exhaustive_binary(self, shape):
        m, n = shape
        seen = 0
        for p in primitive_blocks(m, n):
            plan = plan_block(p)
            got = rebuild_block(m, n, 2, iter(plan.values()), plan.rank)
            assert got == p
            seen += 1
        assert seen > 0

    @pytest.mark.parametrize("shape", [(2, 4), (4, 2), (3, 4)])
    def test_sampled_binary(self, shape):
        m, n = shape
        pool = primitive_blocks(m, n)
        for p in pool[::7]:
            plan = plan_block(p)
            assert rebuild_block(m, n, 2, iter(plan.values()), plan.rank) == p

    def test_exhaustive_ternary_2x2(self):
        for p in primitive_blocks(2, 2, alphabet=3):
            plan = plan_block(p)
            assert rebuild_block(2, 2, 3, iter(plan.values()), plan.rank) == p

    def test_sampled_quaternary_2x3(self):
        pool = primitive_blocks(2, 3, alphabet=4)
        for p in pool[::31]:
            plan = plan_block(p)
            assert rebuild_block(2, 3, 4, iter(plan.values()), plan.rank) == p


class TestOrderCoverage:
    def test_coding_order_covers_plan_sizes(self):
        plan = plan_block(P4)
        order = coding_order(2, 3, 2)
        sizes = {r.size for r in plan.transmitted}
        assert sizes <= set(order.sizes)
