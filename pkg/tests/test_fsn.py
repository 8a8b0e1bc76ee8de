import logging
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from agendalattice.fsn import JournalEntry, JournalError, compute_shares, group_by_tid, to_mv_context
from agendalattice.toy import ACCOUNT_FEATURES, FEATURES, journal

F = Fraction


def test_group_by_tid_order_and_sides():
    entries = [
        JournalEntry(1, "2", "cash", -5),
        JournalEntry(2, "1", "cash", -3),
        JournalEntry(3, "2", "sales", 5),
        JournalEntry(4, "1", "sales", 3),
    ]
    procs = group_by_tid(entries)
    assert [p.tid for p in procs] == ["2", "1"]
    assert procs[0].credited == {"cash": 5} and procs[0].debited == {"sales": 5}


def test_one_sided_process_rejected():
    with pytest.raises(JournalError):
        group_by_tid([JournalEntry(1, "1", "cash", 5)])
    with pytest.raises(JournalError):
        JournalEntry(1, "1", "cash", 0)


def test_unbalanced_process_warns(caplog):
    with caplog.at_level(logging.WARNING):
        group_by_tid([JournalEntry(1, "1", "a", -5), JournalEntry(2, "1", "b", 4)])
    assert "unbalanced" in caplog.text


def test_toy_process_shares():
    procs = {p.tid: p for p in group_by_tid(journal())}
    assert len(procs) == 12
    assert compute_shares(procs["3"]) == {"other expenses": F(1, 4), "cost of sales": F(3, 4), "revenue": F(-1)}
    assert compute_shares(procs["12"]) == {
        "revenue": F(-5, 6),
        "tax": F(-1, 6),
        "personal expenses": F(1, 2),
        "other expenses": F(1, 2),
    }


amounts = st.lists(st.integers(1, 1000), min_size=1, max_size=4)


@given(amounts, amounts)
def test_share_sums(credits, debits):
    entries = [JournalEntry(i, "t", f"c{i}", -v) for i, v in enumerate(credits)]
    entries += [JournalEntry(100 + i, "t", f"d{i}", v) for i, v in enumerate(debits)]
    shares = compute_shares(group_by_tid(entries)[0])
    assert sum(v for v in shares.values() if v < 0) == -1
    assert sum(v for v in shares.values() if v > 0) == 1
    assert all(-1 <= v <= 1 for v in shares.values())


def test_exact_and_float_contexts_agree():
    procs = group_by_tid(journal())
    exact = to_mv_context(procs, ACCOUNT_FEATURES, FEATURES, exact=True)
    approx = to_mv_context(procs, ACCOUNT_FEATURES, FEATURES)
    assert exact.objects == tuple(f"a{i}" for i in range(1, 13))
    for r1, r2 in zip(exact.values, approx.values):
        assert all(isinstance(v, Fraction) for v in r1)
        assert all(abs(float(a) - b) < 1e-15 for a, b in zip(r1, r2))


def test_unknown_account_column():
    procs = group_by_tid(journal())
    with pytest.raises(JournalError):
        to_mv_context(procs, ACCOUNT_FEATURES, FEATURES[:5])
