import sqlite3

import pytest

from graphs import cycle_graph, edge_ideal
from store import OutcomeStore, ideal_key


@pytest.fixture
def store(tmp_path):
    return OutcomeStore(str(tmp_path / "outcomes.db"))


def test_save_and_lookup(store):
    I = edge_ideal(cycle_graph(5))
    store.save_outcome(I, "bridge-friendly", False, "witness_found", [0, 1, 2, 4, 3], 7, 0, None)
    row = store.lookup_outcome(I, "bridge-friendly", False)
    assert row == {"result": "witness_found", "witness": [0, 1, 2, 4, 3], "examined": 7, "pruned": 0,
                   "next_rank": None}


def test_miss_is_none(store):
    I = edge_ideal(cycle_graph(5))
    store.save_outcome(I, "bridge-friendly", False, "exhausted_negative", None, 120, 0, None)
    assert store.lookup_outcome(I, "bridge-friendly", True) is None
    assert store.lookup_outcome(I, "lyubeznik", False) is None
    assert store.lookup_outcome(edge_ideal(cycle_graph(4)), "bridge-friendly", False) is None


def test_save_replaces_earlier_row(store):
    I = edge_ideal(cycle_graph(4))
    store.save_outcome(I, "bridge-friendly", False, "budget_exceeded", None, 5, 0, 5)
    store.save_outcome(I, "bridge-friendly", False, "exhausted_negative", None, 24, 0, None)
    assert store.lookup_outcome(I, "bridge-friendly", False)["result"] == "exhausted_negative"
    assert store.get_database_stats()["total_outcomes"] == 1


def test_stats(store):
    store.save_outcome(edge_ideal(cycle_graph(4)), "bridge-friendly", False, "exhausted_negative", None, 24, 0, None)
    store.save_outcome(edge_ideal(cycle_graph(5)), "bridge-friendly", False, "witness_found", [0, 1, 2, 3, 4], 1, 0, None)
    store.save_outcome(edge_ideal(cycle_graph(5)), "lyubeznik", False, "exhausted_negative", None, 120, 0, None)
    stats = store.get_database_stats()
    assert stats["total_outcomes"] == 3
    assert stats["by_result"] == {"exhausted_negative": 2, "witness_found": 1}
    assert stats["recent_outcomes_24h"] == 3


def test_cleanup_old_entries(store):
    I = edge_ideal(cycle_graph(4))
    store.save_outcome(I, "bridge-friendly", False, "exhausted_negative", None, 24, 0, None)
    conn = sqlite3.connect(store.db_path)
    conn.execute("UPDATE search_outcomes SET recorded_at = datetime('now', '-60 days')")
    conn.commit()
    conn.close()
    store.save_outcome(I, "lyubeznik", False, "exhausted_negative", None, 24, 0, None)
    assert store.cleanup_old_entries(30) == 1
    assert store.lookup_outcome(I, "bridge-friendly", False) is None
    assert store.lookup_outcome(I, "lyubeznik", False) is not None


def test_ideal_key_ignores_names():
    I = edge_ideal(cycle_graph(4))
    assert ideal_key(I) == ideal_key(I.with_names(("a", "b", "c", "d")))
    assert ideal_key(I) != ideal_key(edge_ideal(cycle_graph(5)))


def test_unusable_path_degrades_safely(tmp_path):
    store = OutcomeStore(str(tmp_path))
    I = edge_ideal(cycle_graph(4))
    store.save_outcome(I, "bridge-friendly", False, "exhausted_negative", None, 24, 0, None)
    assert store.lookup_outcome(I, "bridge-friendly", False) is None
    assert store.get_database_stats() == {"total_outcomes": 0, "by_result": {}, "recent_outcomes_24h": 0}
    assert store.cleanup_old_entries() == 0
