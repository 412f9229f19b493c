import hashlib
import json
import logging
import sqlite3
from typing import Dict, List, Optional

from ideal import MonomialIdeal

logger = logging.getLogger(__name__)


def ideal_key(ideal: MonomialIdeal) -> str:
    """Stable key for an ideal: sha256 of its canonical generator list."""
    canonical = json.dumps([list(g.exponents) for g in ideal.gens], separators=(",", ":"))
    return hashlib.sha256(f"{ideal.num_vars}:{canonical}".encode()).hexdigest()


class OutcomeStore:
    """SQLite cache of order-search outcomes, keyed by ideal, predicate and symmetry flag."""

    def __init__(self, db_path: str = "morsecell_cache.db"):
        self.db_path = db_path
        self.init_database()

    def init_database(self):
        """Initialize SQLite database for search outcomes"""
        try:
            conn = sqlite3.connect(self.db_path)
            cursor = conn.cursor()
            cursor.execute('''
                CREATE TABLE IF NOT EXISTS search_outcomes (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    ideal_key TEXT NOT NULL,
                    predicate TEXT NOT NULL,
                    symmetry INTEGER NOT NULL,
                    result TEXT NOT NULL,
                    witness_json TEXT,
                    examined INTEGER NOT NULL,
                    pruned INTEGER NOT NULL,
                    next_rank INTEGER,
                    recorded_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP,
                    UNIQUE(ideal_key, predicate, symmetry)
                )
            ''')
            conn.commit()
            conn.close()
            logger.debug(f"Outcome cache ready at {self.db_path}")
        except Exception as e:
            logger.error(f"Error initializing outcome cache: {e}")

    def lookup_outcome(self, ideal: MonomialIdeal, predicate: str, symmetry: bool) -> Optional[Dict]:
        """Return the cached row for this search, or None on a miss"""
        try:
            conn = sqlite3.connect(self.db_path)
            cursor = conn.cursor()
            cursor.execute('''
                SELECT result, witness_json, examined, pruned, next_rank FROM search_outcomes
                WHERE ideal_key = ? AND predicate = ? AND symmetry = ?
            ''', (ideal_key(ideal), predicate, int(symmetry)))
            row = cursor.fetchone()
            conn.close()
            if row is None:
                return None
            result, witness_json, examined, pruned, next_rank = row
            return {
                "result": result,
                "witness": json.loads(witness_json) if witness_json else None,
                "examined": examined,
                "pruned": pruned,
                "next_rank": next_rank,
            }
        except Exception as e:
            logger.error(f"Error reading outcome cache: {e}")
            return None

    def save_outcome(self, ideal: MonomialIdeal, predicate: str, symmetry: bool, result: str,
                     witness: Optional[List[int]], examined: int, pruned: int, next_rank: Optional[int]):
        """Record a search outcome, replacing any earlier row for the same search"""
        try:
            conn = sqlite3.connect(self.db_path)
            cursor = conn.cursor()
            cursor.execute('''
                INSERT OR REPLACE INTO search_outcomes
                (ideal_key, predicate, symmetry, result, witness_json, examined, pruned, next_rank)
                VALUES (?, ?, ?, ?, ?, ?, ?, ?)
            ''', (ideal_key(ideal), predicate, int(symmetry), result,
                  json.dumps(witness) if witness is not None else None, examined, pruned, next_rank))
            conn.commit()
            conn.close()
        except Exception as e:
            logger.error(f"Error saving outcome: {e}")

    def cleanup_old_entries(self, days_to_keep: int = 30) -> int:
        """Drop outcomes older than the given number of days"""
        try:
            conn = sqlite3.connect(self.db_path)
            cursor = conn.cursor()
            cursor.execute(
                "DELETE FROM search_outcomes WHERE recorded_at < datetime('now', ?)",
                (f"-{int(days_to_keep)} days",),
            )
            deleted = cursor.rowcount
            conn.commit()
            conn.close()
            if deleted > 0:
                logger.info(f"Cleaned up {deleted} old cached outcomes")
            return deleted
        except Exception as e:
            logger.error(f"Error cleaning up old outcomes: {e}")
            return 0

    def get_database_stats(self) -> Dict:
        """Get cache statistics"""
        try:
            conn = sqlite3.connect(self.db_path)
            cursor = conn.cursor()
            cursor.execute('SELECT COUNT(*) FROM search_outcomes')
            total = cursor.fetchone()[0]
            cursor.execute('SELECT result, COUNT(*) FROM search_outcomes GROUP BY result')
            by_result = dict(cursor.fetchall())
            cursor.execute("SELECT COUNT(*) FROM search_outcomes WHERE recorded_at > datetime('now', '-1 day')")
            recent = cursor.fetchone()[0]
            conn.close()
            return {'total_outcomes': total, 'by_result': by_result, 'recent_outcomes_24h': recent}
        except Exception as e:
            logger.error(f"Error getting cache stats: {e}")
            return {'total_outcomes': 0, 'by_result': {}, 'recent_outcomes_24h': 0}
