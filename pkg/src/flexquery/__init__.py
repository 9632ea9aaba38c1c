"""Fuzzy flexible querying: auto-derived trapezoidal membership functions
over numeric table attributes, incremental maintenance under updates, and
lattice-based cooperative query answering (minimal failure reasons and
ranked approximate subqueries when a query comes back empty).
"""

__version__ = "0.1.0"

from .dataset import Dataset, AttributeSeries, load_csv, attribute_series
from .clustering import Partition, Cluster, cluster_plain, clusterdb_star
from .membership import LinguisticVariable, TrapezoidMF, gfat, mf_eval
from .knowledge import KnowledgeBase, load_kb
from .maintenance import UpdateOutcome, check_coherence, insert_value, delete_value
from .query import FuzzyQuery, Condition, parse_query, evaluate

__all__ = [
    "Dataset", "AttributeSeries", "load_csv", "attribute_series",
    "Partition", "Cluster", "cluster_plain", "clusterdb_star",
    "LinguisticVariable", "TrapezoidMF", "gfat", "mf_eval",
    "KnowledgeBase", "load_kb",
    "UpdateOutcome", "check_coherence", "insert_value", "delete_value",
    "FuzzyQuery", "Condition", "parse_query", "evaluate",
    "__version__",
]
