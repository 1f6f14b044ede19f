"""Audits of group representation in the top-k of a ranking."""

from ._rankaudit import (
    Audit,
    Dataset,
    RankAuditError,
    Ranking,
    audit_global,
    audit_prop,
    explain,
    ingest_csv,
    random_dataset,
    random_ranking,
    run_cli,
    worst_case,
)

__all__ = [
    "Audit",
    "Dataset",
    "RankAuditError",
    "Ranking",
    "audit_global",
    "audit_prop",
    "explain",
    "ingest_csv",
    "random_dataset",
    "random_ranking",
    "run_cli",
    "worst_case",
]
