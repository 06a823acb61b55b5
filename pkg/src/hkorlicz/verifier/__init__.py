"""Theorem checks over a corpus, with structured reports."""

from .checks import (
    SUITES,
    NormCache,
    check_convergence_in_measure,
    check_dominance_equivalence,
    check_holder,
    check_hk_derivative,
    check_indicator_formula,
    check_l1_embedding,
    check_lp_consistency,
    check_triangle_weak,
    check_unit_modular,
    check_weak_le_strong,
    check_young_classification,
    run_suites,
)
from .corpus import Corpus, CorpusError, default_corpus, load_corpus
from .report import CheckRecord, VerifyReport, merge_reports

__all__ = [
    "SUITES",
    "NormCache",
    "Corpus",
    "CorpusError",
    "CheckRecord",
    "VerifyReport",
    "default_corpus",
    "load_corpus",
    "merge_reports",
    "run_suites",
    "check_weak_le_strong",
    "check_unit_modular",
    "check_indicator_formula",
    "check_holder",
    "check_triangle_weak",
    "check_dominance_equivalence",
    "check_l1_embedding",
    "check_convergence_in_measure",
    "check_hk_derivative",
    "check_lp_consistency",
    "check_young_classification",
]
