from .corpus import CorpusEntry, builtin_corpus, load_corpus
from .verify import (
    VerificationReport,
    analyze,
    run_suite,
    verify_corollary_C,
    verify_frobenius,
    verify_generation,
    verify_kizmaz,
    verify_theorem_A,
    verify_theorem_B,
)

__all__ = [
    "CorpusEntry",
    "VerificationReport",
    "analyze",
    "builtin_corpus",
    "load_corpus",
    "run_suite",
    "verify_corollary_C",
    "verify_frobenius",
    "verify_generation",
    "verify_kizmaz",
    "verify_theorem_A",
    "verify_theorem_B",
]
