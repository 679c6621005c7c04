"""Deterministic stylometry toolkit for line-structured verse corpora.

The heavy lifting lives in the compiled ``_core`` extension; this package
re-exports it and adds a ``main`` entry point for the command-line tool.
"""

import sys

from ._core import (
    Corpus,
    LinearFit,
    Method,
    OestyloError,
    PartRange,
    Poem,
    RngStream,
    SampleWindow,
    TestResult,
    VerseLine,
    Xoshiro256,
    bootstrap_null_p,
    chi2_gof,
    chi2_homogeneity,
    chi2_independence,
    chi_square_p,
    lexicon,
    metre,
    ngram,
    ols_fit,
    parse_corpus,
    partition_samples,
    pooled_t_test,
    rolling_windows,
    run_cli,
    sensepause,
    student_t_p,
    write_corpus,
)

__version__ = "0.1.0"


def main() -> int:
    """Console entry point: ``oestylo-py <args>`` behaves like ``oestylo``."""
    return run_cli(sys.argv[1:])
