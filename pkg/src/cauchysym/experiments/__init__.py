from .reports import (SAMPLE_COLUMNS, Assertion, RatioSearchReport, SuiteReport, fmt, sample_rows,
                      write_csv)
from .sampling import MODES, Sample, TripleSampler
from .search import OBJECTIVES, default_region, extremal_ratio, objective_values
from .suites import ALL_SUITES, SUITES, default_sampler, registry_self_test, run_all, run_suite

__all__ = [
    "ALL_SUITES", "Assertion", "MODES", "OBJECTIVES", "RatioSearchReport", "SAMPLE_COLUMNS",
    "SUITES", "Sample", "SuiteReport", "TripleSampler", "default_region", "default_sampler",
    "extremal_ratio", "fmt", "objective_values", "registry_self_test", "run_all", "run_suite",
    "sample_rows", "write_csv",
]
