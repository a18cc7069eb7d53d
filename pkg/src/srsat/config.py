"""Enumeration guards and tolerances.

Precedence is explicit argument > environment variable > default. Guards are
expressed as log2 of the number of objects an operation may enumerate.
"""

import os

DEFAULT_FIELD_GUARD_LOG2 = 20      # q^m for table construction
DEFAULT_ENUM_GUARD_LOG2 = 24       # q^{mN}, q^{mk} enumerations
DEFAULT_EQUIV_GUARD_LOG2 = 18      # q^{m k^2} for brute-force equivalence
DEFAULT_FQ_TOL = 1e-12

ENUM_ENV = "SRC_GUARD_LOG2"
FIELD_ENV = "SRC_FIELD_GUARD_LOG2"
FQ_TOL_ENV = "SRC_FQ_TOL"


def _env_number(name, default, cast):
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    return cast(raw)


def enum_guard_log2(value=None):
    if value is not None:
        return float(value)
    return _env_number(ENUM_ENV, DEFAULT_ENUM_GUARD_LOG2, float)


def field_guard_log2(value=None):
    if value is not None:
        return float(value)
    return _env_number(FIELD_ENV, DEFAULT_FIELD_GUARD_LOG2, float)


def equiv_guard_log2(value=None):
    if value is not None:
        return float(value)
    return DEFAULT_EQUIV_GUARD_LOG2


def fq_tolerance(value=None):
    if value is not None:
        return float(value)
    return _env_number(FQ_TOL_ENV, DEFAULT_FQ_TOL, float)
