"""Exact adversary-bound workbench for small Boolean functions.

Truth-table functions, exact complexity measures, weighted adversary
schemes with radical-exact arithmetic, a product construction for
iterated functions, matching-based counting bounds, and a small
quantum query simulator that validates the progress-measure
inequalities empirically.
"""

from .adversary import (
    ExplicitScheme,
    LoadReport,
    RelationBound,
    ScaledScheme,
    SchemeError,
    Violation,
    balance,
    builtin_scheme,
    load_scheme,
    loads,
    relation_bound,
    save_scheme,
    sensitive_partition,
    unit_scheme,
    verify,
)
from .boolfn import (
    ArityError,
    Assignment,
    BooleanFunction,
    TableFormatError,
    and_n,
    builtin,
    compose as compose_tables,
    evaluate,
    f4,
    flip_block,
    h6,
    iterate,
    load_table,
    nae3,
    or_n,
    parity,
    parse_table,
    save_table,
    var_bit,
)
from .compose import (
    ComposedScheme,
    block_index,
    check_claim1,
    check_claim2,
    check_corollary,
    compose_scheme,
    predicted_bound,
)
from .matchings import (
    MatchingCheck,
    MatchingError,
    MatchingSet,
    build_matchings,
    check_matchings,
    export_matchings,
)
from .measures import (
    CapExceeded,
    ComplexityReport,
    MultilinearPolynomial,
    approx_degree,
    approx_polynomial,
    block_sensitivity,
    certificate_complexity,
    compute_report,
    degree,
    det_complexity,
    exact_polynomial,
    iterated_certificates,
    sensitivity,
)
from .qsim import (
    ProgressTrace,
    QsimError,
    QueryAlgorithm,
    check_drop_bound,
    check_final_bound,
    identity_algorithm,
    load_algorithm,
    parity2_algorithm,
    progress_trace,
    query_lower_bound,
    random_algorithm,
    run,
    save_algorithm,
)
from .weights import ExactWeight, MixedRadicandError, exact_sum

__version__ = "0.1.0"

__all__ = [
    "ArityError",
    "Assignment",
    "BooleanFunction",
    "CapExceeded",
    "ComplexityReport",
    "ComposedScheme",
    "ExactWeight",
    "ExplicitScheme",
    "LoadReport",
    "MatchingCheck",
    "MatchingError",
    "MatchingSet",
    "MixedRadicandError",
    "MultilinearPolynomial",
    "ProgressTrace",
    "QsimError",
    "QueryAlgorithm",
    "RelationBound",
    "ScaledScheme",
    "SchemeError",
    "TableFormatError",
    "Violation",
    "and_n",
    "approx_degree",
    "approx_polynomial",
    "balance",
    "block_index",
    "block_sensitivity",
    "build_matchings",
    "builtin",
    "builtin_scheme",
    "certificate_complexity",
    "check_claim1",
    "check_claim2",
    "check_corollary",
    "check_drop_bound",
    "check_final_bound",
    "check_matchings",
    "compose_scheme",
    "compose_tables",
    "compute_report",
    "degree",
    "det_complexity",
    "evaluate",
    "exact_polynomial",
    "exact_sum",
    "export_matchings",
    "f4",
    "flip_block",
    "h6",
    "identity_algorithm",
    "iterate",
    "iterated_certificates",
    "load_algorithm",
    "load_scheme",
    "load_table",
    "loads",
    "nae3",
    "or_n",
    "parity",
    "parity2_algorithm",
    "parse_table",
    "predicted_bound",
    "progress_trace",
    "query_lower_bound",
    "random_algorithm",
    "relation_bound",
    "run",
    "save_algorithm",
    "save_scheme",
    "save_table",
    "sensitive_partition",
    "sensitivity",
    "unit_scheme",
    "var_bit",
    "verify",
]
