"""Hardy-type nonlocality toolkit."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .clauses import HardyCertificate
from .errors import HardyLabError
from .hardy import (
    HARDY_MAX,
    CanonicalHardyFamily,
    canonical_observables,
    canonical_state,
    clifton_niemann_witness,
    hardy_probability_formula,
    hardy_witness,
    maximize_hardy,
    minimal_form_witness,
    optimal_selftest_point,
    spin_operator,
    unique_hardy_state,
)
from .multiparty import TripartiteCertificate, maximize_tripartite_hardy, tripartite_witness
from .polytope import (
    adversarial_min_entropy,
    ch_value,
    enumerate_deterministic,
    gnlt_max_hardy,
    is_local,
    is_no_signalling,
    is_predictable,
    min_entropy,
)
from .quantum import Behavior, Observable, PureState, Scenario, born_behavior, sample_behavior
from .temporal import TemporalScenario, maximize_temporal_hardy, sequential_behavior, temporal_hardy_witness
