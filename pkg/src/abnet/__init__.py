"""Finite abelian networks: simulation, algebraic invariants and halting analysis."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    BudgetExceeded,
    Config,
    ExecRecord,
    Network,
    NetworkError,
    Processor,
    execute_counts,
    execute_word,
    local_action,
    run_to_completion,
    step,
    validate_abelian,
)
from .algebra import (  # noqa: E402
    homotopic,
    local_components,
    locally_recurrent,
    production_independence_check,
    production_matrix,
    strong_components,
    total_kernel,
)
from .builders import GraphSpec, build_rotor, build_sandpile, build_toppling, sandpilize  # noqa: E402
from .halting import (  # noqa: E402
    classic_criteria,
    find_amplifier,
    halt_on_input,
    halts_on_all_inputs,
    is_toppling_matrix,
    verify_strong_amplifier,
)
