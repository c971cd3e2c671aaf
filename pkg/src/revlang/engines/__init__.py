from .config import (  # noqa: F401
    ANNOTATED, BudgetExceeded, Configuration, EngineError, PLAIN, REVERSE,
    RedexId, StepCtx, StuckError, TransitionRecord,
)
from .exprs import eval_arith, eval_bool  # noqa: F401
from .redex import M_RULES, REVERSE_M_RULES, enabled_redexes  # noqa: F401
from .run import (  # noqa: F401
    DEFAULT_BUDGET, RunResult, annotated_configuration, bundle_from_run,
    executed_program, load_bundle, plain_configuration, reverse_configuration,
    reverse_configuration_from_bundle, run_to_completion, save_bundle, step,
    table_from_json, table_to_json,
)
from .step_annotated import step_annotated  # noqa: F401
from .step_forward import step_forward  # noqa: F401
from .step_reverse import step_reverse  # noqa: F401
