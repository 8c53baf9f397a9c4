"""Causality analysis for the instantaneous subset of Esterel.

Programs are given a transition system specification with negative premises;
logical coherency is decided by counting supported models and
constructiveness by searching for supported proofs.
"""

from .formulas import (
    InputEvaluation,
    Formula,
    all_input_evaluations,
    consistent,
    contradicts,
    emits,
    render,
    term,
    trans,
)
from .grounding import (
    AnalysisContext,
    ResourceLimit,
    RuleInstance,
    Universe,
    ground_space,
    instances_concluding,
    residual_universe,
    supportable_space,
)
from .models import (
    Model,
    LogicalVerdict,
    classify_logical,
    enumerate_supported_models,
    is_supported_model,
)
from .proofs import (
    ConstructiveVerdict,
    ProofTree,
    PropertyViolation,
    Prover,
    check_theorems,
    classify_constructive,
    prove,
    render_proof,
)
from .syntax import (
    NIL,
    Emit,
    Local,
    Nil,
    Par,
    ParseError,
    Present,
    SemErr,
    Seq,
    SignalEnv,
    SignalId,
    fresh_signal,
    parse,
    pretty,
    substitute,
    subterms,
)


def load(source: str):
    """Parse ``source`` and build its analysis context."""
    prog, env = parse(source)
    return AnalysisContext(prog, env)


__version__ = "0.1.0"
