"""Averaging of fast-oscillating Euler equations on Lie algebras."""

from ._lieavg import (
    ConfigError,
    EvalError,
    Expression,
    LieAlgebra,
    ParseError,
    SweepRecord,
    averaged_rhs,
    averaging_cocycle,
    bracket,
    builtin_algebra,
    cl_integrate,
    coadjoint,
    drift_vector,
    euler_rhs,
    extended_euler_rhs,
    integrate_euler,
    pairing,
    parse_algebra,
    run_command,
    shifted_averaged_rhs,
    sweep,
)

__all__ = [
    "ConfigError",
    "EvalError",
    "Expression",
    "LieAlgebra",
    "ParseError",
    "SweepRecord",
    "averaged_rhs",
    "averaging_cocycle",
    "bracket",
    "builtin_algebra",
    "cl_integrate",
    "coadjoint",
    "drift_vector",
    "euler_rhs",
    "extended_euler_rhs",
    "integrate_euler",
    "pairing",
    "parse_algebra",
    "run_command",
    "shifted_averaged_rhs",
    "sweep",
]
