"""Seasonal West Nile virus nonlocal free-boundary model."""

from ._wnv import (
    ConfigError,
    Error,
    IoError,
    Kernel,
    KernelError,
    KernelMismatchError,
    ModelParams,
    NumericalError,
    ParamError,
    StepSizeError,
    basic_reproduction_number,
    classify,
    commands,
    lambda1_F,
    lambda1_O,
    lambda1_O_oracle,
    lambda1_P,
    lambda1_star,
    ode_periodic,
    parse_config_echo,
    periodic,
    positivity_dt_bound,
    run_command,
    simulate,
)

__all__ = [
    "ConfigError",
    "Error",
    "IoError",
    "Kernel",
    "KernelError",
    "KernelMismatchError",
    "ModelParams",
    "NumericalError",
    "ParamError",
    "StepSizeError",
    "basic_reproduction_number",
    "classify",
    "commands",
    "lambda1_F",
    "lambda1_O",
    "lambda1_O_oracle",
    "lambda1_P",
    "lambda1_star",
    "ode_periodic",
    "parse_config_echo",
    "periodic",
    "positivity_dt_bound",
    "run_command",
    "simulate",
]
