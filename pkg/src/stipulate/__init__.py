"""Co-simulate a Turing machine with a device that rewrites its input every T ticks."""

from .errors import (
    ConfigError,
    ConsistencyError,
    ContractViolation,
    DomainError,
    InputEncodingError,
    InvalidMachineError,
    MachineParseError,
    ScheduleError,
    StipulateError,
)
from .machine import (
    DEFAULT_BUDGET,
    INF,
    Configuration,
    MachineSpec,
    RunOutcome,
    RunResult,
    Status,
    run_time,
    tm_run,
    tm_step,
)
from .scanner import Program, ScannerMachine
from .stipulation import (
    CycleCertificate,
    StipulatedRunRecord,
    StipulationSchedule,
    conformance_violations,
    detect_cycle,
    next_input,
    replay_key,
    stip_run,
)
from .transform import (
    Case,
    Interval,
    NormalizedValue,
    ParamSubstitution,
    Region,
    TransformParams,
    TransformValue,
    classify_case,
    f_normalized,
    f_transform,
    inflection_threshold,
    substitute_params,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "ConsistencyError",
    "ContractViolation",
    "DomainError",
    "InputEncodingError",
    "InvalidMachineError",
    "MachineParseError",
    "ScheduleError",
    "StipulateError",
    "DEFAULT_BUDGET",
    "INF",
    "Configuration",
    "MachineSpec",
    "RunOutcome",
    "RunResult",
    "Status",
    "run_time",
    "tm_run",
    "tm_step",
    "Program",
    "ScannerMachine",
    "CycleCertificate",
    "StipulatedRunRecord",
    "StipulationSchedule",
    "conformance_violations",
    "detect_cycle",
    "next_input",
    "replay_key",
    "stip_run",
    "Case",
    "Interval",
    "NormalizedValue",
    "ParamSubstitution",
    "Region",
    "TransformParams",
    "TransformValue",
    "classify_case",
    "f_normalized",
    "f_transform",
    "inflection_threshold",
    "substitute_params",
]
