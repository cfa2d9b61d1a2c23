"""A small EVM interpreter for a subset of opcodes."""
from .machine import (
    DEFAULT_SCHEDULE, INC_CONTRACT, INC_JUMPDEST_PC, INC_REVERT_PC, MAX_STACK, MAX_U256,
    Error, GasSchedule, Invalid, MachineState, Ok, Returns, Reverts, add_bytes, execute_n,
    expand, format_trace, gas_cost, init, step, trace_n,
)

__all__ = [
    "DEFAULT_SCHEDULE", "INC_CONTRACT", "INC_JUMPDEST_PC", "INC_REVERT_PC", "MAX_STACK",
    "MAX_U256", "Error", "GasSchedule", "Invalid", "MachineState", "Ok", "Returns", "Reverts",
    "add_bytes", "execute_n", "expand", "format_trace", "gas_cost", "init", "step", "trace_n",
]
