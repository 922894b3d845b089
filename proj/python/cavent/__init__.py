# Copyright 2026 The cavent Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Entanglement generated by moving a cavity, to second order in h."""

from ._cavent import (
    ConfigError,
    ContractViolation,
    DiagnosticError,
    PerturbativeRangeError,
    SweepResult,
    __version__,
    analyze,
    boson_junction,
    fermion_junction,
    preset_names,
    preset_text,
    run_checks,
    sweep,
)

__all__ = [
    "ConfigError",
    "ContractViolation",
    "DiagnosticError",
    "PerturbativeRangeError",
    "SweepResult",
    "__version__",
    "analyze",
    "boson_junction",
    "fermion_junction",
    "preset_names",
    "preset_text",
    "run_checks",
    "sweep",
]
