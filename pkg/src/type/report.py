from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

from src.const import REPORT_SCHEMA_VERSION
from src.deco import log_dataclass_values

# Verification report stream dataclasses

class Event(Enum):
    suite_start = "suite_start"
    check_result = "check_result"
    suite_done = "suite_done"
    error = "error"
    ping = "ping"


@log_dataclass_values
@dataclass
class CheckResult:
    name: str
    anchor: str
    passed: bool
    residual: str = "0"
    details: Dict[str, Any] = field(default_factory=dict)


@dataclass
class Provenance:
    digits: int = 0
    guard: int = 0
    order: int = 0
    methods: List[str] = field(default_factory=list)


@dataclass
class SuiteReport:
    suite: str
    passed: bool = True
    checks: List[CheckResult] = field(default_factory=list)
    provenance: Provenance = field(default_factory=Provenance)
    schema_version: str = REPORT_SCHEMA_VERSION
    digest: str = ""


@dataclass
class SuiteStart:
    type: str = Event.suite_start.value
    suite: str = ""
    provenance: Provenance = field(default_factory=Provenance)


@dataclass
class CheckEvent:
    type: str = Event.check_result.value
    index: int = 0
    check: Optional[CheckResult] = None


@dataclass
class SuiteDone:
    type: str = Event.suite_done.value
    suite: str = ""
    passed: bool = True
    digest: str = ""


@dataclass
class ErrorMessage:
    type: str = "error"
    code: str = ""
    message: str = ""


@dataclass
class Error:
    type: str = Event.error.value
    error: ErrorMessage = field(default_factory=ErrorMessage)
