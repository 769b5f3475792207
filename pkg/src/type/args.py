from dataclasses import dataclass
from typing import Optional

from src.const import (
    DEFAULT_DIGITS,
    DEFAULT_FORMAT,
    DEFAULT_GUARD,
    DEFAULT_LOG_LEVEL,
    DEFAULT_MAX_TERMS,
    DEFAULT_ORDER,
    DEFAULT_THREADS,
)

# ==================================================================
# Run configuration
# ==================================================================

@dataclass(frozen=True)
class RunConfig:
    digits: int = DEFAULT_DIGITS
    guard: int = DEFAULT_GUARD
    max_terms: int = DEFAULT_MAX_TERMS
    order: int = DEFAULT_ORDER
    threads: int = DEFAULT_THREADS
    format: str = DEFAULT_FORMAT
    log_level: str = DEFAULT_LOG_LEVEL
    suite: Optional[str] = None

    def precision(self):
        from src.ball import PrecisionCtx
        return PrecisionCtx(digits=self.digits, guard=self.guard, max_terms=self.max_terms)


# ==================================================================
# Command argument dataclasses (one per CLI leaf command)
# ==================================================================

@dataclass
class SeriesArgs:
    name: str
    order: Optional[int] = None


@dataclass
class FaberArgs:
    n: int
    order: Optional[int] = None


@dataclass
class HeckeTnArgs:
    name: str
    n: int
    weight: int = 0
    order: Optional[int] = None


@dataclass
class HeckeMultArgs:
    name: str
    p: int
    order: Optional[int] = None


@dataclass
class HeckeHalfArgs:
    d: int
    p: int
    order: Optional[int] = None


@dataclass
class LiftDivisorArgs:
    name: str
    order: Optional[int] = None


@dataclass
class LiftAknArgs:
    order: Optional[int] = None


@dataclass
class LiftCheckArgs:
    name: str
    p: int
    order: Optional[int] = None


@dataclass
class QfListArgs:
    D: int


@dataclass
class QfChiArgs:
    delta: int
    a: int
    b: int
    c: int


@dataclass
class LvArgs:
    D: int


@dataclass
class EvalArgs:
    name: str
    tau: str
    n: Optional[int] = None


@dataclass
class TraceArgs:
    delta: int
    d: int
    f: str = "frakf"
    n: Optional[int] = None


@dataclass
class TraceRelationArgs:
    delta: int
    d: int
    p: int
    m: int = 1
    n: int = 0
    f: str = "frakf"


@dataclass
class BasisArgs:
    d: int
    order: Optional[int] = None


@dataclass
class ProductArgs:
    delta: int
    d: int
    order: Optional[int] = None
    mode: str = "exact"


@dataclass
class BzCheckArgs:
    kind: str
    delta: int
    d: int
    p: Optional[int] = None
    tau: Optional[str] = None
    order: Optional[int] = None


@dataclass
class VerifyArgs:
    suite: str


COMMAND_ARG_CLASSES = {
    "series": SeriesArgs,
    "faber": FaberArgs,
    "hecke tn": HeckeTnArgs,
    "hecke mult": HeckeMultArgs,
    "hecke half": HeckeHalfArgs,
    "lift divisor": LiftDivisorArgs,
    "lift akn": LiftAknArgs,
    "lift check-equivariance": LiftCheckArgs,
    "qf list": QfListArgs,
    "qf chi": QfChiArgs,
    "lv L1": LvArgs,
    "lv unit": LvArgs,
    "lv reg": LvArgs,
    "eval": EvalArgs,
    "trace value": TraceArgs,
    "trace relation": TraceRelationArgs,
    "trace klf": TraceArgs,
    "bz basis": BasisArgs,
    "bz product": ProductArgs,
    "bz check": BzCheckArgs,
    "verify": VerifyArgs,
}
