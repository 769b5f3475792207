import csv
import dataclasses
import hashlib
import io
import json
import logging
import os
import sys
from dataclasses import asdict, fields
from fractions import Fraction
from pathlib import Path
from typing import Optional

import yaml

from src.const import (
    DEFAULT_DIGITS,
    DEFAULT_FORMAT,
    DEFAULT_GUARD,
    DEFAULT_LOG_LEVEL,
    DEFAULT_MAX_TERMS,
    DEFAULT_ORDER,
    DEFAULT_THREADS,
    ENV_PREFIX,
)
from src.type.args import COMMAND_ARG_CLASSES, RunConfig
from src.type.report import SuiteReport

logger = logging.getLogger(__name__)

CONFIG_PATH = Path(__file__).with_name("config.yaml")

_RUN_DEFAULTS = {
    "digits": DEFAULT_DIGITS,
    "guard": DEFAULT_GUARD,
    "max_terms": DEFAULT_MAX_TERMS,
    "order": DEFAULT_ORDER,
    "threads": DEFAULT_THREADS,
    "format": DEFAULT_FORMAT,
    "log_level": DEFAULT_LOG_LEVEL,
}


# -----------------------------
# 1. 설정 로드
# -----------------------------
def read_config_file(path: Path = CONFIG_PATH) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return yaml.safe_load(f) or {}
    except FileNotFoundError:
        return {}


def load_config(overrides: Optional[dict] = None, path: Path = CONFIG_PATH) -> RunConfig:
    """환경변수 MODTRACE_<KEY> > config.yaml > const 기본값, CLI 인자는 그 위에 덮어쓴다"""
    file_config = read_config_file(path)
    values = {}
    for key, default in _RUN_DEFAULTS.items():
        raw = os.getenv(f"{ENV_PREFIX}{key.upper()}", file_config.get(key, default))
        values[key] = type(default)(raw)
    for key, value in (overrides or {}).items():
        if value is not None and (key in values or key == "suite"):
            values[key] = value
    config = RunConfig(**values)
    logger.debug(f"🔧 run config: {asdict(config)}")
    return config


def setup_logging(level: str = DEFAULT_LOG_LEVEL):
    """로그는 stderr 로만 (stdout 은 리포트 전용)"""
    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, "_modtrace", False):
            root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    handler._modtrace = True
    root.addHandler(handler)
    root.setLevel(level.upper())


# -----------------------------
# 2. 직렬화
# -----------------------------
def to_jsonable(obj):
    """to_dict / dataclass / Fraction 을 JSON 기본형으로"""
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    return str(obj)


def canonical_json(obj) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def to_sse(event: str, data: object) -> str:
    """dataclass → JSON → SSE 문자열 변환"""
    return f"event: {event}\n" + f"data: {json.dumps(to_jsonable(data), ensure_ascii=False)}\n\n"


def report_digest(report: SuiteReport) -> str:
    """digest 필드를 비운 리포트 본문의 SHA-256"""
    body = to_jsonable(report)
    body["digest"] = ""
    return hashlib.sha256(canonical_json(body).encode("utf-8")).hexdigest()


# -----------------------------
# 3. 출력 형식
# -----------------------------
def _flatten(prefix: str, value, out: dict):
    if isinstance(value, dict):
        for k in sorted(value):
            _flatten(f"{prefix}.{k}" if prefix else str(k), value[k], out)
    elif isinstance(value, list) and value and all(not isinstance(v, (dict, list)) for v in value):
        out[prefix] = " ".join(str(v) for v in value)
    elif isinstance(value, list):
        for i, v in enumerate(value):
            _flatten(f"{prefix}[{i}]", v, out)
    else:
        out[prefix] = value


def _check_rows(body: dict):
    return [
        {"name": c["name"], "passed": c["passed"], "residual": c["residual"], "anchor": c["anchor"]}
        for c in body["checks"]
    ]


def format_output(data, fmt: str = DEFAULT_FORMAT) -> str:
    body = to_jsonable(data)
    if fmt == "json":
        return json.dumps(body, sort_keys=True, ensure_ascii=False, indent=2)
    is_report = isinstance(body, dict) and "checks" in body
    if fmt == "csv":
        buffer = io.StringIO()
        if is_report:
            writer = csv.DictWriter(buffer, fieldnames=["name", "passed", "residual", "anchor"], lineterminator="\n")
            writer.writeheader()
            writer.writerows(_check_rows(body))
        else:
            flat = {}
            _flatten("", body, flat)
            writer = csv.writer(buffer, lineterminator="\n")
            writer.writerow(["key", "value"])
            for k, v in flat.items():
                writer.writerow([k, v])
        return buffer.getvalue().rstrip("\n")
    if fmt == "text":
        if is_report:
            rows = _check_rows(body)
            width = max([len(r["name"]) for r in rows] + [5])
            lines = [f"suite {body['suite']}: {'PASS' if body['passed'] else 'FAIL'}"]
            for r in rows:
                lines.append(f"  {r['name']:<{width}}  {'PASS' if r['passed'] else 'FAIL'}  {r['residual']}")
            return "\n".join(lines)
        flat = {}
        _flatten("", body, flat)
        width = max([len(k) for k in flat] + [1])
        return "\n".join(f"{k:<{width}}  {v}" for k, v in flat.items())
    raise ValueError(f"unknown format: {fmt}")


# -----------------------------
# 4. 인자 매핑
# -----------------------------
def map_args_to_command(command: str, args: dict):
    """
    Maps a dictionary of arguments to the corresponding command's dataclass instance.

    Unknown keys are dropped with a warning; a missing required argument returns None.
    """
    arg_class = COMMAND_ARG_CLASSES.get(command)
    if not arg_class:
        logger.warning(f"⚠️  No dataclass mapping found for command: {command}")
        return None

    expected_args = {field.name for field in fields(arg_class)}
    filtered_args = {k: v for k, v in args.items() if k in expected_args}

    ignored_keys = set(args.keys()) - expected_args
    if ignored_keys:
        logger.debug(f"⚠️  Ignoring unexpected arguments for {command}: {sorted(ignored_keys)}")

    try:
        instance = arg_class(**filtered_args)
        logger.debug(f"✨ Mapped arguments to {arg_class.__name__}")
        return instance
    except TypeError as e:
        logger.error(f"❌ TypeError when instantiating {arg_class.__name__}: {e}")
        return None
