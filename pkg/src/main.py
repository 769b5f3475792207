#!/usr/bin/env python3
"""
modtrace report service
Supports:
- Named verification suites streamed check by check (SSE)
- Exact q-expansions of the standard series
- Same error objects as the CLI (HTTP 422)
- Served by uvicorn (run.sh)
"""
import logging
import os
import sys

from fastapi import FastAPI
from fastapi.responses import JSONResponse, StreamingResponse

from src.const import DEFAULT_HOST, DEFAULT_PORT, ENV_PREFIX, SUPPORTED_SERIES, SUPPORTED_SUITES
from src.errors import ModtraceError, UnknownName
from src.hecke import named_form
from src.series import standard_series
from src.suites import assemble_report, collect_checks, provenance_for, run_checks
from src.type.report import CheckEvent, Error, ErrorMessage, Event, SuiteDone, SuiteStart
from src.type.request import VerifyRequest
from src.util import load_config, read_config_file, setup_logging, to_sse

# Ensure stdout/stderr can handle Unicode output (e.g. emojis) on Windows
for stream in (sys.stdout, sys.stderr):
    try:
        stream.reconfigure(encoding="utf-8")
    except Exception:
        pass

logger = logging.getLogger(__name__)

app = FastAPI(title="modtrace")

# -----------------------------
# 1. 설정 로드
# -----------------------------
CONFIG = load_config()
setup_logging(CONFIG.log_level)
_file_config = read_config_file()
HOST = os.getenv(f"{ENV_PREFIX}HOST", _file_config.get("host", DEFAULT_HOST))
PORT = int(os.getenv(f"{ENV_PREFIX}PORT", _file_config.get("port", DEFAULT_PORT)))

logger.info("🔧 modtrace configuration:")
logger.info(f"   DIGITS: {CONFIG.digits} (+{CONFIG.guard} guard)")
logger.info(f"   ORDER: {CONFIG.order}, THREADS: {CONFIG.threads}")
logger.info(f"   HOST: {HOST}:{PORT}")


@app.exception_handler(ModtraceError)
async def modtrace_error_handler(request, exc: ModtraceError):
    logger.error(f"❌ {request.url.path}: {exc.code}: {exc.message}")
    return JSONResponse(status_code=422, content=exc.to_dict())


@app.get("/health")
async def health():
    return {"status": "ok", "service": "modtrace", "digits": CONFIG.digits}


@app.get("/")
async def root():
    return {
        "service": "modtrace",
        "status": "running",
        "endpoints": {
            "/verify": "Run a verification suite (SSE)",
            "/suites": "List suites",
            "/series/{name}": "Exact q-expansion",
            "/health": "Health check",
        },
        "config": {"digits": CONFIG.digits, "guard": CONFIG.guard, "order": CONFIG.order, "threads": CONFIG.threads},
    }


@app.get("/suites")
async def suites():
    return {"suites": list(SUPPORTED_SUITES) + ["all"]}


@app.post("/series/{name}")
async def series(name: str, order: int = CONFIG.order):
    if name == "E4E6":
        return named_form(name, order).series.to_dict()
    if name not in SUPPORTED_SERIES:
        raise UnknownName(f"unknown series name: {name}", supported=sorted(SUPPORTED_SERIES | {"E4E6"}))
    return standard_series(name, order).to_dict()


def stream_suite(suite: str, config, checks, methods):
    """suite_start → check_result × N → suite_done"""
    try:
        yield to_sse(event=Event.suite_start.value, data=SuiteStart(suite=suite, provenance=provenance_for(config, methods)))
        results = []
        for index, result in enumerate(run_checks(checks, config.threads)):
            results.append(result)
            logger.debug(f"📤 {suite}[{index}] {result.name}: {'PASS' if result.passed else 'FAIL'}")
            yield to_sse(event=Event.check_result.value, data=CheckEvent(index=index, check=result))
        report = assemble_report(suite, config, methods, results)
        yield to_sse(event=Event.suite_done.value, data=SuiteDone(suite=suite, passed=report.passed, digest=report.digest))
    except ModtraceError as e:
        logger.error(f"❌ {suite}: {e.code}: {e.message}")
        yield to_sse(event=Event.error.value, data=Error(error=ErrorMessage(code=e.code, message=e.message)))


@app.post("/verify")
async def verify(body: VerifyRequest):
    config = load_config({"suite": body.suite, "digits": body.digits, "order": body.order})
    # 알 수 없는 suite 는 스트림을 열기 전에 422 로 돌려준다
    checks, methods = collect_checks(body.suite, config)
    logger.info(f"🧮 /verify {body.suite}: {len(checks)} checks")
    return StreamingResponse(
        stream_suite(body.suite, config, checks, methods),
        media_type="text/event-stream",
        headers={"Cache-Control": "no-cache", "Connection": "keep-alive", "Access-Control-Allow-Origin": "*"}
    )


if __name__ == "__main__":
    import uvicorn
    print(f"🚀 Starting modtrace on {HOST}:{PORT}")
    uvicorn.run(app, host=HOST, port=PORT)
