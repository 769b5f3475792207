import sys
from pathlib import Path

import pytest

# src.* 임포트를 위해 저장소 루트를 경로에 추가
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from src.ball import PrecisionCtx  # noqa: E402


@pytest.fixture(scope="session")
def ctx():
    return PrecisionCtx(digits=50)


@pytest.fixture(scope="session")
def ctx80():
    return PrecisionCtx(digits=80)
