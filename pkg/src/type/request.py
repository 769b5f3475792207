"""
리포트 서비스 요청 본문 (pydantic)
"""
from typing import Optional

from pydantic import BaseModel, Field


class VerifyRequest(BaseModel):
    suite: str = Field(..., description="suite name or 'all'")
    digits: Optional[int] = Field(None, ge=20)
    order: Optional[int] = Field(None, ge=1)
