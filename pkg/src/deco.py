# 💠 데이터클래스 값 로깅을 위한 데코레이터
import dataclasses
import logging
from functools import wraps

logger = logging.getLogger("modtrace.records")


def log_dataclass_values(cls):
    """데이터클래스의 __init__을 감싸서 인스턴스 생성 시 값을 DEBUG 로 남기는 데코레이터"""

    # @dataclasses.dataclass가 생성한 __init__ 메서드를 가져옴
    original_init = cls.__init__

    @wraps(original_init)
    def wrapper_init(self, *args, **kwargs):
        original_init(self, *args, **kwargs)
        # 큰 details 를 매번 직렬화하지 않도록 레벨부터 확인
        if logger.isEnabledFor(logging.DEBUG):
            logger.debug(f"📋 {cls.__name__}: {dataclasses.asdict(self)}")

    cls.__init__ = wrapper_init
    return cls
