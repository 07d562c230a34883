"""
错误类型 - framelab 各模块抛出的异常
参数校验类错误同时继承 ValueError
"""


class FramelabError(Exception):
    """framelab 异常基类"""


class NotPrimePowerError(FramelabError, ValueError):
    pass


class UnsupportedSizeError(FramelabError, ValueError):
    pass


class FieldDivisionByZero(FramelabError, ZeroDivisionError):
    pass


class DimensionMismatchError(FramelabError, ValueError):
    pass


class InvalidRadicalDimError(FramelabError, ValueError):
    pass


class InstanceTooLargeError(FramelabError):
    """实例超出配置的规模上限（CLI 退出码 3）"""


class ClassNotConstantError(FramelabError):
    """同一位置类中的行走计数不相同"""


class UndefinedClassError(FramelabError, ValueError):
    pass


class NotCollapsibleError(FramelabError):
    """待坍缩的面不是自由面"""


class PrimeCollisionError(FramelabError):
    """两个模素数秩不一致且无法升级到精确消元"""


class LinkDisconnectedError(FramelabError, ValueError):
    """Garland 条件 (G1) 不成立"""


class NotAChainError(FramelabError, ValueError):
    pass


class DegenerateMemberError(FramelabError, ValueError):
    pass
