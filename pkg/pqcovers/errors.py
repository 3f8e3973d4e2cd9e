"""例外クラス定義"""


class PqCoverError(Exception):
    """パッケージ共通の基底例外"""

    def to_dict(self):
        """CLIのエラーレスポンス用の辞書"""
        return {'error': type(self).__name__, 'message': str(self)}


class UsageError(PqCoverError):
    """入力や探索範囲の誤り（終了コード1）"""


class FalsificationError(PqCoverError):
    """数学的主張が計算で否定された、または算術バグの検出（終了コード2）"""


class NoAction(PqCoverError):
    """指定のシグネチャでは作用が存在しない"""


# --- 入力エラー ---

class NotPrime(UsageError):
    pass


class EvenPrime(UsageError):
    pass


class DivisibilityFailure(UsageError):
    pass


class UnknownKind(UsageError):
    pass


class UnknownFamily(UsageError):
    pass


class MixedGroups(UsageError):
    pass


class GroupTooLarge(UsageError):
    pass


class SearchSpaceTooLarge(UsageError):
    pass


class IndexOutOfRange(UsageError):
    pass


class BadLambda(UsageError):
    pass


class BadMu(UsageError):
    pass


class SampleNearSingularity(UsageError):
    pass


# --- 反証センチネル ---

class NonIntegralGenus(FalsificationError):
    pass


class NonIntegralFixedDim(FalsificationError):
    pass


class NonIntegralDimension(FalsificationError):
    pass


class NormalFormNotFound(FalsificationError):
    pass


class RestrictionMismatch(FalsificationError):
    pass


class RelationInconsistency(FalsificationError):
    pass


class BadRoot(UsageError):
    pass


class InvalidSignature(UsageError):
    pass
