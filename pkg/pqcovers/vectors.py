"""
生成ベクトル（種数0のFuchs群から G_{p,q} への surface-kernel epimorphism）
"""

import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .config import Config
from .errors import NoAction, SearchSpaceTooLarge
from .groups import PQGroup, elements_of_order, generates, make_group
from .signatures import FamilyParams, Signature

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GeneratingVector:
    group: PQGroup = field(compare=False, repr=False)
    x: tuple
    y: tuple = ()

    @property
    def entries(self):
        return tuple(self.x) + tuple(self.y)

    @property
    def family(self):
        return FamilyParams(self.group.p, self.group.q, len(self.x), len(self.y))

    def coords(self):
        return [self.group.coords(e) for e in self.entries]

    def to_dict(self):
        G = self.group
        return {
            'p': G.p,
            'q': G.q,
            'x': [list(G.coords(e)) for e in self.x],
            'y': [list(G.coords(e)) for e in self.y],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data, group=None):
        group = group or make_group(data['p'], data['q'])
        x = tuple(group.index(l, n) for l, n in data['x'])
        y = tuple(group.index(l, n) for l, n in data.get('y', []))
        return cls(group, x, y)

    @classmethod
    def from_coords(cls, group, x, y=()):
        """(l, n) の組の列から構成"""
        return cls(group, tuple(group.index(l, n) for l, n in x),
                   tuple(group.index(l, n) for l, n in y))

    def __str__(self):
        G = self.group
        xs = ", ".join(G.describe(e) for e in self.x)
        ys = ", ".join(G.describe(e) for e in self.y)
        return f"x=({xs}) y=({ys})"


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    @property
    def first(self):
        return self.violations[0] if self.violations else None

    def to_dict(self):
        return {'ok': self.ok, 'violations': self.violations}


@dataclass(frozen=True)
class Existence:
    exists: bool
    reason: str = ""


def validate(v):
    """位数・積が単位元・全射性の検査（違反をすべて報告）"""
    G = v.group
    report = ValidationReport()
    for i, e in enumerate(v.x):
        if G.order_of(e) != G.p:
            report.violations.append({'kind': 'WrongOrder', 'index': i + 1})
    for j, e in enumerate(v.y):
        if G.order_of(e) != G.q:
            report.violations.append({'kind': 'WrongOrder', 'index': len(v.x) + j + 1})
    if G.product(v.entries) != 0:
        report.violations.append({'kind': 'ProductNotIdentity'})
    if not generates(G, v.entries):
        report.violations.append({'kind': 'NotSurjective'})
    if len(v.entries) < 3:
        report.violations.append({'kind': 'Underdetermined'})
    return report


def realized_signature(v):
    """実際の元の位数から得られるシグネチャ"""
    return Signature(0, tuple(v.group.order_of(e) for e in v.entries))


def exists(fp):
    if fp.n >= 2:
        return Existence(True)
    if fp.n == 1:
        # x_1 の像は b を含み、y の積は <a> に入る
        return Existence(False, "product cannot be identity")
    return Existence(False, "b not in image")


# --- 標準的な構成 ---

def _pairs(u, v, count):
    return [u, v] * count


def canonical(fp, group=None):
    """(n, m) の偶奇に応じた具体的な生成ベクトル"""
    if fp.n < 2:
        raise NoAction(f"No action with signature {fp.signature}: {exists(fp).reason}")
    G = group or make_group(fp.p, fp.q)
    a, b = G.labels['a'], G.labels['b']
    ai, bi = G.inv(a), G.inv(b)
    ab = G.mul(a, b)
    a2, b2 = G.mul(a, a), G.mul(b, b)
    n, m = fp.n, fp.m

    if m == 0:
        if n == 3:
            x = [ab, b, G.inv(G.mul(a, b2))]
        elif n % 2 == 0:
            x = _pairs(b, bi, n // 2 - 1) + [ab, G.inv(ab)]
        else:
            x = _pairs(b, bi, (n - 5) // 2) + [ab, G.inv(ab), b2, bi, bi]
        y = []
    elif m == 1:
        if n % 2 == 0:
            x = _pairs(b, bi, n // 2 - 1) + [b, G.inv(ab)]
        else:
            x = _pairs(b, bi, (n - 3) // 2) + [b2, bi, G.inv(ab)]
        y = [a]
    else:
        if n % 2 == 0:
            x = _pairs(b, bi, n // 2)
        else:
            x = _pairs(b, bi, (n - 3) // 2) + [b2, bi, bi]
        if m % 2 == 0:
            y = _pairs(a, ai, m // 2)
        else:
            y = _pairs(a, ai, (m - 3) // 2) + [a2, ai, ai]

    v = GeneratingVector(G, tuple(x), tuple(y))
    logger.debug(f"Canonical vector for {fp.label}: {v}")
    return v


# --- 全列挙 ---

def search_space(G, periods):
    """最後の成分を除いた候補の組の数"""
    counts = [len(elements_of_order(G, k)) for k in periods[:-1]]
    return math.prod(counts)


def search_tuples(G, periods, bound=None, first_choices=None):
    """
    位数 periods の元の組で積が単位元かつ G を生成するものをすべて列挙

    最後の成分は積の条件から決める。出力は添字の辞書式順。
    """
    bound = Config.SEARCH_BOUND if bound is None else bound
    periods = list(periods)
    if not periods:
        return []
    size = search_space(G, periods)
    if size > bound:
        raise SearchSpaceTooLarge(
            f"{size} candidate prefixes for periods {periods} exceed the bound {bound}")

    candidates = [elements_of_order(G, k) for k in periods[:-1]]
    if first_choices is not None and candidates:
        allowed = set(first_choices)
        candidates[0] = [x for x in candidates[0] if x in allowed]
    last = periods[-1]
    depth = len(candidates)
    results = []
    prefix = [0] * depth

    def extend(i, running):
        if i == depth:
            z = G.inv(running)
            if G.order_of(z) != last:
                return
            entries = prefix + [z]
            if generates(G, entries):
                results.append(tuple(entries))
            return
        for x in candidates[i]:
            prefix[i] = x
            extend(i + 1, G.mul(running, x))

    extend(0, 0)
    return results


def _search_partition(p, q, r, n, m, bound, first_choices):
    G = make_group(p, q, r)
    return search_tuples(G, [p] * n + [q] * m, bound, first_choices)


def enumerate_vectors(fp, group=None, bound=None, workers=1):
    """シグネチャ s_{n,m} の生成ベクトルの全列挙（最初の成分で分割して並列化可能）"""
    G = group or make_group(fp.p, fp.q)
    periods = [fp.p] * fp.n + [fp.q] * fp.m
    if workers > 1 and len(periods) > 1:
        first = elements_of_order(G, periods[0])
        chunks = [first[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as executor:
            parts = executor.map(
                _search_partition,
                *zip(*[(fp.p, fp.q, G.r, fp.n, fp.m, bound, chunk) for chunk in chunks]))
            tuples = sorted(t for part in parts for t in part)
    else:
        tuples = search_tuples(G, periods, bound)

    vectors = [GeneratingVector(G, t[:fp.n], t[fp.n:]) for t in tuples]
    logger.info(f"Enumerated {len(vectors)} generating vectors for {fp.label} at (p,q)=({fp.p},{fp.q})")
    return vectors
