"""
有限群の具体的な実装

G_{p,q} = <a, b | a^q = b^p = 1, b a b^-1 = a^r> は元の式による高速経路で構成し、
拡大群はsympyの有限表示群の剰余類列挙（自明部分群に対する正則表現）から閉包として構成する。
"""

from __future__ import annotations

import io
import logging
import math
import random
import re
from collections import deque
from dataclasses import dataclass, field
from itertools import product

import numpy as np
from sympy import isprime
from sympy.ntheory import n_order
from sympy.combinatorics.free_groups import free_group
from sympy.combinatorics.fp_groups import FpGroup

from .config import Config
from .errors import (
    BadRoot, DivisibilityFailure, EvenPrime, GroupTooLarge, MixedGroups,
    NotPrime, RelationInconsistency, UnknownKind,
)

logger = logging.getLogger(__name__)


class FiniteGroup:
    """Cayley表で表現した有限群（単位元の添字は0）"""

    def __init__(self, table, generators, kind, labels=None, names=None):
        self.table = np.asarray(table, dtype=np.int32)
        self.size = int(self.table.shape[0])
        self.kind = kind
        self.generators = tuple(generators)
        self.labels = dict(labels or {})
        self._names = names
        self._rows = self.table.tolist()

        if self._rows[0] != list(range(self.size)):
            raise RelationInconsistency(f"{kind}: element 0 is not the identity")

        self.inverses = [row.index(0) for row in self._rows]
        self.orders = [self._element_order(x) for x in range(self.size)]
        self._tree = None

    def __len__(self):
        return self.size

    def __repr__(self):
        return f"<FiniteGroup {self.kind} order={self.size}>"

    def _element_order(self, x):
        k, y = 1, x
        while y != 0:
            y = self._rows[y][x]
            k += 1
        return k

    # --- 添字ベースの演算（内部ループ用） ---

    def mul(self, x, y):
        return self._rows[x][y]

    def inv(self, x):
        return self.inverses[x]

    def order_of(self, x):
        return self.orders[x]

    def power(self, x, k):
        k %= self.orders[x]
        y = 0
        for _ in range(k):
            y = self._rows[y][x]
        return y

    def conj(self, g, x):
        """g x g^-1"""
        return self._rows[self._rows[g][x]][self.inverses[g]]

    def product(self, elements):
        y = 0
        for x in elements:
            y = self._rows[y][x]
        return y

    # --- 公開API ---

    def element(self, index):
        return Element(self, index)

    def gen(self, label):
        return Element(self, self.labels[label])

    def describe(self, x):
        """元の表示名"""
        if self._names is not None:
            return self._names[x]
        return f"g{x}"

    def spanning_tree(self):
        """主生成元による右乗算のBFS木: (元, 親, ラベル) のリスト"""
        if self._tree is None:
            tree = []
            seen = {0}
            queue = deque([0])
            while queue:
                x = queue.popleft()
                for label in self.generators:
                    y = self._rows[x][self.labels[label]]
                    if y not in seen:
                        seen.add(y)
                        tree.append((y, x, label))
                        queue.append(y)
            if len(seen) != self.size:
                raise RelationInconsistency(f"{self.kind}: generators do not generate the group")
            self._tree = tree
        return self._tree

    def cayley_csv(self):
        """Cayley表のCSVダンプ（行・列とも元の添字）"""
        buffer = io.StringIO()
        np.savetxt(buffer, self.table, fmt='%d', delimiter=',')
        return buffer.getvalue()


class PQGroup(FiniteGroup):
    """G_{p,q}: 元 a^l b^n を (l, n) で表し、添字は l*p + n"""

    def __init__(self, p, q, r):
        self.p, self.q, self.r = p, q, r
        self.rpow = [pow(r, n, q) for n in range(p)]

        idx = np.arange(p * q)
        ls, ns = idx // p, idx % p
        rp = np.array(self.rpow, dtype=np.int64)
        # (l,n)(l',n') = (l + r^n l', n + n')
        l_prod = (ls[:, None] + rp[ns][:, None] * ls[None, :]) % q
        n_prod = (ns[:, None] + ns[None, :]) % p
        table = l_prod * p + n_prod

        names = [self._word(l, n) for l, n in (divmod(int(i), p) for i in idx)]
        super().__init__(
            table,
            generators=('a', 'b'),
            kind=f"G_{p},{q}",
            labels={'a': self.index(1, 0), 'b': self.index(0, 1)},
            names=names,
        )

    @staticmethod
    def _word(l, n):
        if l == 0 and n == 0:
            return "1"
        parts = []
        if l:
            parts.append("a" if l == 1 else f"a^{l}")
        if n:
            parts.append("b" if n == 1 else f"b^{n}")
        return " ".join(parts)

    def index(self, l, n):
        return (l % self.q) * self.p + (n % self.p)

    def coords(self, x):
        return divmod(x, self.p)


class Element:
    """群に束縛された元"""

    __slots__ = ('group', 'index')

    def __init__(self, group, index):
        self.group = group
        self.index = int(index)

    def _check(self, other):
        if not isinstance(other, Element) or other.group is not self.group:
            raise MixedGroups("Operands belong to different groups")

    def __mul__(self, other):
        self._check(other)
        return Element(self.group, self.group.mul(self.index, other.index))

    def __pow__(self, k):
        if k < 0:
            return Element(self.group, self.group.power(self.group.inv(self.index), -k))
        return Element(self.group, self.group.power(self.index, k))

    def __eq__(self, other):
        return isinstance(other, Element) and other.group is self.group and other.index == self.index

    def __hash__(self):
        return hash((id(self.group), self.index))

    def __repr__(self):
        return self.group.describe(self.index)

    def inverse(self):
        return Element(self.group, self.group.inv(self.index))

    @property
    def order(self):
        return self.group.order_of(self.index)


def multiply(x, y):
    return x * y


def inverse(x):
    return x.inverse()


def order(x):
    return x.order


def conjugate(g, x):
    """g x g^-1"""
    g._check(x)
    return g * x * g.inverse()


# --- G_{p,q} の構成 ---

def validate_primes(p, q):
    """p, q が奇素数で p | q-1 かチェック"""
    for value in (p, q):
        if not isprime(value):
            raise NotPrime(f"{value} is not prime")
    if p == 2 or q == 2:
        raise EvenPrime("p and q must be odd primes")
    if (q - 1) % p != 0:
        raise DivisibilityFailure(f"{p} does not divide {q} - 1")


def primitive_roots(p, q):
    """位数がちょうど p の (Z/q)^* の元を昇順で返す"""
    return [r for r in range(2, q) if n_order(r, q) == p]


def make_group(p, q, r=None):
    """G_{p,q} を構成する（r 省略時は最小の原始p乗根）"""
    validate_primes(p, q)
    if r is None:
        r = primitive_roots(p, q)[0]
    elif r % q == 0 or n_order(r % q, q) != p:
        raise BadRoot(f"{r} does not have multiplicative order {p} mod {q}")
    group = PQGroup(p, q, r % q)
    logger.info(f"Built {group.kind} with r={group.r}")
    return group


# --- 表示からの構成（剰余類列挙による正則表現の閉包） ---

def _coset_permutations(names, relator_builder):
    """有限表示から各生成元の正則表現（置換配列）を得る"""
    F, *gens = free_group(" ".join(names))
    symbols = dict(zip(names, gens))
    fp_group = FpGroup(F, relator_builder(symbols))
    coset_table = fp_group.coset_enumeration([])
    coset_table.compress()
    coset_table.standardize()
    rows = coset_table.table
    return {
        name: np.array([row[coset_table.A_dict[gen]] for row in rows], dtype=np.int64)
        for name, gen in symbols.items()
    }


def group_from_permutations(perms, kind, expected_order=None, derived=None):
    """正則作用する生成元置換の閉包から FiniteGroup を作る"""
    names = list(perms)
    degree = len(perms[names[0]])
    identity = np.arange(degree)
    found = {tuple(identity): identity}
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for name in names:
            y = perms[name][x]
            key = tuple(y)
            if key not in found:
                found[key] = y
                queue.append(y)

    if expected_order is not None and len(found) != expected_order:
        raise RelationInconsistency(
            f"{kind}: closure has {len(found)} elements, expected {expected_order}")
    if len(found) != degree:
        raise RelationInconsistency(f"{kind}: generator action is not regular")

    # 正則作用なので元は点0の像で決まる
    arrays = [None] * degree
    for arr in found.values():
        arrays[int(arr[0])] = arr
    table = np.stack(arrays, axis=1)

    labels = {name: int(perms[name][0]) for name in names}
    group = FiniteGroup(table, generators=names, kind=kind, labels=labels)
    for label, word in (derived or {}).items():
        group.labels[label] = Word.parse(word).evaluate(group)
    return group


def presented_pq_group(p, q, r=None):
    """G_{p,q} を表示から閉包で構成（高速経路との照合用）"""
    validate_primes(p, q)
    r = r or primitive_roots(p, q)[0]

    def relators(s):
        a, b = s['a'], s['b']
        return [a**q, b**p, b * a * b**-1 * a**-r]

    perms = _coset_permutations(['a', 'b'], relators)
    return group_from_permutations(perms, f"G_{p},{q} (presented)", expected_order=p * q)


# --- 拡大群 ---

@dataclass(frozen=True)
class OvergroupKind:
    name: str
    eps: tuple = ()

    def __str__(self):
        if not self.eps:
            return self.name
        return f"{self.name}({','.join(str(e) for e in self.eps)})"


_KIND_PATTERN = re.compile(r"^(\w+?)(?:\(([^)]*)\))?$")
_BASE_KINDS = {
    'DirectProductC2': 2,
    'CqRtimesC2p': 2,
    'CqRtimesC2p_Times_C2': 4,
    'C4ExtEps': 4,
    'C2SquaredExt': 4,
}


def parse_kind(kind):
    """'C2SquaredExt(-1,-1)' のような文字列を OvergroupKind に変換"""
    if isinstance(kind, OvergroupKind):
        return kind
    match = _KIND_PATTERN.match(kind.replace(" ", ""))
    if not match or match.group(1) not in _BASE_KINDS:
        raise UnknownKind(f"Unknown overgroup kind: {kind}")
    name, args = match.group(1), match.group(2)
    eps = tuple(arg for arg in args.split(",")) if args else ()
    expected = {'C4ExtEps': 1, 'C2SquaredExt': 2}.get(name, 0)
    if len(eps) != expected:
        raise UnknownKind(f"{name} takes {expected} parameter(s), got {len(eps)}")
    for e in eps:
        if e not in ('1', '-1', 'i'):
            raise UnknownKind(f"Unsupported epsilon {e!r} in {kind}")
    if name == 'C2SquaredExt' and 'i' in eps:
        raise UnknownKind("C2SquaredExt only takes epsilon values 1 and -1")
    return OvergroupKind(name, eps)


def fourth_root_of_unity(q):
    """(Z/q)^* の位数4の最小元（4 | q-1 のときのみ存在）"""
    if (q - 1) % 4 != 0:
        return None
    return next(u for u in range(2, q) if n_order(u, q) == 4)


def _eps_residue(eps, q):
    if eps == '1':
        return 1
    if eps == '-1':
        return q - 1
    unit = fourth_root_of_unity(q)
    if unit is None:
        raise UnknownKind(f"No primitive fourth root of unity mod {q} (4 does not divide {q} - 1)")
    return unit


def overgroup_kinds(q, index):
    """指数 index (2 または 4) の拡大群の種類一覧と、構成できない種類"""
    if index == 2:
        return [parse_kind('DirectProductC2'), parse_kind('CqRtimesC2p')], []
    kinds = [parse_kind(f"C4ExtEps({e})") for e in ('1', '-1')]
    missing = []
    if fourth_root_of_unity(q) is None:
        missing.append(parse_kind('C4ExtEps(i)'))
    else:
        kinds.append(parse_kind('C4ExtEps(i)'))
    kinds += [parse_kind(f"C2SquaredExt({e1},{e2})")
              for e1, e2 in (('1', '1'), ('-1', '-1'), ('1', '-1'), ('-1', '1'))]
    return kinds, missing


def build_overgroup(kind, p, q, r=None, generator_order=None):
    """拡大群を表示から構成する（a, b は G_{p,q} の埋め込み像）"""
    validate_primes(p, q)
    kind = parse_kind(kind)
    r = r or primitive_roots(p, q)[0]
    neg_r = (-r) % q
    derived = {}

    if kind.name == 'DirectProductC2':
        names = ['a', 'b', 't']

        def relators(s):
            a, b, t = s['a'], s['b'], s['t']
            return [a**q, b**p, b * a * b**-1 * a**-r, t**2,
                    t * a * t**-1 * a**-1, t * b * t**-1 * b**-1]

    elif kind.name == 'CqRtimesC2p':
        names = ['a', 'c']
        derived = {'b': f"c^{p + 1}", 't': f"c^{p}"}

        def relators(s):
            a, c = s['a'], s['c']
            return [a**q, c**(2 * p), c * a * c**-1 * a**-neg_r]

    elif kind.name == 'CqRtimesC2p_Times_C2':
        names = ['a', 'c', 't']
        derived = {'b': f"c^{p + 1}"}

        def relators(s):
            a, c, t = s['a'], s['c'], s['t']
            return [a**q, c**(2 * p), t**2, c * a * c**-1 * a**-neg_r,
                    (t * a)**2, t * c * t**-1 * c**-1]

    elif kind.name == 'C4ExtEps':
        names = ['a', 'b', 't']
        eps = _eps_residue(kind.eps[0], q)

        def relators(s):
            a, b, t = s['a'], s['b'], s['t']
            return [a**q, b**p, b * a * b**-1 * a**-r, t**4,
                    t * a * t**-1 * a**-eps, t * b * t**-1 * b**-1]

    else:
        names = ['a', 'b', 't', 'u']
        eps1, eps2 = (_eps_residue(e, q) for e in kind.eps)

        def relators(s):
            a, b, t, u = s['a'], s['b'], s['t'], s['u']
            return [a**q, b**p, b * a * b**-1 * a**-r, t**2, u**2,
                    t * u * t**-1 * u**-1,
                    t * a * t**-1 * a**-eps1, u * a * u**-1 * a**-eps2,
                    t * b * t**-1 * b**-1, u * b * u**-1 * b**-1]

    if generator_order is not None:
        names = [names[i] for i in generator_order]
    expected = _BASE_KINDS[kind.name] * p * q
    perms = _coset_permutations(names, relators)
    group = group_from_permutations(perms, str(kind), expected_order=expected, derived=derived)
    logger.info(f"Built overgroup {kind} of order {group.size} for (p,q)=({p},{q})")
    return group


# --- 語 ---

@dataclass(frozen=True)
class Word:
    """(ラベル, 指数) の列"""
    letters: tuple

    @classmethod
    def parse(cls, text):
        """'z1^-1 z3^2' や 'c^4' の形の文字列を解析"""
        letters = []
        for token in text.split():
            label, _, exp = token.partition('^')
            letters.append((label, int(exp) if exp else 1))
        return cls(tuple(letters))

    def inverse(self):
        return Word(tuple((label, -e) for label, e in reversed(self.letters)))

    def evaluate(self, group, bindings=None):
        """ラベルを元の添字に束縛して評価（既定は群のラベル）"""
        bindings = bindings if bindings is not None else group.labels
        y = 0
        for label, e in self.letters:
            x = bindings[label]
            if e < 0:
                x, e = group.inv(x), -e
            y = group.mul(y, group.power(x, e))
        return y

    def __str__(self):
        return " ".join(label if e == 1 else f"{label}^{e}" for label, e in self.letters)


# --- 部分群と準同型 ---

def subgroup_generated(G, elements):
    """元の集合が生成する部分群（添字のソート済みリスト）"""
    gens = set(elements)
    members = {0}
    frontier = [0]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = G.mul(x, g)
            if y not in members:
                members.add(y)
                frontier.append(y)
    return sorted(members)


def generates(G, elements):
    """elements が G 全体を生成するか"""
    if math.lcm(*(G.order_of(x) for x in elements), 1) == G.size:
        return True
    return len(subgroup_generated(G, elements)) == G.size


def elements_of_order(G, k):
    return [x for x in range(G.size) if G.orders[x] == k]


def conjugacy_classes(G):
    """共役類を最小元の順に返す"""
    seen = set()
    classes = []
    for x in range(G.size):
        if x in seen:
            continue
        cls = sorted({G.conj(g, x) for g in range(G.size)})
        seen.update(cls)
        classes.append(cls)
    return classes


def is_associative(G, bound=None, samples=20000, seed=0):
    """結合律の検査（bound 以下は全数、それ以外は標本）"""
    bound = Config.ASSOC_CHECK_BOUND if bound is None else bound
    T = G.table
    if G.size <= bound:
        return bool(np.array_equal(T[T], T[:, T]))
    rng = np.random.default_rng(seed)
    x, y, z = rng.integers(0, G.size, size=(3, samples))
    return bool(np.array_equal(T[T[x, y], z], T[x, T[y, z]]))


def extend_homomorphism(G, H, images):
    """主生成元の像 {ラベル: H の添字} を準同型に延長（不可能なら None）"""
    img = [0] * G.size
    for x, parent, label in G.spanning_tree():
        img[x] = H.mul(img[parent], images[label])
    for label in G.generators:
        g, h = G.labels[label], images[label]
        for x in range(G.size):
            if img[G.mul(x, g)] != H.mul(img[x], h):
                return None
    return img


def find_isomorphism(G, H, images=None):
    """生成元の像の探索による同型写像（なければ None）"""
    if G.size != H.size:
        return None
    if images is not None:
        img = extend_homomorphism(G, H, images)
        return img if img is not None and len(set(img)) == G.size else None
    candidates = [elements_of_order(H, G.order_of(G.labels[label])) for label in G.generators]
    for choice in product(*candidates):
        img = extend_homomorphism(G, H, dict(zip(G.generators, choice)))
        if img is not None and len(set(img)) == G.size:
            return img
    return None


def embedding(G, H):
    """G_{p,q} から拡大群 H へのラベル a, b による単射準同型"""
    img = extend_homomorphism(G, H, {'a': H.labels['a'], 'b': H.labels['b']})
    if img is None or len(set(img)) != G.size:
        raise RelationInconsistency(f"{H.kind}: labels a, b do not span a copy of {G.kind}")
    return img


# --- 自己同型 ---

@dataclass(frozen=True)
class Automorphism:
    images: tuple
    params: tuple = None
    group: FiniteGroup = field(default=None, compare=False, repr=False)

    def __call__(self, x):
        return self.images[x]

    def compose(self, other):
        """self ∘ other"""
        return Automorphism(tuple(self.images[y] for y in other.images), group=self.group)


def automorphisms(G, bound=None):
    """自己同型の全列挙（生成元の像の全探索）"""
    bound = Config.AUT_SEARCH_BOUND if bound is None else bound
    if G.size > bound:
        raise GroupTooLarge(f"|G| = {G.size} exceeds the automorphism search bound {bound}")

    candidates = [elements_of_order(G, G.order_of(G.labels[label])) for label in G.generators]
    result = []
    for choice in product(*candidates):
        img = extend_homomorphism(G, G, dict(zip(G.generators, choice)))
        if img is None or len(set(img)) != G.size:
            continue
        params = None
        if isinstance(G, PQGroup):
            i, _ = G.coords(img[G.labels['a']])
            j, _ = G.coords(img[G.labels['b']])
            params = (i, j)
        result.append(Automorphism(tuple(img), params, G))
    result.sort(key=lambda f: f.images)
    logger.info(f"Found {len(result)} automorphisms of {G.kind}")
    return result


def inner_automorphism(G, g):
    img = tuple(G.conj(g, x) for x in range(G.size))
    params = None
    if isinstance(G, PQGroup):
        params = (G.coords(img[G.labels['a']])[0], G.coords(img[G.labels['b']])[0])
    return Automorphism(img, params, G)


def _aut_closure(gens, size):
    identity = tuple(range(size))
    seen = {identity}
    frontier = [identity]
    while frontier:
        f = frontier.pop()
        for g in gens:
            h = tuple(g.images[y] for y in f)
            if h not in seen:
                seen.add(h)
                frontier.append(h)
    return seen


def aut_generators(auts):
    """自己同型群の生成系を貪欲に選ぶ"""
    if not auts:
        return []
    size = len(auts[0].images)
    gens = []
    closure = {tuple(range(size))}
    for f in auts:
        if f.images not in closure:
            gens.append(f)
            closure = _aut_closure(gens, size)
        if len(closure) == len(auts):
            break
    return gens


def random_elements(G, count, seed=0):
    rng = random.Random(seed)
    return [rng.randrange(G.size) for _ in range(count)]
