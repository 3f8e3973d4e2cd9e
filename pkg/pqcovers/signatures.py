"""
シグネチャの算術（双曲面積・Riemann-Hurwitz・Teichmüller次元）

面積と種数の計算はすべて sympy.Rational による厳密計算で行う。
"""

import logging
from collections import Counter
from dataclasses import dataclass

from sympy import Rational

from .errors import InvalidSignature, NoAction, NonIntegralGenus

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Signature:
    gamma: int
    periods: tuple

    def __post_init__(self):
        object.__setattr__(self, 'periods', tuple(int(k) for k in self.periods))
        if self.gamma < 0:
            raise InvalidSignature(f"Orbit genus must be nonnegative, got {self.gamma}")
        for k in self.periods:
            if k < 2:
                raise InvalidSignature(f"Periods must be at least 2, got {k}")

    def same_multiset(self, other):
        """周期の順序を無視した比較"""
        return self.gamma == other.gamma and Counter(self.periods) == Counter(other.periods)

    def __str__(self):
        return f"({self.gamma}; {', '.join(str(k) for k in self.periods)})"


@dataclass(frozen=True)
class FamilyParams:
    p: int
    q: int
    n: int
    m: int

    def __post_init__(self):
        if self.n < 0 or self.m < 0:
            raise InvalidSignature("n and m must be nonnegative")
        if self.n + self.m < 3:
            raise InvalidSignature(f"n + m must be at least 3, got {self.n + self.m}")

    @property
    def signature(self):
        """s_{n,m} = (0; p,…,p, q,…,q)"""
        return Signature(0, (self.p,) * self.n + (self.q,) * self.m)

    @property
    def label(self):
        return f"({self.n},{self.m})"


def hyperbolic_area(sig):
    """2γ - 2 + Σ(1 - 1/k_i)（2π単位）"""
    area = Rational(2 * sig.gamma - 2)
    for k in sig.periods:
        area += 1 - Rational(1, k)
    return area


def _riemann_hurwitz(sig, group_order):
    value = (group_order * hyperbolic_area(sig) + 2) / 2
    if not value.is_integer or value < 0:
        logger.error(f"Riemann-Hurwitz gives g = {value} for {sig} and |G| = {group_order}")
        raise NonIntegralGenus(f"Signature {sig} with |G| = {group_order} gives genus {value}")
    return int(value)


def rh_genus(sig, group_order):
    """Riemann-Hurwitz: 2g - 2 = |G| * area（周期は |G| を割り、面積は正）"""
    for k in sig.periods:
        if group_order % k:
            raise InvalidSignature(f"Period {k} of {sig} does not divide |G| = {group_order}")
    area = hyperbolic_area(sig)
    if area <= 0:
        raise InvalidSignature(f"Signature {sig} has non-positive area {area}")
    return _riemann_hurwitz(sig, group_order)


def genus_formula(fp):
    """1 - pq + nq(p-1)/2 + mp(q-1)/2"""
    if fp.n < 2:
        raise NoAction(f"No action of G_{fp.p},{fp.q} with signature {fp.signature} (n >= 2 required)")
    p, q, n, m = fp.p, fp.q, fp.n, fp.m
    value = 1 - p * q + Rational(n * q * (p - 1), 2) + Rational(m * p * (q - 1), 2)
    if not value.is_integer:
        raise NonIntegralGenus(f"Genus formula gives {value} for {fp}")
    genus = int(value)
    # p = 3 の (0; 3,3,3) は面積 0
    expected = _riemann_hurwitz(fp.signature, p * q)
    if genus != expected:
        raise NonIntegralGenus(f"Closed form genus {genus} differs from Riemann-Hurwitz {expected}")
    return genus


def quotient_genera(fp):
    """S/⟨a⟩ と S/⟨b⟩ の種数 (g_X, g_Y)"""
    if fp.n < 2:
        raise NoAction(f"No action with signature {fp.signature}")
    p, q, n, m = fp.p, fp.q, fp.n, fp.m
    g_x = Rational((p - 1) * (n - 2), 2)
    g_y = Rational((q - 1) * (m - 2), 2) + Rational((p - 1) * (q - 1) * n, 2 * p)
    for name, value in (('g_X', g_x), ('g_Y', g_y)):
        if not value.is_integer or value < 0:
            raise NonIntegralGenus(f"{name} = {value} for {fp}")
    return int(g_x), int(g_y)


def teich_dimension(sig):
    return 3 * sig.gamma - 3 + len(sig.periods)


# --- 中間被覆 ---

def _right_cosets(G, K):
    """右剰余類 K x への添字付け"""
    K = set(K)
    coset_of = {}
    count = 0
    for x in range(G.size):
        if x in coset_of:
            continue
        for k in K:
            coset_of[G.mul(k, x)] = count
        count += 1
    return coset_of, count


def _cycle_count(G, coset_of, degree, g):
    """g の右作用で剰余類空間に生じるサイクル数"""
    reps = {}
    for x, c in coset_of.items():
        reps.setdefault(c, x)
    seen = set()
    cycles = 0
    for c in range(degree):
        if c in seen:
            continue
        cycles += 1
        x = reps[c]
        while coset_of[x] not in seen:
            seen.add(coset_of[x])
            x = G.mul(x, g)
    return cycles


def quotient_genus(G, entries, K):
    """
    S/K の種数を S/G = P^1 上の Riemann-Hurwitz で計算

    各分岐点上のファイバーは ⟨g_i⟩ の剰余類空間 G/K 上の軌道に対応する
    """
    coset_of, degree = _right_cosets(G, K)
    total = -2 * degree
    for g in entries:
        total += degree - _cycle_count(G, coset_of, degree, g)
    if total % 2:
        raise NonIntegralGenus(f"Odd ramification total {total} for quotient of order {len(K)}")
    return (total + 2) // 2


def branch_count(G, entries, N, K):
    """
    中間被覆 S/N → S/K の分岐点数（N ⊂ K）

    S/G 上の各分岐点について、S/K 上のファイバー点ごとに
    S/N 側の逆像が [K:N] 個未満なら分岐点として数える
    """
    N = set(N)
    K = set(K)
    coset_k, deg_k = _right_cosets(G, K)
    coset_n, deg_n = _right_cosets(G, N)
    index = deg_n // deg_k

    reps_n = {}
    for x, c in coset_n.items():
        reps_n.setdefault(c, x)

    count = 0
    for g in entries:
        # ⟨g⟩ 軌道を G/N 上で求め、G/K 上の軌道ごとに集計
        orbit_n = {}
        for c in range(deg_n):
            if c in orbit_n:
                continue
            x = reps_n[c]
            while coset_n[x] not in orbit_n:
                orbit_n[coset_n[x]] = c
                x = G.mul(x, g)
        seen_k = {}
        for c, orbit in orbit_n.items():
            x = reps_n[c]
            seen_k.setdefault(_k_orbit(G, coset_k, x, g), set()).add(orbit)
        count += sum(1 for orbits in seen_k.values() if len(orbits) < index)
    return count


def _k_orbit(G, coset_k, x, g):
    """x K の ⟨g⟩ 軌道の代表（剰余類番号の最小値）"""
    start = coset_k[x]
    best = start
    y = G.mul(x, g)
    while coset_k[y] != start:
        best = min(best, coset_k[y])
        y = G.mul(y, g)
    return best
