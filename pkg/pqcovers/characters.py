"""
G_{p,q} の指標理論（円分体 Q(ζ_pq) 上の厳密計算）
"""

import json
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd

import numpy as np
from sympy import QQ, Poly, Rational, Symbol, cyclotomic_poly

from .errors import NonIntegralFixedDim
from .groups import conjugacy_classes

logger = logging.getLogger(__name__)

_z = Symbol('z')


@lru_cache(maxsize=None)
def _modulus(N):
    return Poly(cyclotomic_poly(N, _z), _z, domain=QQ)


class Cyclotomic:
    """Q(ζ_N) の元（N 次円分多項式で既約化した有理係数多項式）"""

    __slots__ = ('N', 'poly')

    def __init__(self, N, poly):
        self.N = N
        self.poly = poly.rem(_modulus(N))

    @classmethod
    def from_int(cls, N, value):
        return cls(N, Poly(Rational(value), _z, domain=QQ))

    @classmethod
    def root(cls, N, k):
        """ζ_N^k"""
        return cls(N, Poly(_z ** (k % N), _z, domain=QQ))

    def _coerce(self, other):
        if isinstance(other, Cyclotomic):
            return other
        return Cyclotomic.from_int(self.N, other)

    def __add__(self, other):
        return Cyclotomic(self.N, self.poly + self._coerce(other).poly)

    __radd__ = __add__

    def __sub__(self, other):
        return Cyclotomic(self.N, self.poly - self._coerce(other).poly)

    def __neg__(self):
        return Cyclotomic(self.N, -self.poly)

    def __mul__(self, other):
        return Cyclotomic(self.N, self.poly * self._coerce(other).poly)

    __rmul__ = __mul__

    def __truediv__(self, k):
        return Cyclotomic(self.N, self.poly * Rational(1, k))

    def __eq__(self, other):
        if not isinstance(other, (Cyclotomic, int)):
            return NotImplemented
        return (self - other).poly.is_zero

    def __hash__(self):
        return hash((self.N, tuple(self.coefficients())))

    def __repr__(self):
        return f"Cyclotomic({self.poly.as_expr()}, N={self.N})"

    def galois(self, s):
        """ζ ↦ ζ^s（s は N と互いに素）"""
        result = Cyclotomic.from_int(self.N, 0)
        for (k,), c in self.poly.terms():
            result = result + Cyclotomic.root(self.N, k * s) * c
        return result

    def conjugate(self):
        return self.galois(-1)

    def is_rational_integer(self):
        if self.poly.degree() > 0:
            return False
        return self.poly.LC().is_integer if not self.poly.is_zero else True

    def to_int(self):
        return 0 if self.poly.is_zero else int(self.poly.LC())

    def coefficients(self):
        """低次から並べた係数（文字列）"""
        if self.poly.is_zero:
            return ["0"]
        return [str(c) for c in reversed(self.poly.all_coeffs())]

    def to_complex(self):
        zeta = np.exp(2j * np.pi / self.N)
        return complex(sum(complex(float(c)) * zeta ** k for (k,), c in self.poly.terms()))


# --- 既約表現 ---

def orbit_representatives(p, q, r):
    """(Z/q)^* を <r> の剰余類に分けたときの最小代表 k_1 < … < k_d"""
    seen = set()
    reps = []
    for u in range(1, q):
        if u in seen:
            continue
        reps.append(u)
        seen.update(u * pow(r, n, q) % q for n in range(p))
    return reps


@dataclass
class ComplexIrrep:
    kind: str
    index: int
    degree: int
    values: list = field(repr=False)
    k: int = None

    @property
    def name(self):
        return f"chi_{self.index}" if self.kind == 'chi' else f"psi_{self.index}"

    def __call__(self, x):
        return self.values[x]


@dataclass
class RationalIrrep:
    name: str
    components: list
    degree: int
    schur_index: int
    field_degree: int

    @property
    def multiplicity(self):
        return self.degree // self.schur_index

    def as_tuple(self):
        """(d, s, c, n)"""
        return (self.degree, self.schur_index, self.field_degree, self.multiplicity)


def character_table(G):
    """p 個の一次指標 χ_l と (q-1)/p 個の p 次指標 ψ_j"""
    p, q, r = G.p, G.q, G.r
    N = p * q
    irreps = []
    for l in range(p):
        # χ_l(a^x b^n) = ω_p^{l n}
        values = [Cyclotomic.root(N, q * l * G.coords(x)[1]) for x in range(G.size)]
        irreps.append(ComplexIrrep('chi', l, 1, values))

    for j, k in enumerate(orbit_representatives(p, q, r), start=1):
        by_exponent = {}
        values = []
        for x in range(G.size):
            l, n = G.coords(x)
            if n:
                values.append(Cyclotomic.from_int(N, 0))
                continue
            if l not in by_exponent:
                total = Cyclotomic.from_int(N, 0)
                for i in range(p):
                    total = total + Cyclotomic.root(N, p * k * pow(r, i, q) * l)
                by_exponent[l] = total
            values.append(by_exponent[l])
        irreps.append(ComplexIrrep('psi', j, p, values, k))
    return irreps


def first_orthogonality(G, irreps):
    """<χ, ψ> = δ の検査"""
    classes = conjugacy_classes(G)
    for i, chi in enumerate(irreps):
        for j, psi in enumerate(irreps):
            total = Cyclotomic.from_int(chi.values[0].N, 0)
            for cls in classes:
                total = total + chi(cls[0]) * psi(cls[0]).conjugate() * len(cls)
            if total != (G.size if i == j else 0):
                logger.error(f"First orthogonality fails for {chi.name}, {psi.name}")
                return False
    return True


def second_orthogonality(G, irreps):
    """Σ χ(c) conj χ(d) = δ |G|/|C| の検査"""
    classes = conjugacy_classes(G)
    for i, c in enumerate(classes):
        for j, d in enumerate(classes):
            total = Cyclotomic.from_int(irreps[0].values[0].N, 0)
            for chi in irreps:
                total = total + chi(c[0]) * chi(d[0]).conjugate()
            if total != (G.size // len(c) if i == j else 0):
                logger.error(f"Second orthogonality fails for classes {c[0]}, {d[0]}")
                return False
    return True


def rational_irreps(G, irreps=None):
    """Galois 軌道ごとにまとめた有理既約表現 W0, W1, W2（Schur指数は1）"""
    irreps = irreps or character_table(G)
    N = G.p * G.q
    reps = [cls[0] for cls in conjugacy_classes(G)]
    signature = {i: tuple(irrep(x) for x in reps) for i, irrep in enumerate(irreps)}
    lookup = {values: i for i, values in signature.items()}

    grouped = []
    assigned = set()
    for i, irrep in enumerate(irreps):
        if i in assigned:
            continue
        orbit = set()
        for s in range(1, N):
            if gcd(s, N) != 1:
                continue
            twisted = tuple(v.galois(s) for v in signature[i])
            orbit.add(lookup[twisted])
        assigned.update(orbit)
        grouped.append(sorted(orbit))

    result = []
    for k, members in enumerate(grouped):
        components = [irreps[i] for i in members]
        result.append(RationalIrrep(
            name=f"W{k}",
            components=components,
            degree=components[0].degree,
            schur_index=1,
            field_degree=len(components),
        ))
    logger.info(f"Grouped {len(irreps)} complex irreps into {len(result)} rational irreps")
    return result


def fixed_dim(V, H):
    """dim V^H = (1/|H|) Σ_{h∈H} χ_V(h)"""
    H = list(H)
    total = Cyclotomic.from_int(V.values[0].N, 0)
    for h in H:
        total = total + V(h)
    average = total / len(H)
    if not average.is_rational_integer() or average.to_int() < 0:
        logger.error(f"Fixed dimension of {V.name} over a subgroup of order {len(H)} is {average}")
        raise NonIntegralFixedDim(f"dim {V.name}^H = {average} is not a nonnegative integer")
    return average.to_int()


# --- 単項行列モデル ---

def monomial_model(G, V):
    """V の具体的な行列表現 x ↦ ρ(x)（numpy 複素行列）"""
    p, q, r = G.p, G.q, G.r
    if V.kind == 'chi':
        omega = np.exp(2j * np.pi * V.index / p)
        return {x: np.array([[omega ** G.coords(x)[1]]]) for x in range(G.size)}

    D = np.diag([np.exp(2j * np.pi * V.k * pow(r, i, q) / q) for i in range(p)])
    P = np.zeros((p, p), dtype=complex)
    for i in range(p - 1):
        P[i, i + 1] = 1
    P[p - 1, 0] = 1
    model = {}
    for x in range(G.size):
        l, n = G.coords(x)
        model[x] = np.linalg.matrix_power(D, l) @ np.linalg.matrix_power(P, n)
    return model


def projector_rank(model, H, tolerance=1e-9):
    """(1/|H|) Σ ρ(h) の階数"""
    H = list(H)
    projector = sum(model[h] for h in H) / len(H)
    return int(np.linalg.matrix_rank(projector, tol=tolerance))


def character_table_json(G, irreps=None):
    """共役類の代表・大きさと指標値（係数ベクトル）"""
    irreps = irreps or character_table(G)
    classes = conjugacy_classes(G)
    data = {
        'p': G.p,
        'q': G.q,
        'r': G.r,
        'classes': [{'representative': G.describe(c[0]), 'size': len(c)} for c in classes],
        'irreps': [
            {
                'name': irrep.name,
                'degree': irrep.degree,
                'values': [irrep(c[0]).coefficients() for c in classes],
            }
            for irrep in irreps
        ],
    }
    return json.dumps(data, sort_keys=True, indent=2)
