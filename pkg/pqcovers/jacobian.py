"""
群代数分解による JS ~ B1 × B2^p の次元計算
"""

import logging
from dataclasses import asdict, dataclass, field

from sympy import Rational

from .characters import character_table, fixed_dim, rational_irreps
from .errors import NonIntegralDimension
from .groups import subgroup_generated
from .signatures import genus_formula, quotient_genera, quotient_genus

logger = logging.getLogger(__name__)


def _factor_data(G):
    """(V_j の代表となる複素既約表現, d_j, c_j) を W1, W2 の順に返す"""
    irreps = character_table(G)
    data = []
    for W in rational_irreps(G, irreps)[1:]:
        V = W.components[0]
        data.append((V, W.degree, W.field_degree))
    return data


def factor_dims(fp, v, gamma=0, factor_data=None, fixed_cache=None):
    """
    dim B_j = c_j [d_j(γ - 1) + ½ Σ_i (d_j - dim V_j^{<v_i>})]

    fixed_cache を渡すと (V_j の名前, 部分群) ごとの dim V_j^H を呼び出し間で共有する
    """
    G = v.group
    factor_data = factor_data or _factor_data(G)
    fixed_cache = {} if fixed_cache is None else fixed_cache
    isotropy = [tuple(subgroup_generated(G, [e])) for e in v.entries]
    dims = []
    for V, d, c in factor_data:
        total = Rational(d * (gamma - 1))
        for H in isotropy:
            key = (V.name, H)
            if key not in fixed_cache:
                fixed_cache[key] = fixed_dim(V, H)
            total += Rational(d - fixed_cache[key], 2)
        value = c * total
        if not value.is_integer or value < 0:
            logger.error(f"dim B for {V.name} evaluates to {value} on {v}")
            raise NonIntegralDimension(f"dim B for {V.name} = {value} for family {fp.label}")
        dims.append(int(value))
    return tuple(dims)


def closed_form_dims(fp):
    """((p-1)(n-2)/2, (q-1)(m-2)/2 + (p-1)(q-1)n/(2p))"""
    return quotient_genera(fp)


def proof_form_dim_b2(fp):
    """B2 の次元のもう一つの形: (q-1)/p * [p(-1) + ½(n(p-1) + m p)]"""
    p, q, n, m = fp.p, fp.q, fp.n, fp.m
    value = Rational(q - 1, p) * (-p + Rational(n * (p - 1) + m * p, 2))
    if not value.is_integer:
        raise NonIntegralDimension(f"Second form of dim B2 = {value} for {fp.label}")
    return int(value)


def quotient_multiplicities(G, K, dims=None, factor_data=None):
    """n_j^K = dim V_j^K と予測される dim J(S/K)"""
    factor_data = factor_data or _factor_data(G)
    mults = tuple(fixed_dim(V, K) for V, _, _ in factor_data)
    predicted = None
    if dims is not None:
        predicted = sum(n * d for n, d in zip(mults, dims))
    return mults, predicted


@dataclass
class DecompositionReport:
    p: int
    q: int
    n: int
    m: int
    genus: int
    dim_b0: int
    dim_b1: int
    dim_b2: int
    multiplicities: tuple
    g_x: int
    g_y: int
    closed_form: tuple
    rh_quotient_genera: dict = field(default_factory=dict)
    subgroup_table: dict = field(default_factory=dict)

    @property
    def check(self):
        total = self.dim_b1 + self.p * self.dim_b2
        status = "OK" if total == self.genus else "FAIL"
        return f"g = dimB1 + p*dimB2 = {total} {status}"

    def to_dict(self):
        data = asdict(self)
        data['multiplicities'] = list(self.multiplicities)
        data['closed_form'] = list(self.closed_form)
        data['dimB1'] = data.pop('dim_b1')
        data['dimB2'] = data.pop('dim_b2')
        data['dimB0'] = data.pop('dim_b0')
        data['gX'] = data.pop('g_x')
        data['gY'] = data.pop('g_y')
        data['check'] = self.check
        return data


def decomposition_report(fp, v):
    """種数・B の次元・商の種数・部分群ごとの重複度をまとめる"""
    G = v.group
    factor_data = _factor_data(G)
    dims = factor_dims(fp, v, factor_data=factor_data)
    genus = genus_formula(fp)
    g_x, g_y = quotient_genera(fp)

    a, b = G.labels['a'], G.labels['b']
    subgroups = {
        '1': [0],
        'N': subgroup_generated(G, [a]),
        'H': subgroup_generated(G, [b]),
        'G': list(range(G.size)),
    }
    table = {}
    for name, K in subgroups.items():
        mults, predicted = quotient_multiplicities(G, K, dims, factor_data)
        table[name] = {'n1': mults[0], 'n2': mults[1], 'predicted_dim': predicted}

    rh = {
        'X': quotient_genus(G, v.entries, subgroups['N']),
        'Y': quotient_genus(G, v.entries, subgroups['H']),
    }
    report = DecompositionReport(
        p=fp.p, q=fp.q, n=fp.n, m=fp.m,
        genus=genus,
        dim_b0=0,
        dim_b1=dims[0],
        dim_b2=dims[1],
        multiplicities=(1, 1, fp.p),
        g_x=g_x,
        g_y=g_y,
        closed_form=closed_form_dims(fp),
        rh_quotient_genera=rh,
        subgroup_table=table,
    )
    logger.info(f"Decomposition for {fp.label} at (p,q)=({fp.p},{fp.q}): {report.check}")
    return report
