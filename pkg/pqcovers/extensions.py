"""
作用の拡張と極大性の検証、準プラトン曲面の構成
"""

import logging
from dataclasses import dataclass, field
from itertools import product

from .errors import RestrictionMismatch, UnknownFamily
from .groups import (
    Word, build_overgroup, elements_of_order, embedding, generates, make_group,
    overgroup_kinds, subgroup_generated,
)
from .signatures import (
    FamilyParams, Signature, branch_count, genus_formula, quotient_genus, rh_genus,
)
from .strata import normal_form, orbits
from .vectors import GeneratingVector, search_tuples, validate

logger = logging.getLogger(__name__)


@dataclass
class ExtensionVerdict:
    family: str
    kind: str
    signature: str
    ske_count: int
    witness: list = None
    restriction: dict = None
    details: dict = field(default_factory=dict)

    def to_dict(self):
        data = {
            'family': self.family,
            'kind': self.kind,
            'signature': self.signature,
            'ske_count': self.ske_count,
        }
        if self.witness is not None:
            data['witness'] = self.witness
        if self.restriction is not None:
            data['restriction_orbit'] = self.restriction.get('orbit_id')
            data['restriction'] = self.restriction
        data.update(self.details)
        return data


def enumerate_skes_genus0(G, periods, bound=None):
    """種数0のシグネチャ (0; periods) から G への ske の全列挙"""
    return search_tuples(G, periods, bound)


def check_ske(H, entries, periods):
    """位数・積・生成の検査（違反の名前のリスト）"""
    violations = []
    for i, (e, k) in enumerate(zip(entries, periods), start=1):
        if H.order_of(e) != k:
            violations.append(f"WrongOrder({i})")
    if H.product(entries) != 0:
        violations.append("ProductNotIdentity")
    if not generates(H, entries):
        violations.append("NotSurjective")
    return violations


def involutions(H):
    return elements_of_order(H, 2)


def _describe(H, entries):
    return [H.describe(e) for e in entries]


def _pull_back(G, H, images):
    """埋め込まれた G_{p,q} の元を G の添字に戻す"""
    emb = embedding(G, H)
    back = {h: g for g, h in enumerate(emb)}
    missing = [h for h in images if h not in back]
    if missing:
        raise RestrictionMismatch(f"{len(missing)} restricted images lie outside the copy of G_{G.p},{G.q}")
    return [back[h] for h in images]


def _orbit_id(v, orbit_list):
    for orbit in orbit_list:
        if v.entries in orbit.members:
            return orbit.id
    return None


# --- (2,2) 族: 位数 2pq への拡張がないこと ---

def check_no_extension_22(p, q, bound=None):
    """(0; 2,2,p,q) の ske が位数 2pq の両方の拡大群で存在しないこと"""
    verdicts = []
    for kind in overgroup_kinds(q, 2)[0]:
        H = build_overgroup(kind, p, q)
        skes = enumerate_skes_genus0(H, [2, 2, p, q], bound)
        inv = involutions(H)
        # 積の位数が p となる対合の組
        pairs = sum(1 for s, u in product(inv, repeat=2) if H.order_of(H.mul(s, u)) == p)
        verdicts.append(ExtensionVerdict(
            family='(2,2)',
            kind=str(kind),
            signature=str(Signature(0, (2, 2, p, q))),
            ske_count=len(skes),
            witness=_describe(H, skes[0]) if skes else None,
            details={'involutions': len(inv), 'involution_pairs_of_product_order_p': pairs},
        ))
        logger.info(f"{kind}: {len(skes)} skes of (0; 2,2,{p},{q}), {len(inv)} involutions")
    return verdicts


# --- (4,0) 族 ---

def index2_theta(H, L, N):
    """Θ = (t a^L, t a^{L-1}, a b^N, b^{-N})"""
    a, b, t = H.labels['a'], H.labels['b'], H.labels['t']
    return (
        H.mul(t, H.power(a, L)),
        H.mul(t, H.power(a, L - 1)),
        H.mul(a, H.power(b, N)),
        H.power(H.inv(b), N),
    )


INDEX2_WORDS = ['z3', 'z4', 'z1 z3 z1', 'z1 z4 z1']


def restrict(H, theta, words):
    bindings = {f"z{i}": e for i, e in enumerate(theta, start=1)}
    return [Word.parse(w).evaluate(H, bindings) for w in words]


def index2_restriction(G, H, L, N):
    """Θ を検証し、制限を G_{p,q} の (4,0) 生成ベクトルとして返す"""
    p = G.p
    theta = index2_theta(H, L, N)
    violations = check_ske(H, theta, [2, 2, p, p])
    if violations:
        raise RestrictionMismatch(f"Theta(L={L}, N={N}) is not a ske: {violations}")
    entries = _pull_back(G, H, restrict(H, theta, INDEX2_WORDS))
    v = GeneratingVector(G, tuple(entries))
    report = validate(v)
    if not report.ok:
        raise RestrictionMismatch(f"Restriction of Theta(L={L}, N={N}) is invalid: {report.violations}")
    return theta, v


def check_extension_40(p, q, L=0, N=1, bound=None, with_orbit=True):
    """(0; 2,2,p,p) の Θ の構成と、位数 4pq の各拡大群で (0; 2,2,2,p) の ske がないこと"""
    G = make_group(p, q)
    H = build_overgroup('CqRtimesC2p', p, q)
    theta, v = index2_restriction(G, H, L, N)
    nf = normal_form(v, predicate=lambda params: params[1] == N % p and params[0] == (-N) % p)

    restriction = {
        'L': L,
        'N': N,
        'vector': v.to_dict(),
        'template': nf.template,
        'params': list(nf.params),
    }
    if with_orbit:
        restriction['orbit_id'] = _orbit_id(v, orbits(FamilyParams(p, q, 4, 0), G))

    extension = ExtensionVerdict(
        family='(4,0)',
        kind='CqRtimesC2p',
        signature=str(Signature(0, (2, 2, p, p))),
        ske_count=len(enumerate_skes_genus0(H, [2, 2, p, p], bound)),
        witness=_describe(H, theta),
        restriction=restriction,
    )

    kinds, missing = overgroup_kinds(q, 4)
    no_extension = []
    for kind in kinds:
        H4 = build_overgroup(kind, p, q)
        skes = enumerate_skes_genus0(H4, [2, 2, 2, p], bound)
        inv = involutions(H4)
        generating = sum(1 for triple in product(inv, repeat=3) if generates(H4, triple))
        no_extension.append(ExtensionVerdict(
            family='(4,0)',
            kind=str(kind),
            signature=str(Signature(0, (2, 2, 2, p))),
            ske_count=len(skes),
            witness=_describe(H4, skes[0]) if skes else None,
            details={'involutions': len(inv), 'generating_involution_triples': generating},
        ))
        logger.info(f"{kind}: {len(skes)} skes of (0; 2,2,2,{p}), {generating} generating involution triples")
    if missing:
        logger.info(f"Kinds not constructible for q={q}: {', '.join(str(k) for k in missing)}")
    return extension, no_extension, [str(k) for k in missing]


def extension_sweep(p, q):
    """すべての (L, N) について制限が属する (4,0) 軌道を調べる"""
    G = make_group(p, q)
    H = build_overgroup('CqRtimesC2p', p, q)
    orbit_list = orbits(FamilyParams(p, q, 4, 0), G)
    rows = []
    for L in range(q):
        for N in range(1, p):
            _, v = index2_restriction(G, H, L, N)
            rows.append({'L': L, 'N': N, 'orbit_id': _orbit_id(v, orbit_list)})
    hits = sorted({row['orbit_id'] for row in rows})
    logger.info(f"Extension sweep at (p,q)=({p},{q}) hits {len(hits)} of {len(orbit_list)} orbits")
    return {'p': p, 'q': q, 'orbit_count': len(orbit_list), 'hits': hits, 'pairs': rows}


# --- 極大性 ---

SINGERMAN_SOURCE = "D. Singerman, Finitely maximal Fuchsian groups, J. London Math. Soc. (2) 6 (1972) 29-38"


def singerman_candidates(periods):
    """有限指数の拡張候補（必要な行のみ、各行に出典）"""
    periods = tuple(periods)
    counts = {}
    for k in periods:
        counts[k] = counts.get(k, 0) + 1
    rows = []
    if len(periods) == 4:
        if len(counts) == 2 and sorted(counts.values()) == [2, 2]:
            t, u = list(counts)
            rows.append({'shape': '(0; t,t,u,u)', 'extension': f"(0; 2,2,{t},{u})", 'index': 2})
        elif len(counts) == 1:
            t = periods[0]
            rows.append({'shape': '(0; t,t,t,t)', 'extension': f"(0; 2,2,{t},{t})", 'index': 2})
            rows.append({'shape': '(0; t,t,t,t)', 'extension': f"(0; 2,2,2,{t})", 'index': 4})
    elif len(periods) == 3:
        if len(counts) == 2:
            t = next(k for k, c in counts.items() if c == 2)
            u = next(k for k, c in counts.items() if c == 1)
            rows.append({'shape': '(0; t,t,u)', 'extension': f"(0; 2,{t},2{u})", 'index': 2})
        elif len(counts) == 1:
            t = periods[0]
            rows.append({'shape': '(0; t,t,t)', 'extension': f"(0; 3,3,{t})", 'index': 3})
            rows.append({'shape': '(0; t,t,t)', 'extension': f"(0; 2,3,2{t})", 'index': 6})
    for row in rows:
        row['source'] = SINGERMAN_SOURCE
    return rows


def maximality(periods):
    rows = singerman_candidates(periods)
    return {'verdict': 'extension candidate' if rows else 'maximal', 'rows': rows, 'source': SINGERMAN_SOURCE}


def maximality_31():
    """s_{3,1} は極大、s_{2,2} と s_{4,0} は拡張候補を持つ"""
    return {
        's_{3,1}': maximality(('p', 'p', 'p', 'q')),
        's_{2,2}': maximality(('p', 'p', 'q', 'q')),
        's_{4,0}': maximality(('p', 'p', 'p', 'p')),
        's_{2,1}': maximality(('p', 'p', 'q')),
        's_{3,0}': maximality(('p', 'p', 'p')),
    }


# --- 準プラトン曲面 ---

def _quasiplatonic_data(family, p, q, r):
    """(拡大群の種類, Θ の語, 周期, 制限の語, 期待される像の語)"""
    inv_r2 = pow(r, -2, q)
    if family == (2, 2):
        return (
            'CqRtimesC2p',
            ['a', 'c', 'c^-1 a^-1'],
            [q, 2 * p, 2 * p],
            ['z3^-2', 'z1 z3^2 z1^-1', 'z1', 'z3^-2 z1^-1 z3^2'],
            [f"a^{(1 - r) % q} c^2", f"a^{(1 + (r - 2) * inv_r2) % q} c^-2", "a", f"a^{(-r * r) % q}"],
        )
    if family == (4, 0):
        return (
            'CqRtimesC2p_Times_C2',
            ['t a', 'a^-1 c', 'c^-1 t'],
            [2, 2 * p, 2 * p],
            ['z3^2', 'z1 z2^2 z1', 'z1 z3^2 z1', 'z2^2'],
            ["c^-2", f"a^{(r * r - r) % q} c^2", f"a^{(inv_r2 - 1) % q} c^-2", f"a^{(r - 1) % q} c^2"],
        )
    if family == (3, 1):
        return (
            'DirectProductC2',
            ['a^-1 b', 'b^-1 t', 't a'],
            [p, 2 * p, 2 * q],
            ['z1', 'z2^2', 'z3 z1 z3^-1', 'z3^2'],
            ["a^-1 b", "b^-2", "b a^-1", "a^2"],
        )
    raise UnknownFamily(f"No quasiplatonic datum for family {family}")


def quasiplatonic(family, p, q, with_orbit=True):
    """三角群からの ske Θ を構成し、制限が族の生成ベクトルになることを検証"""
    family = tuple(family)
    G = make_group(p, q)
    kind, theta_words, periods, words, expected = _quasiplatonic_data(family, p, q, G.r)
    H = build_overgroup(kind, p, q)
    theta = [Word.parse(w).evaluate(H) for w in theta_words]

    violations = check_ske(H, theta, periods)
    if violations:
        raise RestrictionMismatch(f"Theta on {kind} is not a ske: {violations}")

    images = restrict(H, theta, words)
    for word, image, exp in zip(words, images, expected):
        if image != Word.parse(exp).evaluate(H):
            logger.error(f"Theta({word}) = {H.describe(image)} differs from {exp}")
            raise RestrictionMismatch(f"Theta({word}) does not equal {exp} on {kind}")

    entries = _pull_back(G, H, images)
    n, m = family
    v = GeneratingVector(G, tuple(entries[:n]), tuple(entries[n:]))
    report = validate(v)
    if not report.ok:
        raise RestrictionMismatch(f"Restricted tuple is not a valid {family} vector: {report.violations}")
    if subgroup_generated(H, images) != sorted(embedding(G, H)):
        raise RestrictionMismatch("Restricted images do not generate the embedded copy of G")

    fp = FamilyParams(p, q, n, m)
    genus = genus_formula(fp)
    overgroup_genus = rh_genus(Signature(0, periods), H.size)
    if overgroup_genus != genus:
        raise RestrictionMismatch(f"Genus on {kind} is {overgroup_genus}, family genus is {genus}")

    nf = normal_form(v)
    result = {
        'family': fp.label,
        'kind': kind,
        'signature': str(Signature(0, periods)),
        'theta': theta_words,
        'restriction_words': words,
        'images': expected,
        'vector': v.to_dict(),
        'template': nf.template,
        'params': list(nf.params),
        'genus': genus,
        'overgroup_genus': overgroup_genus,
    }
    if with_orbit:
        result['orbit_id'] = _orbit_id(v, orbits(fp, G))
    logger.info(f"Quasiplatonic datum for {fp.label} at (p,q)=({p},{q}) restricts to {nf.template}{nf.params}")
    return result


def hyperelliptic_quotient_check(p, q, L=0, N=1):
    """X = S/<a> の種数と X → S/<a,t> の分岐点数"""
    H = build_overgroup('CqRtimesC2p', p, q)
    theta = index2_theta(H, L, N)
    a, t = H.labels['a'], H.labels['t']
    normal = subgroup_generated(H, [a])
    dihedral = subgroup_generated(H, [a, t])
    genus_x = quotient_genus(H, theta, normal)
    branches = branch_count(H, theta, normal, dihedral)
    return {
        'p': p,
        'q': q,
        'genus_X': genus_x,
        'genus_X_over_J': quotient_genus(H, theta, dihedral),
        'branch_count': branches,
        'expected_genus': p - 1,
        'expected_branch_count': 2 * p,
        'hyperelliptic': branches == 2 * genus_x + 2,
    }
