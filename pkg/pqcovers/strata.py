"""
位相的同値（組紐変換と自己同型によるねじれ）と同値類（ストラタ候補）の計算
"""

import csv
import io
import json
import logging
from collections import deque
from dataclasses import dataclass

from .errors import IndexOutOfRange, NormalFormNotFound
from .groups import aut_generators, automorphisms
from .signatures import genus_formula
from .vectors import GeneratingVector, enumerate_vectors

logger = logging.getLogger(__name__)

TEMPLATES = {
    (2, 2): 'theta_{l,n}',
    (4, 0): 'theta_{n1,n2,n3,l3}',
    (3, 1): 'theta_{l,n1,n2}',
}

REPORT_COLUMNS = ['family', 'p', 'q', 'orbit_id', 'orbit_size', 'template', 'params', 'genus']


def braid(G, entries, i):
    """Φ_i: (u, w) ↦ (w, w^-1 u w)（i は1始まり）"""
    entries = tuple(entries)
    if not 1 <= i < len(entries):
        raise IndexOutOfRange(f"Braid index {i} outside 1..{len(entries) - 1}")
    u, w = entries[i - 1], entries[i]
    moved = G.mul(G.mul(G.inv(w), u), w)
    return entries[:i - 1] + (w, moved) + entries[i + 1:]


def braid_inverse(G, entries, i):
    """Φ_i^-1: (u, w) ↦ (u w u^-1, u)"""
    entries = tuple(entries)
    if not 1 <= i < len(entries):
        raise IndexOutOfRange(f"Braid index {i} outside 1..{len(entries) - 1}")
    u, w = entries[i - 1], entries[i]
    return entries[:i - 1] + (G.conj(u, w), u) + entries[i + 1:]


def aut_twist(phi, entries):
    return tuple(phi(e) for e in entries)


def orbit_of(G, entries, aut_gens):
    """組紐変換と自己同型の生成系による軌道（周期の並びが混ざった組も含む）"""
    start = tuple(entries)
    seen = {start}
    queue = deque([start])
    length = len(start)
    while queue:
        v = queue.popleft()
        neighbours = [braid(G, v, i) for i in range(1, length)]
        neighbours += [aut_twist(phi, v) for phi in aut_gens]
        for w in neighbours:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


@dataclass
class Orbit:
    id: int
    representative: GeneratingVector
    size: int
    total_size: int
    members: frozenset

    def to_dict(self):
        return {
            'id': self.id,
            'representative': self.representative.to_dict(),
            'size': self.size,
            'total_size': self.total_size,
        }


def _sorted_layout(G, n):
    """周期が p,…,p, q,…,q の順に並ぶ組か判定する関数"""
    p = G.p

    def check(t):
        return all((G.orders[e] == p) == (i < n) for i, e in enumerate(t))

    return check


def orbits(fp, group=None, vectors=None, bound=None, workers=1):
    """全生成ベクトルを Aut(G) × 組紐群 の軌道に分割"""
    vectors = vectors if vectors is not None else enumerate_vectors(fp, group, bound, workers)
    if not vectors:
        return []
    G = vectors[0].group
    gens = aut_generators(automorphisms(G))
    in_layout = _sorted_layout(G, fp.n)

    assigned = set()
    found = []
    for v in vectors:
        t = v.entries
        if t in assigned:
            continue
        members = orbit_of(G, t, gens)
        layout = sorted(m for m in members if in_layout(m))
        assigned.update(layout)
        rep = layout[0]
        found.append((rep, len(layout), len(members), frozenset(members)))

    found.sort(key=lambda item: item[0])
    result = [
        Orbit(i + 1, GeneratingVector(G, rep[:fp.n], rep[fp.n:]), size, total, members)
        for i, (rep, size, total, members) in enumerate(found)
    ]
    logger.info(f"Found {len(result)} orbits for {fp.label} at (p,q)=({fp.p},{fp.q})")
    return result


# --- 標準形 ---

@dataclass(frozen=True)
class NormalForm:
    template: str
    params: tuple
    vector: GeneratingVector

    def to_dict(self):
        return {'template': self.template, 'params': list(self.params),
                'vector': self.vector.to_dict()}


def match_template(G, family, t):
    """組が標準形の型に一致すればパラメータを返す"""
    p, q = G.p, G.q
    c = [G.coords(e) for e in t]
    if family == (2, 2):
        (l, n), (l2, n2), (l3, n3), (l4, n4) = c
        if (l4, n4) == (1, 0) and l2 == 0 and n2 == (-n) % p and n3 == 0 and l3 == (-l - 1) % q:
            return (l, n)
    elif family == (4, 0):
        (l1, n1), (l2, n2), (l3, n3), (l4, n4) = c
        if l1 == 0 and l2 == 1:
            expected = (-pow(G.r, -(n2 + n3), q) - l3 * pow(G.r, -n3, q)) % q
            if l4 == expected and n4 == (-n1 - n2 - n3) % p:
                return (n1, n2, n3, l3)
    elif family == (3, 1):
        (l1, n1), (l2, n2), (l3, n3), (l4, n4) = c
        if (l4, n4) == (1, 0) and l3 == 0 and n3 == (-n1 - n2) % p:
            if l1 == (-1 - l2 * pow(G.r, n1, q)) % q:
                return (l2, n1, n2)
    return None


def normal_form(v, members=None, predicate=None):
    """軌道内で標準形の型に一致する組を探す（辞書式最小のもの）"""
    G = v.group
    family = (len(v.x), len(v.y))
    if family not in TEMPLATES:
        raise NormalFormNotFound(f"No normal-form template for family {family}")
    if members is None:
        members = orbit_of(G, v.entries, aut_generators(automorphisms(G)))

    in_layout = _sorted_layout(G, family[0])
    for t in sorted(members):
        if not in_layout(t):
            continue
        params = match_template(G, family, t)
        if params is None or (predicate is not None and not predicate(params)):
            continue
        return NormalForm(TEMPLATES[family], params, GeneratingVector(G, t[:family[0]], t[family[0]:]))

    logger.error(f"No {TEMPLATES[family]} normal form in the orbit of {v}")
    raise NormalFormNotFound(f"Orbit of {v} has no tuple matching {TEMPLATES[family]}")


# --- レポート ---

def stratum_report(fp, group=None, bound=None, workers=1):
    """軌道ごとの行（family, p, q, orbit_id, orbit_size, template, params, genus）"""
    genus = genus_formula(fp) if fp.n >= 2 else None
    rows = []
    for orbit in orbits(fp, group, bound=bound, workers=workers):
        template, params = None, None
        if (fp.n, fp.m) in TEMPLATES:
            nf = normal_form(orbit.representative, orbit.members)
            template, params = nf.template, list(nf.params)
        rows.append({
            'family': fp.label,
            'p': fp.p,
            'q': fp.q,
            'orbit_id': orbit.id,
            'orbit_size': orbit.size,
            'template': template,
            'params': params,
            'genus': genus,
        })
    return rows


def report_json(rows):
    return json.dumps(rows, sort_keys=True, indent=2)


def report_csv(rows, columns=REPORT_COLUMNS):
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator='\n')
    writer.writeheader()
    for row in rows:
        flat = dict(row)
        if isinstance(flat.get('params'), list):
            flat['params'] = " ".join(str(x) for x in flat['params'])
        writer.writerow({k: '' if flat.get(k) is None else flat[k] for k in columns})
    return buffer.getvalue()
