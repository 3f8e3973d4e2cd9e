#!/usr/bin/env python3
"""
生成ベクトルの検証・構成・列挙テスト
"""

import sys

from pqcovers.errors import NoAction, SearchSpaceTooLarge
from pqcovers.groups import make_group
from pqcovers.signatures import FamilyParams, genus_formula, hyperbolic_area, rh_genus
from pqcovers.vectors import (
    GeneratingVector, canonical, enumerate_vectors, exists, realized_signature, search_space,
    validate,
)


def test_canonical_vectors_are_valid():
    """すべての (n, m) の偶奇の組み合わせで標準ベクトルが有効"""
    for p, q in ((3, 7), (5, 11)):
        G = make_group(p, q)
        for total in range(3, 9):
            for n in range(2, total + 1):
                fp = FamilyParams(p, q, n, total - n)
                v = canonical(fp, G)
                report = validate(v)
                assert report.ok, (fp, report.violations)
                assert realized_signature(v).same_multiset(fp.signature)


def test_existence():
    assert exists(FamilyParams(3, 7, 2, 2)).exists
    assert exists(FamilyParams(3, 7, 1, 2)).reason == "product cannot be identity"
    assert exists(FamilyParams(3, 7, 0, 3)).reason == "b not in image"
    try:
        canonical(FamilyParams(3, 7, 1, 3))
    except NoAction:
        return
    raise AssertionError("NoAction was not raised")


def test_existence_matches_enumeration():
    """n + m ∈ {3, 4, 5} で列挙が空でないことと存在判定が一致し、標準ベクトルは列挙に含まれる"""
    G = make_group(3, 7)
    for total in (3, 4, 5):
        for n in range(total + 1):
            fp = FamilyParams(3, 7, n, total - n)
            vectors = enumerate_vectors(fp, G)
            assert bool(vectors) == exists(fp).exists, fp
            if vectors:
                assert canonical(fp, G).entries in {v.entries for v in vectors}


def test_enumerated_vectors_have_family_genus():
    """列挙した全ベクトルの実際の位数から Riemann-Hurwitz で求めた種数が閉形式と一致"""
    G = make_group(3, 7)
    for n, m in ((2, 1), (3, 0), (2, 2), (3, 1), (4, 0), (2, 3), (3, 2), (4, 1), (5, 0)):
        fp = FamilyParams(3, 7, n, m)
        genus = genus_formula(fp)
        flat = hyperbolic_area(fp.signature) == 0
        if flat:
            # (0; 3,3,3) はトーラス
            assert genus == 1
        checked = set()
        for v in enumerate_vectors(fp, G):
            sig = realized_signature(v)
            assert sig.same_multiset(fp.signature), v
            periods = tuple(sorted(sig.periods))
            if flat or periods in checked:
                continue
            assert rh_genus(sig, G.size) == genus, (fp, v)
            checked.add(periods)


def test_validation_reports_all_violations():
    G = make_group(3, 7)
    a, b = G.labels['a'], G.labels['b']
    v = GeneratingVector(G, (a, b), (b,))
    kinds = [violation['kind'] for violation in validate(v).violations]
    assert kinds == ['WrongOrder', 'WrongOrder', 'ProductNotIdentity']
    assert validate(v).first == {'kind': 'WrongOrder', 'index': 1}

    # <b> のみ: 全射でない
    bi = G.inv(b)
    v = GeneratingVector(G, (b, bi, b, bi), ())
    kinds = [violation['kind'] for violation in validate(v).violations]
    assert kinds == ['NotSurjective']

    # (b, b^-1) と空の y: 全射でなく、項も足りない
    v = GeneratingVector(G, (b, bi), ())
    kinds = [violation['kind'] for violation in validate(v).violations]
    assert kinds == ['NotSurjective', 'Underdetermined']


def test_conjugation_preserves_validity():
    """同時共役で有効性は保たれる"""
    fp = FamilyParams(3, 7, 3, 1)
    G = make_group(3, 7)
    v = canonical(fp, G)
    for g in range(G.size):
        w = GeneratingVector(G, tuple(G.conj(g, e) for e in v.x), tuple(G.conj(g, e) for e in v.y))
        assert validate(w).ok


def test_enumerate_22():
    """(3,7) の (2,2) 族は 504 個"""
    fp = FamilyParams(3, 7, 2, 2)
    vectors = enumerate_vectors(fp)
    assert len(vectors) == 504
    assert all(validate(v).ok for v in vectors[::25])
    assert [v.entries for v in vectors] == sorted(v.entries for v in vectors)


def test_enumerate_independent_of_root():
    """r を別の原始根に替えても個数は同じ"""
    fp = FamilyParams(3, 7, 2, 2)
    assert len(enumerate_vectors(fp, make_group(3, 7, 4))) == 504


def test_enumerate_parallel_matches():
    fp = FamilyParams(3, 7, 2, 2)
    serial = enumerate_vectors(fp)
    parallel = enumerate_vectors(fp, workers=2)
    assert [v.entries for v in serial] == [v.entries for v in parallel]


def test_search_bound():
    fp = FamilyParams(3, 7, 2, 2)
    G = make_group(3, 7)
    assert search_space(G, [3, 3, 7, 7]) == 14 * 14 * 6
    try:
        enumerate_vectors(fp, G, bound=100)
    except SearchSpaceTooLarge:
        return
    raise AssertionError("SearchSpaceTooLarge was not raised")


def test_serialization():
    fp = FamilyParams(3, 7, 3, 1)
    v = canonical(fp)
    data = v.to_dict()
    assert set(data) == {'p', 'q', 'x', 'y'}
    assert len(data['x']) == 3 and len(data['y']) == 1
    assert GeneratingVector.from_dict(data, v.group) == v


def main():
    """メインテスト関数"""
    print("=== 生成ベクトル テスト ===")

    tests = [
        ("標準ベクトル", test_canonical_vectors_are_valid),
        ("存在判定", test_existence),
        ("存在判定と列挙の一致", test_existence_matches_enumeration),
        ("列挙したベクトルの種数", test_enumerated_vectors_have_family_genus),
        ("違反の報告", test_validation_reports_all_violations),
        ("同時共役", test_conjugation_preserves_validity),
        ("(2,2) の列挙", test_enumerate_22),
        ("原始根への非依存性", test_enumerate_independent_of_root),
        ("並列列挙", test_enumerate_parallel_matches),
        ("探索上限", test_search_bound),
        ("辞書形式", test_serialization),
    ]

    passed = 0
    total = len(tests)

    for test_name, test_func in tests:
        print(f"\n--- {test_name} ---")
        try:
            test_func()
            print(f"✓ {test_name} 成功")
            passed += 1
        except Exception as e:
            print(f"✗ {test_name} 失敗: {e}")

    print(f"\n=== テスト結果: {passed}/{total} 成功 ===")
    return passed == total


if __name__ == '__main__':
    sys.exit(0 if main() else 1)
