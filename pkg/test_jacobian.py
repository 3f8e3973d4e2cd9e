#!/usr/bin/env python3
"""
Jacobian の群代数分解のテスト
"""

import sys

from pqcovers.groups import make_group, subgroup_generated
from pqcovers.jacobian import (
    _factor_data, closed_form_dims, decomposition_report, factor_dims, proof_form_dim_b2,
    quotient_multiplicities,
)
from pqcovers.signatures import FamilyParams, genus_formula, quotient_genera
from pqcovers.vectors import canonical, enumerate_vectors


def test_factor_dims_closed_form():
    """標準ベクトルでの dim B1, dim B2 が閉形式と一致"""
    for p, q in ((3, 7), (5, 11)):
        G = make_group(p, q)
        data = _factor_data(G)
        for n in range(2, 6):
            for m in range(0, 4):
                if n + m < 3:
                    continue
                fp = FamilyParams(p, q, n, m)
                dims = factor_dims(fp, canonical(fp, G), factor_data=data)
                assert dims == closed_form_dims(fp), fp
                assert dims[0] + p * dims[1] == genus_formula(fp)


def test_known_values():
    assert closed_form_dims(FamilyParams(5, 11, 2, 2)) == (0, 8)
    assert closed_form_dims(FamilyParams(3, 7, 2, 2)) == (0, 4)


# p = 3, q = 7 で n + m <= 5 の全ての族
CELLS_3_7 = ((2, 1), (3, 0), (2, 2), (3, 1), (4, 0), (2, 3), (3, 2), (4, 1), (5, 0))


def test_factor_dims_independent_of_vector():
    """列挙したどのベクトルでも次元は同じ（シグネチャのみに依存）"""
    G = make_group(3, 7)
    data = _factor_data(G)
    cache = {}
    for n, m in CELLS_3_7:
        fp = FamilyParams(3, 7, n, m)
        expected = closed_form_dims(fp)
        vectors = enumerate_vectors(fp, G)
        assert vectors, fp
        for v in vectors:
            assert factor_dims(fp, v, factor_data=data, fixed_cache=cache) == expected, v
    # 固定部分群は位数 3 の 7 個と位数 7 の 1 個
    assert len(cache) == len(data) * 8


def test_second_form_of_b2():
    for p, q in ((3, 7), (5, 11), (3, 13)):
        for n in range(2, 6):
            for m in range(0, 4):
                if n + m < 3:
                    continue
                fp = FamilyParams(p, q, n, m)
                assert proof_form_dim_b2(fp) == quotient_genera(fp)[1]


def test_quotient_multiplicities():
    """dim J(S/K) = Σ n_j^K dim B_j"""
    fp = FamilyParams(3, 7, 2, 2)
    G = make_group(3, 7)
    dims = closed_form_dims(fp)
    N = subgroup_generated(G, [G.labels['a']])
    H = subgroup_generated(G, [G.labels['b']])
    assert quotient_multiplicities(G, N, dims) == ((1, 0), 0)
    assert quotient_multiplicities(G, H, dims) == ((0, 1), 4)
    assert quotient_multiplicities(G, [0], dims) == ((1, 3), 12)


def test_decomposition_report():
    fp = FamilyParams(3, 7, 4, 0)
    report = decomposition_report(fp, canonical(fp))
    data = report.to_dict()
    assert data['dimB0'] == 0
    assert (data['dimB1'], data['dimB2']) == (2, 2)
    assert data['genus'] == 8
    assert data['check'] == "g = dimB1 + p*dimB2 = 8 OK"
    assert data['rh_quotient_genera'] == {'X': 2, 'Y': 2}
    assert data['subgroup_table']['1']['predicted_dim'] == 8
    assert data['subgroup_table']['G']['predicted_dim'] == 0


def main():
    """メインテスト関数"""
    print("=== Jacobian の分解 テスト ===")

    tests = [
        ("閉形式との一致", test_factor_dims_closed_form),
        ("既知の値", test_known_values),
        ("ベクトルへの非依存性", test_factor_dims_independent_of_vector),
        ("dim B2 のもう一つの形", test_second_form_of_b2),
        ("商の重複度", test_quotient_multiplicities),
        ("分解レポート", test_decomposition_report),
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
