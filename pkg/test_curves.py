#!/usr/bin/env python3
"""
平面モデル y^q = f(x) と自己同型の数値テスト
"""

import sys

import numpy as np

from pqcovers.curves import (
    branch_data, build_hyperelliptic_40, build_model, exact_anchor_check, gonality_flag,
    hyperelliptic_equation, model_automorphisms, model_equation, random_lambdas, relabel,
    sample_points, verify_cover_identity, verify_relation,
)
from pqcovers.errors import BadLambda, BadMu
from pqcovers.signatures import FamilyParams

TOLERANCE = 1e-8


def test_model_exponents():
    """e = (1 + r + … + r^{p-1}) / q"""
    model = build_model(3, 7)
    assert (model.r, model.e) == (2, 1)
    assert model.exponents == [1, 2, 4]
    assert model.degree() == 7

    model = build_model(5, 11)
    assert (model.r, model.e) == (3, 11)
    assert model.m == 1


def test_cover_identity():
    """φ(x)^q f(x)^r = f(ωx) を標本点で確認"""
    cases = [(3, 7, []), (3, 7, [2.0]), (3, 7, [0.5 + 0.3j, 3.0]), (5, 11, []), (3, 13, [1.7])]
    for p, q, lambdas in cases:
        model = build_model(p, q, lambdas)
        assert verify_cover_identity(model, sample_count=50, seed=1) < TOLERANCE, (p, q, lambdas)


def test_cover_identity_random_lambdas():
    lambdas = random_lambdas(3, 2, seed=3)
    model = build_model(3, 7, lambdas)
    assert model.m == 3
    assert verify_cover_identity(model, sample_count=50, seed=3) < TOLERANCE


def test_cover_identity_many_configurations():
    """m ∈ {1, 2, 3} の無作為な λ 20 通り"""
    for seed in range(20):
        lambdas = random_lambdas(3, seed % 3, seed=seed)
        model = build_model(3, 7, lambdas)
        assert verify_cover_identity(model, sample_count=20, seed=seed) < TOLERANCE, (seed, lambdas)


def test_exact_anchor():
    for p, q in ((3, 7), (5, 11), (3, 13)):
        assert exact_anchor_check(build_model(p, q))
    assert exact_anchor_check(build_model(3, 7, [2.0])) is None


def test_relation():
    """B A = A^r B、B の像は曲線上、B^p は x を固定、A^q = 1"""
    model = build_model(3, 7, [2.0])
    result = verify_relation(model, sample_count=40, seed=2)
    for name, value in result.items():
        assert value < TOLERANCE, (name, value)


def test_automorphisms_on_points():
    model = build_model(3, 7)
    A, B = model_automorphisms(model)
    x = sample_points(model, 5, seed=4)
    y = np.exp(np.log(x - 1) / 7)
    x1, y1 = A(x, y)
    assert np.allclose(x1, x)
    assert np.allclose(y1, model.xi * y)
    x2, _ = B(x, y)
    assert np.allclose(x2, model.omega * x)


def test_bad_lambda():
    omega = np.exp(2j * np.pi / 3)
    cases = [[0], [omega], [2.0, 2.0 * omega]]
    for lambdas in cases:
        try:
            build_model(3, 7, lambdas)
        except BadLambda:
            continue
        raise AssertionError(f"BadLambda was not raised for {lambdas}")


def test_hyperelliptic_model():
    model = build_hyperelliptic_40(3, 2.0)
    assert model.genus == 2
    assert len(model.branch_points) == 6
    assert hyperelliptic_equation(model) == "y^2 = (x^3 - 1)(x^3 - 8)"
    for mu in (0, 1, np.exp(2j * np.pi / 3)):
        try:
            build_hyperelliptic_40(3, mu)
        except BadMu:
            continue
        raise AssertionError(f"BadMu was not raised for {mu}")


def test_branch_data():
    model = build_model(3, 7, [2.0])
    rows = branch_data(model)
    assert [row['marking'] for row in rows] == [3, 3, 7, 7]
    assert rows[2]['value'] == [1.0, 0.0]
    assert rows[3]['value'] == [8.0, 0.0]


def test_equation_and_relabel():
    model = build_model(3, 7)
    assert model_equation(model) == "y^7 = (x - 1)^1 (x - w^1)^2 (x - w^2)^4"
    relabeled = relabel(model, 2)
    assert relabeled.omega_power == 2
    assert np.isclose(relabeled.omega, model.omega ** 2)
    # 分岐データは ω の取り方によらない
    assert branch_data(relabel(build_model(3, 7, [2.0]), 2)) == branch_data(build_model(3, 7, [2.0]))


def test_gonality_flag():
    assert gonality_flag(FamilyParams(3, 7, 2, 2)) == {'cyclic_q_gonal': True, 'g_X': 0}
    assert gonality_flag(FamilyParams(3, 7, 4, 0)) == {'cyclic_q_gonal': False, 'g_X': 2}


def main():
    """メインテスト関数"""
    print("=== 平面モデル テスト ===")

    tests = [
        ("指数と e", test_model_exponents),
        ("被覆の恒等式", test_cover_identity),
        ("ランダムな λ", test_cover_identity_random_lambdas),
        ("無作為な λ の20通り", test_cover_identity_many_configurations),
        ("x = 0 での厳密な確認", test_exact_anchor),
        ("関係式 BA = A^r B", test_relation),
        ("点への作用", test_automorphisms_on_points),
        ("不正な λ", test_bad_lambda),
        ("超楕円モデル", test_hyperelliptic_model),
        ("分岐データ", test_branch_data),
        ("方程式と再ラベル付け", test_equation_and_relabel),
        ("巡回 q-gonal 判定", test_gonality_flag),
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
