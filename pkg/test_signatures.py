#!/usr/bin/env python3
"""
シグネチャと種数の計算テスト
"""

import sys

from sympy import Rational

from pqcovers.errors import InvalidSignature, NoAction, NonIntegralGenus
from pqcovers.groups import make_group, subgroup_generated
from pqcovers.signatures import (
    FamilyParams, Signature, hyperbolic_area, genus_formula, quotient_genera, quotient_genus,
    rh_genus, teich_dimension,
)
from pqcovers.vectors import canonical

# (p, q, n, m) -> (g, g_X, g_Y)
EXPECTED = {
    (3, 7, 2, 2): (12, 0, 4),
    (3, 7, 4, 0): (8, 2, 2),
    (3, 7, 3, 1): (10, 1, 3),
    (3, 7, 2, 1): (3, 0, 1),
    (3, 7, 3, 0): (1, 1, 0),
    (5, 11, 2, 2): (40, 0, 8),
}


def test_genus_values():
    for (p, q, n, m), (g, g_x, g_y) in EXPECTED.items():
        fp = FamilyParams(p, q, n, m)
        assert genus_formula(fp) == g, fp
        assert quotient_genera(fp) == (g_x, g_y), fp


def test_genus_matches_riemann_hurwitz():
    for p, q in ((3, 7), (3, 13), (5, 11)):
        for total in range(3, 7):
            for n in range(2, total + 1):
                fp = FamilyParams(p, q, n, total - n)
                if hyperbolic_area(fp.signature) == 0:
                    # p = 3 の (3,0) はトーラス
                    assert genus_formula(fp) == 1
                    continue
                assert genus_formula(fp) == rh_genus(fp.signature, p * q)


def test_decomposition_identity():
    """g = g_X + p g_Y"""
    for p, q in ((3, 7), (5, 11), (7, 29)):
        for n in range(2, 6):
            for m in range(0, 4):
                if n + m < 3:
                    continue
                fp = FamilyParams(p, q, n, m)
                g_x, g_y = quotient_genera(fp)
                assert genus_formula(fp) == g_x + p * g_y


def test_hyperbolic_area():
    assert hyperbolic_area(Signature(0, (2, 3, 7))) == Rational(1, 42)
    assert rh_genus(Signature(0, (2, 3, 7)), 168) == 3
    assert hyperbolic_area(Signature(0, (3, 3, 7))) == Rational(4, 21)
    assert hyperbolic_area(Signature(1, ())) == 0


def test_non_integral_genus():
    """周期は |G| を割り面積も正だが、種数が 3/2 になる"""
    try:
        rh_genus(Signature(0, (2, 2, 2, 3)), 6)
    except NonIntegralGenus:
        return
    raise AssertionError("NonIntegralGenus was not raised")


def test_rh_genus_preconditions():
    """周期が |G| を割らない、または面積が正でないシグネチャは拒否"""
    cases = [
        (Signature(0, (3,) * 6), 4),
        (Signature(0, (2, 3, 7)), 5),
        (Signature(0, (3, 3, 3)), 21),
        (Signature(1, ()), 21),
    ]
    for sig, order in cases:
        try:
            rh_genus(sig, order)
        except InvalidSignature:
            continue
        raise AssertionError(f"InvalidSignature was not raised for {sig}, |G| = {order}")


def test_no_action():
    """n < 2 では作用がない"""
    for n, m in ((1, 2), (0, 3), (1, 3)):
        try:
            genus_formula(FamilyParams(3, 7, n, m))
        except NoAction:
            continue
        raise AssertionError(f"NoAction was not raised for ({n},{m})")


def test_invalid_signature():
    for build in (lambda: Signature(0, (1, 3, 7)), lambda: Signature(-1, (3, 3, 3)),
                  lambda: FamilyParams(3, 7, 1, 1)):
        try:
            build()
        except InvalidSignature:
            continue
        raise AssertionError("InvalidSignature was not raised")


def test_signature_format():
    fp = FamilyParams(3, 7, 2, 2)
    assert str(fp.signature) == "(0; 3, 3, 7, 7)"
    assert fp.label == "(2,2)"
    assert teich_dimension(fp.signature) == 1
    assert Signature(0, (7, 3, 3, 7)).same_multiset(fp.signature)


def test_quotient_genus_from_vector():
    """剰余類上の置換から求めた種数が閉形式と一致"""
    for n, m in ((2, 2), (4, 0), (3, 1), (2, 3), (5, 0)):
        fp = FamilyParams(3, 7, n, m)
        G = make_group(3, 7)
        v = canonical(fp, G)
        N = subgroup_generated(G, [G.labels['a']])
        H = subgroup_generated(G, [G.labels['b']])
        assert (quotient_genus(G, v.entries, N), quotient_genus(G, v.entries, H)) == quotient_genera(fp)
        assert quotient_genus(G, v.entries, [0]) == genus_formula(fp)
        assert quotient_genus(G, v.entries, list(range(G.size))) == 0


def main():
    """メインテスト関数"""
    print("=== シグネチャ テスト ===")

    tests = [
        ("種数の値", test_genus_values),
        ("Riemann-Hurwitz との一致", test_genus_matches_riemann_hurwitz),
        ("g = g_X + p g_Y", test_decomposition_identity),
        ("双曲面積", test_hyperbolic_area),
        ("整数でない種数", test_non_integral_genus),
        ("Riemann-Hurwitz の前提条件", test_rh_genus_preconditions),
        ("作用なし", test_no_action),
        ("不正なシグネチャ", test_invalid_signature),
        ("表示形式", test_signature_format),
        ("生成ベクトルからの商の種数", test_quotient_genus_from_vector),
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
