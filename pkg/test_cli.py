#!/usr/bin/env python3
"""
コマンドラインインターフェースのテスト
"""

import io
import json
import sys
import tempfile
from contextlib import redirect_stderr, redirect_stdout
from unittest import mock

from pqcovers import cli
from pqcovers.errors import NonIntegralGenus
from pqcovers.strata import REPORT_COLUMNS


def run_cli(*argv):
    """(終了コード, 標準出力, 標準エラー)"""
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = cli.main(list(argv))
    return code, out.getvalue(), err.getvalue()


def test_genus_command():
    code, out, _ = run_cli('genus', '--p', '3', '--q', '7', '--n', '2', '--m', '2', '--no-cache')
    assert code == 0
    data = json.loads(out)
    assert (data['genus'], data['gX'], data['gY'], data['dim']) == (12, 0, 4, 1)
    assert data['signature'] == "(0; 3, 3, 7, 7)"


def test_no_action_exits_zero():
    code, out, _ = run_cli('strata', '--p', '3', '--q', '7', '--n', '1', '--m', '2', '--no-cache')
    assert code == 0
    data = json.loads(out)
    assert data['action'] is False
    assert data['message'] == "no action (n >= 2 required)"
    assert data['reason'] == "product cannot be identity"


def test_usage_errors():
    """入力エラーは終了コード1と JSON のエラー本文"""
    cases = [
        (('genus', '--p', '4', '--q', '7', '--n', '2', '--m', '2', '--no-cache'), 'NotPrime'),
        (('genus', '--p', '3', '--q', '11', '--n', '2', '--m', '2', '--no-cache'), 'DivisibilityFailure'),
        (('genus', '--p', '3', '--q', '7', '--no-cache'), 'UsageError'),
        (('extensions', '--family', '2,3', '--no-cache'), 'UnknownFamily'),
        (('model', '--lambda', '0', '--no-cache'), 'BadLambda'),
        (('model', '--m', '0', '--no-cache'), 'UsageError'),
        (('model', '--m', '-2', '--no-cache'), 'UsageError'),
        (('bogus',), 'UsageError'),
    ]
    for argv, error in cases:
        code, _, err = run_cli(*argv)
        assert code == 1, argv
        body = json.loads(err.strip().split("\n")[-1])
        assert body['error'] == error, (argv, body)
        assert body['message']


def test_falsification_exits_two():
    def broken(cfg):
        raise NonIntegralGenus("genus 23/2 is not an integer")

    with mock.patch.dict(cli.DISPATCH, {'genus': broken}):
        code, _, err = run_cli('genus', '--p', '3', '--q', '7', '--n', '2', '--m', '2', '--no-cache')
    assert code == 2
    assert json.loads(err.strip().split("\n")[-1])['error'] == 'NonIntegralGenus'


def test_jacobian_command():
    code, out, _ = run_cli('jacobian', '--p', '5', '--q', '11', '--family', '2,2', '--no-cache')
    assert code == 0
    data = json.loads(out)
    assert (data['dimB1'], data['dimB2']) == (0, 8)
    assert data['check'] == "g = dimB1 + p*dimB2 = 40 OK"


def test_strata_csv():
    code, out, _ = run_cli('strata', '--p', '3', '--q', '7', '--family', '2,2', '--format', 'csv', '--no-cache')
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == ",".join(REPORT_COLUMNS)
    assert 2 <= len(lines) <= 15
    assert all(line.startswith('"(2,2)",3,7,') for line in lines[1:])


def test_model_command():
    code, out, _ = run_cli('model', '--p', '3', '--q', '7', '--m', '2', '--lambda', '2', '--samples', '20',
                           '--no-cache')
    assert code == 0
    data = json.loads(out)
    assert data['cover_residual'] < 1e-8
    assert data['exact_anchor'] is None
    assert all(value < 1e-8 for value in data['relation'].values())

    code, out, _ = run_cli('model', '--p', '3', '--mu', '2', '--no-cache')
    assert code == 0
    assert json.loads(out)['model']['genus'] == 2


def test_sweep_is_deterministic():
    with tempfile.TemporaryDirectory() as tmp:
        spec = f"{tmp}/cells.json"
        cells = [{'p': 3, 'q': 7, 'n': n, 'm': m} for n, m in ((2, 2), (4, 0), (1, 2), (3, 1))]
        with open(spec, 'w', encoding='utf-8') as f:
            json.dump(cells, f)

        args = ('sweep', '--sweep-spec', spec, '--cache-dir', f"{tmp}/cache", '--format', 'csv')
        code, serial, _ = run_cli(*args)
        assert code == 0
        code, parallel, _ = run_cli(*args, '--workers', '2', '--no-cache')
        assert code == 0
        assert serial == parallel

        lines = serial.strip().split("\n")
        assert lines[0] == ",".join(cli.SWEEP_COLUMNS)
        assert lines[1] == "3,7,2,2,12,0,4,0,4"
        assert lines[3] == "3,7,1,2,,,,,"


def test_cache_and_selftest():
    with tempfile.TemporaryDirectory() as tmp:
        args = ('genus', '--p', '3', '--q', '7', '--n', '4', '--m', '0', '--cache-dir', tmp)
        code, first, _ = run_cli(*args)
        assert code == 0
        code, second, _ = run_cli(*args)
        assert first == second

        code, out, _ = run_cli('cache-selftest', '--cache-dir', tmp)
        assert code == 0
        assert json.loads(out) == {'checked': 1, 'mismatches': []}


def test_text_format():
    code, out, _ = run_cli('genus', '--p', '3', '--q', '7', '--n', '3', '--m', '1', '--format', 'text',
                           '--no-cache')
    assert code == 0
    assert "genus: 10" in out.split("\n")


def main():
    """メインテスト関数"""
    print("=== CLI テスト ===")

    tests = [
        ("genus コマンド", test_genus_command),
        ("作用なし", test_no_action_exits_zero),
        ("入力エラー", test_usage_errors),
        ("検証の失敗", test_falsification_exits_two),
        ("jacobian コマンド", test_jacobian_command),
        ("strata のCSV", test_strata_csv),
        ("model コマンド", test_model_command),
        ("スイープの決定性", test_sweep_is_deterministic),
        ("キャッシュと自己検査", test_cache_and_selftest),
        ("テキスト形式", test_text_format),
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
