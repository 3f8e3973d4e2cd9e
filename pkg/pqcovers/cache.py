"""計算結果のJSONキャッシュ"""

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path

from .config import Config
from .s3_utils import get_s3_manager

logger = logging.getLogger(__name__)

PACKAGE_DIR = Path(__file__).resolve().parent


def calculate_md5(file_obj):
    """ファイルのMD5ハッシュを計算"""
    hash_md5 = hashlib.md5()
    for chunk in iter(lambda: file_obj.read(4096), b""):
        hash_md5.update(chunk)
    return hash_md5.hexdigest()


def code_version():
    """パッケージのソース全体から計算したハッシュ"""
    hash_md5 = hashlib.md5()
    for path in sorted(PACKAGE_DIR.glob("*.py")):
        with open(path, 'rb') as f:
            hash_md5.update(path.name.encode())
            hash_md5.update(calculate_md5(f).encode())
    return hash_md5.hexdigest()


def _digest(extra):
    return hashlib.md5(json.dumps(extra, sort_keys=True).encode()).hexdigest()[:12]


class ResultCache:
    def __init__(self, directory=None, mirror=True):
        self.directory = Path(directory or Config.CACHE_DIR)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.version = code_version()
        self.mirror = None
        if mirror:
            try:
                self.mirror = get_s3_manager()
            except Exception as e:
                logger.warning(f"S3 cache mirror disabled: {e}")

    def key(self, command, p, q, n=None, m=None, extra=None):
        cell = "_".join(str(v) for v in (command, p, q, n, m) if v is not None)
        return f"{cell}_{_digest(extra or {})}_{self.version[:12]}.json"

    def _path(self, key):
        return self.directory / key

    def get(self, key):
        """エントリの出力文字列（なければ None）"""
        path = self._path(key)
        if path.exists():
            with open(path, 'r', encoding='utf-8') as f:
                entry = json.load(f)
            logger.debug(f"Cache hit: {key}")
            return entry['output']

        if self.mirror is not None:
            try:
                body = self.mirror.download_entry(key)
            except Exception as e:
                logger.warning(f"S3 cache lookup failed for {key}: {e}")
                body = None
            if body is not None:
                self._write(path, body)
                return json.loads(body)['output']
        return None

    def put(self, key, config, output):
        """設定と出力を保存（一時ファイル経由で置き換え）"""
        body = json.dumps({'config': config, 'version': self.version, 'output': output},
                          sort_keys=True, indent=2).encode('utf-8')
        self._write(self._path(key), body)
        logger.info(f"Cached result {key}")

        if self.mirror is not None:
            try:
                self.mirror.upload_entry(key, body)
            except Exception as e:
                logger.warning(f"S3 cache mirror upload failed for {key}: {e}")

    def _write(self, path, body):
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix='.tmp')
        try:
            with os.fdopen(fd, 'wb') as f:
                f.write(body)
            os.replace(tmp, path)
        except Exception:
            if os.path.exists(tmp):
                os.remove(tmp)
            raise

    def entries(self):
        """保存済みエントリ（現在のコードバージョンのみ）"""
        result = []
        for path in sorted(self.directory.glob("*.json")):
            with open(path, 'r', encoding='utf-8') as f:
                entry = json.load(f)
            if entry.get('version') == self.version:
                result.append((path.name, entry))
        return result

    def self_test(self, recompute):
        """各エントリを再計算して出力が一致するか確認"""
        mismatches = []
        entries = self.entries()
        for name, entry in entries:
            output = recompute(entry['config'])
            if output != entry['output']:
                logger.error(f"Cache entry {name} differs from recomputation")
                mismatches.append(name)
        logger.info(f"Cache self-test checked {len(entries)} entries, {len(mismatches)} mismatches")
        return {'checked': len(entries), 'mismatches': mismatches}
