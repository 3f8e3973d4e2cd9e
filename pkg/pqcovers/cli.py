"""コマンドラインインターフェース"""

import argparse
import csv
import io
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from .cache import ResultCache
from .config import Config
from .errors import FalsificationError, NoAction, PqCoverError, UnknownFamily, UsageError
from .groups import build_overgroup, make_group
from .signatures import FamilyParams, genus_formula, quotient_genera, teich_dimension
from .strata import REPORT_COLUMNS
from .vectors import canonical, exists

logger = logging.getLogger(__name__)

COMMANDS = ['genus', 'strata', 'jacobian', 'extensions', 'model', 'characters', 'cayley',
            'sweep', 'cache-selftest']
FORMATS = ['json', 'csv', 'text']
SWEEP_COLUMNS = ['p', 'q', 'n', 'm', 'g', 'dimB1', 'dimB2', 'gX', 'gY']


@dataclass
class RunConfig:
    command: str
    p: int = 3
    q: int = 7
    n: int = None
    m: int = None
    family: tuple = None
    format: str = 'json'
    cache_dir: str = None
    seed: int = field(default_factory=lambda: Config.RANDOM_SEED)
    samples: int = field(default_factory=lambda: Config.SAMPLE_COUNT)
    bound: int = field(default_factory=lambda: Config.SEARCH_BOUND)
    sweep_spec: str = None
    workers: int = field(default_factory=lambda: Config.WORKERS)
    lambdas: list = field(default_factory=list)
    mu: str = None
    kind: str = None
    lift_sweep: bool = False
    no_cache: bool = False

    def validate(self):
        if self.command not in COMMANDS:
            raise UsageError(f"Unknown command {self.command!r}; choose from {', '.join(COMMANDS)}")
        if self.format not in FORMATS:
            raise UsageError(f"Unknown format {self.format!r}; choose from {', '.join(FORMATS)}")
        if self.family is not None:
            self.family = tuple(self.family)
            if self.n is None and self.m is None:
                self.n, self.m = self.family
        needs_family = self.command in ('genus', 'strata', 'jacobian')
        if needs_family and (self.n is None or self.m is None):
            raise UsageError(f"'{self.command}' needs --n and --m (or --family n,m)")
        if self.command == 'extensions' and self.family is None:
            if self.n is None or self.m is None:
                raise UsageError("'extensions' needs --family n,m (one of 2,2 4,0 3,1)")
            self.family = (self.n, self.m)
        if self.command == 'model' and self.mu is None and self.m is not None and self.m < 1:
            raise UsageError(f"'model' needs --m >= 1 (orbits of branch values of order q), got {self.m}")
        if self.samples < 1 or self.workers < 1 or self.bound < 1:
            raise UsageError("--samples, --workers and --bound must be positive")
        return self

    def cache_config(self):
        """キャッシュキーと再計算に使う設定"""
        data = asdict(self)
        for name in ('cache_dir', 'no_cache', 'workers'):
            data.pop(name)
        if data['family'] is not None:
            data['family'] = list(data['family'])
        return data


class ArgumentParser(argparse.ArgumentParser):
    """使い方の誤りを UsageError として扱う"""

    def error(self, message):
        raise UsageError(message)


def _family(text):
    try:
        n, m = (int(v) for v in text.split(','))
    except ValueError:
        raise argparse.ArgumentTypeError(f"family must look like 'n,m', got {text!r}")
    return (n, m)


def build_parser():
    parser = ArgumentParser(
        prog='pqcovers',
        description='Actions of the non-abelian group of order pq on compact Riemann surfaces',
    )
    parser.add_argument('command', choices=COMMANDS)
    parser.add_argument('--p', type=int, default=3)
    parser.add_argument('--q', type=int, default=7)
    parser.add_argument('--n', type=int)
    parser.add_argument('--m', type=int)
    parser.add_argument('--family', type=_family)
    parser.add_argument('--format', default='json', choices=FORMATS)
    parser.add_argument('--cache-dir')
    parser.add_argument('--seed', type=int, default=Config.RANDOM_SEED)
    parser.add_argument('--samples', type=int, default=Config.SAMPLE_COUNT)
    parser.add_argument('--bound', type=int, default=Config.SEARCH_BOUND)
    parser.add_argument('--sweep-spec')
    parser.add_argument('--workers', type=int, default=Config.WORKERS)
    parser.add_argument('--lambda', dest='lambdas', action='append', default=[],
                        help='lambda_k for the curve model (complex, e.g. 2 or 1+1j)')
    parser.add_argument('--mu', help='mu for the hyperelliptic quotient model')
    parser.add_argument('--kind', help='overgroup kind for cayley (default: G_{p,q})')
    parser.add_argument('--lift-sweep', action='store_true',
                        help='try every (L, N) for the (4,0) index-2 extension')
    parser.add_argument('--no-cache', action='store_true')
    return parser


def parse_config(argv=None):
    args = build_parser().parse_args(argv)
    return RunConfig(**vars(args)).validate()


# --- コマンド ---

def _no_action(fp):
    return {
        'p': fp.p, 'q': fp.q, 'n': fp.n, 'm': fp.m,
        'action': False,
        'message': "no action (n >= 2 required)",
        'reason': exists(fp).reason,
    }


def cmd_genus(cfg):
    fp = FamilyParams(cfg.p, cfg.q, cfg.n, cfg.m)
    make_group(cfg.p, cfg.q)
    if fp.n < 2:
        return _no_action(fp)
    g_x, g_y = quotient_genera(fp)
    return {
        'p': fp.p, 'q': fp.q, 'n': fp.n, 'm': fp.m,
        'signature': str(fp.signature),
        'genus': genus_formula(fp),
        'gX': g_x,
        'gY': g_y,
        'dim': teich_dimension(fp.signature),
    }


UPPER_BOUNDS = {
    (2, 2): lambda p, q: q * (p - 1),
    (4, 0): lambda p, q: q * (p - 1) * (p * p - 3 * p + 3),
    (3, 1): lambda p, q: q * (p - 1) * (p - 2),
}


def cmd_strata(cfg):
    from .strata import stratum_report

    fp = FamilyParams(cfg.p, cfg.q, cfg.n, cfg.m)
    make_group(cfg.p, cfg.q)
    if fp.n < 2:
        return _no_action(fp)
    rows = stratum_report(fp, bound=cfg.bound, workers=cfg.workers)
    result = {
        'family': fp.label, 'p': fp.p, 'q': fp.q,
        'orbit_count': len(rows),
        'vector_count': sum(row['orbit_size'] for row in rows),
        'rows': rows,
    }
    if (fp.n, fp.m) in UPPER_BOUNDS:
        bound = UPPER_BOUNDS[(fp.n, fp.m)](fp.p, fp.q)
        result['upper_bound'] = bound
        result['within_bound'] = len(rows) <= bound
    return result


def cmd_jacobian(cfg):
    from .jacobian import decomposition_report

    fp = FamilyParams(cfg.p, cfg.q, cfg.n, cfg.m)
    make_group(cfg.p, cfg.q)
    if fp.n < 2:
        return _no_action(fp)
    return decomposition_report(fp, canonical(fp)).to_dict()


def cmd_extensions(cfg):
    from . import extensions

    p, q, family = cfg.p, cfg.q, tuple(cfg.family)
    if family == (2, 2):
        result = {
            'no_extension': [v.to_dict() for v in extensions.check_no_extension_22(p, q, cfg.bound)],
            'quasiplatonic': extensions.quasiplatonic(family, p, q),
        }
    elif family == (4, 0):
        extension, no_extension, missing = extensions.check_extension_40(p, q, bound=cfg.bound)
        result = {
            'extension': extension.to_dict(),
            'no_extension': [v.to_dict() for v in no_extension],
            'missing_kinds': missing,
            'quasiplatonic': extensions.quasiplatonic(family, p, q),
            'hyperelliptic': extensions.hyperelliptic_quotient_check(p, q),
        }
        if cfg.lift_sweep:
            result['lift_sweep'] = extensions.extension_sweep(p, q)
    elif family == (3, 1):
        result = {
            'maximality': extensions.maximality_31(),
            'quasiplatonic': extensions.quasiplatonic(family, p, q),
        }
    else:
        raise UnknownFamily(f"No extension checks for family {family}; use 2,2 4,0 or 3,1")
    result.update({'p': p, 'q': q, 'family': f"({family[0]},{family[1]})"})
    return result


def cmd_model(cfg):
    from . import curves

    if cfg.mu is not None:
        model = curves.build_hyperelliptic_40(cfg.p, complex(cfg.mu))
        return {
            'kind': 'hyperelliptic',
            'model': model.to_dict(),
            'equation': curves.hyperelliptic_equation(model),
            'branch_count': len(model.branch_points),
        }

    m = cfg.m if cfg.m is not None else 1 + len(cfg.lambdas)
    lambdas = [complex(v) for v in cfg.lambdas]
    if len(lambdas) < m - 1:
        lambdas += curves.random_lambdas(cfg.p, m - 1 - len(lambdas), seed=cfg.seed)
    model = curves.build_model(cfg.p, cfg.q, lambdas[:max(m - 1, 0)])
    return {
        'kind': 'superelliptic',
        'model': model.to_dict(),
        'equation': curves.model_equation(model),
        'branch_data': curves.branch_data(model),
        'cover_residual': curves.verify_cover_identity(model, cfg.samples, cfg.seed),
        'anchor_residual': float(curves.cover_residual_at(model, 0)[0]),
        'exact_anchor': curves.exact_anchor_check(model),
        'relation': curves.verify_relation(model, cfg.samples, cfg.seed),
        'tolerance': Config.TOLERANCE,
    }


def cmd_characters(cfg):
    from .characters import character_table_json

    return json.loads(character_table_json(make_group(cfg.p, cfg.q)))


def cmd_cayley(cfg):
    G = build_overgroup(cfg.kind, cfg.p, cfg.q) if cfg.kind else make_group(cfg.p, cfg.q)
    return {'kind': G.kind, 'order': G.size, 'labels': G.labels, 'csv': G.cayley_csv()}


def sweep_cell(cell):
    """スイープの1セル (p, q, n, m) の行"""
    from .jacobian import closed_form_dims, factor_dims

    p, q, n, m = cell['p'], cell['q'], cell['n'], cell['m']
    fp = FamilyParams(p, q, n, m)
    row = {'p': p, 'q': q, 'n': n, 'm': m, 'g': None, 'dimB1': None, 'dimB2': None, 'gX': None, 'gY': None}
    if n < 2:
        return row
    dims = factor_dims(fp, canonical(fp))
    if dims != closed_form_dims(fp):
        raise FalsificationError(f"factor_dims {dims} differs from the closed form at {fp.label}")
    g_x, g_y = quotient_genera(fp)
    row.update({'g': genus_formula(fp), 'dimB1': dims[0], 'dimB2': dims[1], 'gX': g_x, 'gY': g_y})
    return row


def _cached_cell(args):
    cell, cache_dir, use_cache = args
    if not use_cache:
        return sweep_cell(cell)
    cache = ResultCache(cache_dir)
    key = cache.key('sweep-cell', cell['p'], cell['q'], cell['n'], cell['m'])
    hit = cache.get(key)
    if hit is not None:
        return json.loads(hit)
    row = sweep_cell(cell)
    cache.put(key, {'command': 'sweep-cell', **cell}, json.dumps(row, sort_keys=True))
    return row


def default_grid(p, q):
    return [{'p': p, 'q': q, 'n': n, 'm': total - n}
            for total in (3, 4, 5) for n in range(total + 1)]


def cmd_sweep(cfg):
    if cfg.sweep_spec:
        try:
            with open(cfg.sweep_spec, 'r', encoding='utf-8') as f:
                cells = json.load(f)
        except (OSError, ValueError) as e:
            raise UsageError(f"Cannot read sweep spec {cfg.sweep_spec}: {e}")
    else:
        cells = default_grid(cfg.p, cfg.q)
    for cell in cells:
        make_group(cell['p'], cell['q'])
        FamilyParams(cell['p'], cell['q'], cell['n'], cell['m'])

    jobs = [(cell, cfg.cache_dir, not cfg.no_cache) for cell in cells]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as executor:
            rows = list(executor.map(_cached_cell, jobs))
    else:
        rows = [_cached_cell(job) for job in jobs]
    logger.info(f"Sweep finished: {len(rows)} cells")
    return {'rows': rows}


def cmd_cache_selftest(cfg):
    cache = ResultCache(cfg.cache_dir)

    def recompute(config):
        if config.get('command') == 'sweep-cell':
            cell = {k: config[k] for k in ('p', 'q', 'n', 'm')}
            return json.dumps(sweep_cell(cell), sort_keys=True)
        run = RunConfig(**{**config, 'family': tuple(config['family']) if config.get('family') else None,
                           'no_cache': True}).validate()
        return render(dispatch(run), run.format)

    return cache.self_test(recompute)


DISPATCH = {
    'genus': cmd_genus,
    'strata': cmd_strata,
    'jacobian': cmd_jacobian,
    'extensions': cmd_extensions,
    'model': cmd_model,
    'characters': cmd_characters,
    'cayley': cmd_cayley,
    'sweep': cmd_sweep,
    'cache-selftest': cmd_cache_selftest,
}


def dispatch(cfg):
    return DISPATCH[cfg.command](cfg)


# --- 出力 ---

def _flatten(value):
    if value is None:
        return ''
    if isinstance(value, list):
        return " ".join(str(v) for v in value)
    if isinstance(value, dict):
        return json.dumps(value, sort_keys=True)
    return value


def render(result, fmt):
    if fmt == 'json':
        return json.dumps(result, sort_keys=True, indent=2)

    rows = result['rows'] if 'rows' in result else [result]
    if fmt == 'csv':
        keys = {k for row in rows for k in row}
        columns = next((c for c in (SWEEP_COLUMNS, REPORT_COLUMNS) if keys and set(c) <= keys), sorted(keys))
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator='\n', extrasaction='ignore')
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _flatten(row.get(k)) for k in columns})
        return buffer.getvalue().rstrip('\n')

    lines = []
    for row in rows:
        lines.extend(f"{k}: {_flatten(v)}" for k, v in sorted(row.items()))
        lines.append("")
    return "\n".join(lines).rstrip('\n')


def run(cfg):
    """キャッシュを考慮して出力文字列を返す"""
    cacheable = not cfg.no_cache and cfg.command not in ('sweep', 'cache-selftest')
    cache = ResultCache(cfg.cache_dir) if cacheable else None
    if cache is not None:
        config = cfg.cache_config()
        key = cache.key(cfg.command, cfg.p, cfg.q, cfg.n, cfg.m, extra=config)
        hit = cache.get(key)
        if hit is not None:
            return hit
    output = render(dispatch(cfg), cfg.format)
    if cache is not None:
        cache.put(key, config, output)
    return output


def main(argv=None):
    # ログ設定
    logging.basicConfig(
        level=getattr(logging, Config.LOG_LEVEL, logging.INFO),
        stream=sys.stderr,
        format='%(asctime)s %(name)s %(levelname)s %(message)s',
    )
    try:
        cfg = parse_config(argv)
        print(run(cfg))
        return 0
    except NoAction as e:
        print(json.dumps({'action': False, 'message': str(e)}, sort_keys=True, indent=2))
        return 0
    except UsageError as e:
        logger.error(f"Usage error: {e}")
        print(json.dumps(e.to_dict()), file=sys.stderr)
        return 1
    except FalsificationError as e:
        logger.error(f"Falsification sentinel raised: {e}")
        print(json.dumps(e.to_dict()), file=sys.stderr)
        return 2
    except PqCoverError as e:
        print(json.dumps(e.to_dict()), file=sys.stderr)
        return 1
