"""
平面モデル y^q = f(x) と自己同型 A, B の数値検証

f(x) の次数が大きくなるため、評価は対数領域で行い exp(Δ) - 1 で残差を測る。
"""

import json
import logging
from dataclasses import dataclass, field

import numpy as np

from .config import Config
from .errors import BadLambda, BadMu, SampleNearSingularity
from .groups import validate_primes, primitive_roots
from .signatures import quotient_genera

logger = logging.getLogger(__name__)


@dataclass
class CurveModel:
    p: int
    q: int
    r: int
    e: int
    lambdas: list
    omega_power: int = 1
    exponents: list = field(init=False)

    def __post_init__(self):
        self.exponents = [self.r ** i for i in range(self.p)]

    @property
    def m(self):
        return 1 + len(self.lambdas)

    @property
    def omega(self):
        return np.exp(2j * np.pi * self.omega_power / self.p)

    @property
    def xi(self):
        return np.exp(2j * np.pi / self.q)

    @property
    def orbit_scales(self):
        """λ_1 = 1, λ_2, …"""
        return np.array([1.0] + [complex(lam) for lam in self.lambdas], dtype=complex)

    def factors(self):
        """(根, 指数) の配列"""
        roots = (self.orbit_scales[:, None] * self.omega ** np.arange(self.p)[None, :]).ravel()
        exps = np.tile(np.array(self.exponents, dtype=float), self.m)
        return roots, exps

    def degree(self):
        return self.m * sum(self.exponents)

    def to_dict(self):
        return {
            'p': self.p,
            'q': self.q,
            'r': self.r,
            'e': self.e,
            'lambdas': [[complex(lam).real, complex(lam).imag] for lam in self.lambdas],
            'exponents': self.exponents,
        }


@dataclass
class HyperellipticModel:
    p: int
    mu: complex

    @property
    def branch_points(self):
        omega = np.exp(2j * np.pi * np.arange(self.p) / self.p)
        return np.concatenate([omega, self.mu * omega])

    @property
    def genus(self):
        # 2g + 2 = 分岐点数
        return (len(self.branch_points) - 2) // 2

    def to_dict(self):
        return {'p': self.p, 'mu': [complex(self.mu).real, complex(self.mu).imag], 'genus': self.genus}


# --- 構成 ---

def build_model(p, q, lambdas=(), r=None, tolerance=None):
    """y^q = Π_k Π_i (x - λ_k ω^i)^{r^i}（λ_1 = 1）"""
    tolerance = Config.LAMBDA_TOLERANCE if tolerance is None else tolerance
    validate_primes(p, q)
    r = r or primitive_roots(p, q)[0]
    lambdas = [complex(lam) for lam in lambdas]

    powers = [1.0 + 0j]
    for k, lam in enumerate(lambdas, start=2):
        if abs(lam) < tolerance:
            raise BadLambda(f"lambda_{k} is zero")
        lam_p = lam ** p
        if abs(lam_p - 1) < tolerance:
            raise BadLambda(f"lambda_{k} lies in the orbit of 1 (lambda^p = 1)")
        for j, other in enumerate(powers[1:], start=2):
            if abs(lam_p - other) < tolerance * max(1.0, abs(other)):
                raise BadLambda(f"lambda_{k} lies in the orbit of lambda_{j}")
        powers.append(lam_p)

    total = sum(r ** i for i in range(p))
    if total % q:
        raise BadLambda(f"1 + r + ... + r^{p - 1} = {total} is not divisible by {q}")
    model = CurveModel(p, q, r, total // q, lambdas)
    logger.info(f"Built curve model for (p,q)=({p},{q}) with m={model.m}, e={model.e}")
    return model


def relabel(model, s):
    """ω ↦ ω^s"""
    if s % model.p == 0:
        raise BadLambda(f"{s} is not a unit mod {model.p}")
    return CurveModel(model.p, model.q, model.r, model.e, list(model.lambdas),
                      omega_power=(model.omega_power * s) % model.p)


def build_hyperelliptic_40(p, mu, tolerance=None):
    """y^2 = (x^p - 1)(x^p - μ^p)"""
    tolerance = Config.LAMBDA_TOLERANCE if tolerance is None else tolerance
    mu = complex(mu)
    if abs(mu) < tolerance:
        raise BadMu("mu must be non-zero")
    if abs(mu ** p - 1) < tolerance:
        raise BadMu("mu^p must differ from 1")
    return HyperellipticModel(p, mu)


# --- 評価（対数領域） ---

def log_f(model, x):
    roots, exps = model.factors()
    x = np.atleast_1d(np.asarray(x, dtype=complex))
    return (exps[None, :] * np.log(x[:, None] - roots[None, :])).sum(axis=1)


def log_phi(model, x):
    """φ(x) = ω^{me} [Π_k (x - λ_k ω^{p-1})]^{e(1-r)}"""
    x = np.atleast_1d(np.asarray(x, dtype=complex))
    last = model.orbit_scales * model.omega ** (model.p - 1)
    exponent = model.e * (1 - model.r)
    prefix = 2j * np.pi * model.omega_power * model.m * model.e / model.p
    return prefix + exponent * np.log(x[:, None] - last[None, :]).sum(axis=1)


def phi(model, x):
    return np.exp(log_phi(model, x))


def _residual(delta):
    return np.abs(np.expm1(delta))


def cover_residual_at(model, x):
    """|φ(x)^q f(x)^r / f(ωx) - 1|"""
    x = np.atleast_1d(np.asarray(x, dtype=complex))
    delta = model.q * log_phi(model, x) + model.r * log_f(model, x) - log_f(model, model.omega * x)
    return _residual(delta)


def exact_anchor_check(model):
    """x = 0, m = 1 で φ(0)^q f(0)^{r-1} = 1 を符号と ω の指数で厳密に確認"""
    if model.m != 1:
        return None
    p, q, r, e = model.p, model.q, model.r, model.e
    s = model.omega_power
    # f(0) = Π (-ω^i)^{r^i},  φ(0) = ω^e (-ω^{p-1})^{e(1-r)}
    sign = q * e * (1 - r) + (r - 1) * sum(model.exponents)
    power = q * (e + (p - 1) * e * (1 - r)) + (r - 1) * sum(i * n for i, n in enumerate(model.exponents))
    return sign % 2 == 0 and (power * s) % p == 0


def sample_points(model, count, seed=None, margin=1e-3, attempts=50):
    """根から離れた x を環状領域から抽出"""
    seed = Config.RANDOM_SEED if seed is None else seed
    rng = np.random.default_rng(seed)
    roots, _ = model.factors()
    scale = np.abs(roots)
    low, high = 0.25 * scale.min(), 2.0 * scale.max()

    accepted = []
    rejected = 0
    for _ in range(attempts):
        radius = rng.uniform(low, high, size=count)
        angle = rng.uniform(0, 2 * np.pi, size=count)
        x = radius * np.exp(1j * angle)
        near = np.minimum(
            np.abs(x[:, None] - roots[None, :]).min(axis=1),
            np.abs(model.omega * x[:, None] - roots[None, :]).min(axis=1),
        )
        ok = near > margin * np.maximum(1.0, np.abs(x))
        accepted.extend(x[ok].tolist())
        rejected += int((~ok).sum())
        if len(accepted) >= count:
            break
    if rejected:
        logger.warning(f"Resampled {rejected} points near the branch locus")
    if len(accepted) < count:
        raise SampleNearSingularity(f"Only {len(accepted)} of {count} samples avoid the roots")
    return np.array(accepted[:count])


def verify_cover_identity(model, sample_count=None, seed=None):
    """φ(x)^q f(x)^r = f(ωx) の最大相対残差"""
    sample_count = Config.SAMPLE_COUNT if sample_count is None else sample_count
    x = sample_points(model, sample_count, seed)
    return float(cover_residual_at(model, x).max())


# --- 自己同型 ---

@dataclass
class ModelAutomorphisms:
    model: CurveModel

    def A(self, x, y):
        return x, self.model.xi * y

    def B(self, x, y):
        return self.model.omega * x, phi(self.model, x) * y ** self.model.r

    # 対数領域での作用 (x, log y)

    def A_log(self, x, ly):
        return x, ly + 2j * np.pi / self.model.q

    def B_log(self, x, ly):
        return self.model.omega * x, log_phi(self.model, x) + self.model.r * ly


def model_automorphisms(model):
    auts = ModelAutomorphisms(model)
    return auts.A, auts.B


def verify_relation(model, sample_count=None, seed=None):
    """
    B∘A と A^r∘B を同じ点で比較

    あわせて B の像が曲線上にあること、B^p が x を固定すること、A^q が恒等であることを確認する
    """
    sample_count = Config.SAMPLE_COUNT if sample_count is None else sample_count
    auts = ModelAutomorphisms(model)
    x = sample_points(model, sample_count, seed)
    ly = log_f(model, x) / model.q

    x1, ly1 = auts.B_log(*auts.A_log(x, ly))
    x2, ly2 = auts.B_log(x, ly)
    for _ in range(model.r):
        x2, ly2 = auts.A_log(x2, ly2)
    relation = max(np.abs(x1 - x2).max(), _residual(ly1 - ly2).max())

    # B の像が y^q = f(x) を満たす
    xb, lyb = auts.B_log(x, ly)
    on_curve = _residual(model.q * lyb - log_f(model, xb)).max()

    xp = x
    lyp = ly
    for _ in range(model.p):
        xp, lyp = auts.B_log(xp, lyp)
    x_return = (np.abs(xp - x) / np.abs(x)).max()

    xa, lya = x, ly
    for _ in range(model.q):
        xa, lya = auts.A_log(xa, lya)
    a_order = _residual(lya - ly).max()

    return {
        'relation': float(relation),
        'on_curve': float(on_curve),
        'b_power_x': float(x_return),
        'a_order': float(a_order),
    }


# --- 補助 ---

def gonality_flag(fp):
    """n = 2 のとき巡回 q 重被覆（S/<a> の種数 0）"""
    g_x, _ = quotient_genera(fp)
    return {'cyclic_q_gonal': fp.n == 2, 'g_X': g_x}


def branch_data(model):
    """S → S/G の分岐値と印: {∞, 0} は p、{1, λ_k^p} は q"""
    rows = [{'value': 'inf', 'marking': model.p}, {'value': [0.0, 0.0], 'marking': model.p}]
    for lam in model.orbit_scales:
        value = complex(lam) ** model.p
        rows.append({'value': [round(value.real, 10) + 0.0, round(value.imag, 10) + 0.0],
                     'marking': model.q})
    return rows


def _format_complex(z):
    z = complex(z)
    if abs(z.imag) < 1e-12:
        return f"{z.real:g}"
    return f"({z.real:g}{z.imag:+g}i)"


def model_equation(model):
    parts = []
    for k, lam in enumerate(model.orbit_scales, start=1):
        scale = "" if k == 1 else _format_complex(lam)
        for i, n in enumerate(model.exponents):
            root = "1" if (i == 0 and not scale) else f"{scale}w^{(i * model.omega_power) % model.p}"
            parts.append(f"(x - {root})^{n}")
    return f"y^{model.q} = " + " ".join(parts)


def hyperelliptic_equation(model):
    mu_p = _format_complex(complex(model.mu) ** model.p)
    return f"y^2 = (x^{model.p} - 1)(x^{model.p} - {mu_p})"


def random_lambdas(p, count, seed=None, tolerance=None):
    """|λ| ∈ [0.1, 10] の範囲で制約を満たす λ を生成"""
    tolerance = Config.LAMBDA_TOLERANCE if tolerance is None else tolerance
    rng = np.random.default_rng(Config.RANDOM_SEED if seed is None else seed)
    chosen = []
    powers = [1.0 + 0j]
    while len(chosen) < count:
        lam = np.exp(rng.uniform(np.log(0.1), np.log(10))) * np.exp(2j * np.pi * rng.uniform())
        lam_p = lam ** p
        if min(abs(lam_p - other) for other in powers) < 1e-3:
            continue
        chosen.append(complex(lam))
        powers.append(lam_p)
    return chosen


def model_json(model):
    return json.dumps(model.to_dict(), sort_keys=True, indent=2)
