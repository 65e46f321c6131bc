"""
Discrete latent exponent (DExp) decoding: a multinomial over the exponents
0..16, each parameterizing a log-normal over its decade truncated to
[10**k, 10**(k + 1)).

Log-space locations `mu` are natural logs. The scale is shared across
components and kept as `log_sigma` so it can be optimized unconstrained.
"""
import dataclasses
import logging
import math

import numpy as np
from scipy import special

from . import MAX_VALUE, N_EXPONENTS, Error
from .numparse import decompose

__all__ = [
    'InvalidParam',
    'TruncLogNormal',
    'DExpParams',
    'tln_logpdf',
    'tln_cdf',
    'tln_ppf',
    'tln_sample',
    'tln_median',
    'tln_mean',
    'dexp_nll',
    'dexp_grad',
    'dexp_predict',
    'dexp_sample',
    'mixture_nll',
    'mixture_nll_grad',
    'mixture_predict',
    'clamp_log_sigma',
]

logger = logging.getLogger(__name__)

HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)

SIGMA_MIN, SIGMA_MAX = 1e-3, 10.0

#: Component k truncation bounds, exact powers of ten.
LOWER = 10.0 ** np.arange(N_EXPONENTS)
UPPER = 10.0 ** np.arange(1, N_EXPONENTS + 1)
LOG_LOWER = np.log(LOWER)
LOG_UPPER = np.log(UPPER)


class InvalidParam(Error):
    pass


def _log_diff_ndtr(a, b):
    """
    log(Phi(b) - Phi(a)) for a < b, evaluated in the tail that keeps it
    accurate.
    """
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    flip = a > 0
    lo = np.where(flip, -b, a)
    hi = np.where(flip, -a, b)
    log_hi = special.log_ndtr(hi)
    return log_hi + np.log1p(-np.exp(special.log_ndtr(lo) - log_hi))


def _log_phi(x):
    return -0.5 * np.square(x) - HALF_LOG_2PI


def _ppf(u, mu, sigma, lower, upper):
    a = (np.log(lower) - mu) / sigma
    b = (np.log(upper) - mu) / sigma
    flip = a > 0
    # log Phi(-x) = log(Phi(-a) - u Z) in the upper tail, log Phi(x) =
    # log(Phi(a) + u Z) otherwise; Phi itself underflows past |a| ~ 38
    lo = np.where(flip, -a, a)
    hi = np.where(flip, -b, b)
    with np.errstate(divide='ignore'):
        log_p = np.logaddexp(
            np.log1p(-u) + special.log_ndtr(lo), np.log(u) + special.log_ndtr(hi),
        )
    x = special.ndtri_exp(log_p)
    x = np.where(flip, -x, x)
    x = np.clip(x, a, b)
    value = np.exp(mu + sigma * x)
    return np.clip(value, lower, np.nextafter(upper, 0))


@dataclasses.dataclass(frozen=True)
class TruncLogNormal:
    """
    Log-normal with log-space location `mu` and scale `sigma`, truncated to
    [lower, upper).
    """

    mu: float
    sigma: float
    lower: float
    upper: float

    def __post_init__(self):
        for name in ('mu', 'sigma', 'lower', 'upper'):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise InvalidParam('{0}={1!r} is not finite'.format(name, value))
            object.__setattr__(self, name, value)
        if self.sigma <= 0:
            raise InvalidParam('sigma={0!r} must be > 0'.format(self.sigma))
        if not 0 < self.lower < self.upper:
            raise InvalidParam('bounds [{0!r}, {1!r}) are inverted or not positive'.format(
                self.lower, self.upper,
            ))

    @property
    def a(self):
        return (math.log(self.lower) - self.mu) / self.sigma

    @property
    def b(self):
        return (math.log(self.upper) - self.mu) / self.sigma

    @property
    def log_z(self):
        return float(_log_diff_ndtr(self.a, self.b))


def tln_logpdf(d, v):
    """
    Log density at `v`, -inf outside [lower, upper).
    """
    v = float(v)
    if not d.lower <= v < d.upper:
        return -math.inf
    z = (math.log(v) - d.mu) / d.sigma
    return float(_log_phi(z)) - math.log(v) - math.log(d.sigma) - d.log_z


def tln_cdf(d, v):
    v = float(v)
    if v <= d.lower:
        return 0.0
    if v >= d.upper:
        return 1.0
    z = (math.log(v) - d.mu) / d.sigma
    return float(np.exp(_log_diff_ndtr(d.a, z) - d.log_z))


def tln_ppf(d, u):
    """
    Inverse CDF. Always lands in [lower, upper).
    """
    u = np.asarray(u, dtype=float)
    value = _ppf(u, d.mu, d.sigma, d.lower, d.upper)
    return float(value) if value.ndim == 0 else value


def tln_sample(d, rng, size=None):
    """
    Inverse-CDF draws: exp(mu + sigma Phi^-1(Phi(a) + u Z)), u ~ U(0, 1).
    """
    return tln_ppf(d, rng.random(size))


def tln_median(d):
    return tln_ppf(d, 0.5)


def tln_mean(d):
    """
    exp(mu + sigma**2 / 2) (Phi(b - sigma) - Phi(a - sigma)) / Z
    """
    s = d.sigma
    return float(np.exp(d.mu + 0.5 * s * s + _log_diff_ndtr(d.a - s, d.b - s) - d.log_z))


@dataclasses.dataclass(frozen=True, eq=False)
class DExpParams:

    exponent_logits: np.ndarray
    mu_per_exponent: np.ndarray
    log_sigma: float

    def __post_init__(self):
        for name in ('exponent_logits', 'mu_per_exponent'):
            value = np.array(getattr(self, name), dtype=float)
            if value.shape != (N_EXPONENTS,):
                raise InvalidParam('{0} must have shape ({1},), got {2}'.format(
                    name, N_EXPONENTS, value.shape,
                ))
            if not np.all(np.isfinite(value)):
                raise InvalidParam('{0} must be finite'.format(name))
            value.setflags(write=False)
            object.__setattr__(self, name, value)
        log_sigma = float(self.log_sigma)
        if not math.isfinite(log_sigma):
            raise InvalidParam('log_sigma={0!r} is not finite'.format(log_sigma))
        object.__setattr__(self, 'log_sigma', log_sigma)

    @classmethod
    def from_json(cls, doc):
        return cls(
            exponent_logits=doc['logits'], mu_per_exponent=doc['mu'],
            log_sigma=doc['log_sigma'],
        )

    def to_json(self):
        return {
            'logits': self.exponent_logits.tolist(),
            'mu': self.mu_per_exponent.tolist(),
            'log_sigma': self.log_sigma,
        }

    @property
    def sigma(self):
        return math.exp(self.log_sigma)

    @property
    def probabilities(self):
        return special.softmax(self.exponent_logits)

    def component(self, k):
        return TruncLogNormal(
            mu=self.mu_per_exponent[k], sigma=self.sigma,
            lower=LOWER[k], upper=UPPER[k],
        )


def _batch(logits, mu, log_sigma, values):
    logits = np.atleast_2d(np.asarray(logits, dtype=float))
    mu = np.atleast_2d(np.asarray(mu, dtype=float))
    values = np.atleast_1d(np.asarray(values, dtype=float))
    log_sigma = np.broadcast_to(np.asarray(log_sigma, dtype=float), values.shape)
    if logits.shape != mu.shape or logits.shape != (values.size, N_EXPONENTS):
        raise InvalidParam('expected ({0}, {1}) logits and mu, got {2} and {3}'.format(
            values.size, N_EXPONENTS, logits.shape, mu.shape,
        ))
    return logits, mu, log_sigma, values


def _components(mu, log_sigma, values):
    """
    Per-component log densities plus the pieces their derivatives need.
    """
    sigma = np.exp(log_sigma)[:, None]
    log_v = np.log(values)[:, None]
    inside = (values[:, None] >= LOWER) & (values[:, None] < UPPER)
    a = (LOG_LOWER - mu) / sigma
    b = (LOG_UPPER - mu) / sigma
    z = (log_v - mu) / sigma
    log_z = _log_diff_ndtr(a, b)
    lp = _log_phi(z) - log_v - log_sigma[:, None] - log_z
    lp = np.where(inside, lp, -np.inf)
    return lp, inside, a, b, z, sigma, log_z


def mixture_nll(logits, mu, log_sigma, values):
    """
    Batch negative log-likelihood, one row of `logits` and `mu` per value.
    """
    logits, mu, log_sigma, values = _batch(logits, mu, log_sigma, values)
    lp = _components(mu, log_sigma, values)[0]
    return -special.logsumexp(special.log_softmax(logits, axis=1) + lp, axis=1)


def mixture_nll_grad(logits, mu, log_sigma, values):
    """
    :return: (nll, d logits, d mu, d log_sigma), all batched.
    """
    logits, mu, log_sigma, values = _batch(logits, mu, log_sigma, values)
    lp, inside, a, b, z, sigma, log_z = _components(mu, log_sigma, values)
    log_w = special.log_softmax(logits, axis=1)
    joint = log_w + lp
    total = special.logsumexp(joint, axis=1, keepdims=True)
    resp = np.where(inside, np.exp(joint - total), 0.0)

    phi_a = np.exp(_log_phi(a) - log_z)
    phi_b = np.exp(_log_phi(b) - log_z)
    dlp_dmu = z / sigma + (phi_b - phi_a) / sigma
    dlp_ds = np.square(z) - 1 + (b * phi_b - a * phi_a)
    dlp_dmu = np.where(inside, dlp_dmu, 0.0)
    dlp_ds = np.where(inside, dlp_ds, 0.0)

    d_logits = np.exp(log_w) - resp
    d_mu = -resp * dlp_dmu
    d_log_sigma = -np.sum(resp * dlp_ds, axis=1)
    return -total[:, 0], d_logits, d_mu, d_log_sigma


def mixture_predict(logits, mu, log_sigma):
    """
    Batch point predictions: the median of the most probable component,
    ties going to the smaller exponent. Component 16 predictions are capped
    at 10**16.
    """
    logits = np.atleast_2d(np.asarray(logits, dtype=float))
    mu = np.atleast_2d(np.asarray(mu, dtype=float))
    k = np.argmax(logits, axis=1)
    sigma = np.exp(np.broadcast_to(np.asarray(log_sigma, dtype=float), k.shape))
    rows = np.arange(k.size)
    value = _ppf(0.5, mu[rows, k], sigma, LOWER[k], UPPER[k])
    return np.minimum(value, float(MAX_VALUE))


def _value(v):
    return float(decompose(v).value)


def dexp_nll(p, v):
    """
    -log sum_k softmax(logits)_k exp(tln_logpdf(component_k, v)).

    :raise OutOfRange: `v` not in [1, 10**16].
    """
    return float(mixture_nll(p.exponent_logits, p.mu_per_exponent, p.log_sigma, _value(v))[0])


def dexp_grad(p, v):
    """
    Analytic gradient of `dexp_nll`, shaped like `p`.
    """
    _, d_logits, d_mu, d_log_sigma = mixture_nll_grad(
        p.exponent_logits, p.mu_per_exponent, p.log_sigma, _value(v),
    )
    return DExpParams(
        exponent_logits=d_logits[0], mu_per_exponent=d_mu[0], log_sigma=d_log_sigma[0],
    )


def dexp_predict(p):
    return float(mixture_predict(p.exponent_logits, p.mu_per_exponent, p.log_sigma)[0])


def dexp_sample(p, rng, size=None):
    """
    Draws an exponent from the multinomial, then a value from its component.
    """
    k = rng.choice(N_EXPONENTS, size=size, p=p.probabilities)
    u = rng.random(size)
    value = _ppf(u, p.mu_per_exponent[k], p.sigma, LOWER[k], UPPER[k])
    return float(value) if np.ndim(value) == 0 else value


def clamp_log_sigma(log_sigma):
    return np.clip(log_sigma, math.log(SIGMA_MIN), math.log(SIGMA_MAX))
