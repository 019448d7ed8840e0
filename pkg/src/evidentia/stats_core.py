"""Probability primitives used by every likelihood-ratio model.

Normal and bivariate normal densities, the scaled (non)central chi-squared
law with one degree of freedom, a Gaussian kernel density estimator and
seeded random streams.  Densities are returned on the log scale so ratios
can be formed as differences without underflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, log_ndtr

from .errors import DegenerateLawError, DomainError, EstimationError, ParameterError

_LOG_2PI = math.log(2.0 * math.pi)
_LOG_2 = math.log(2.0)

# Floor applied to KDE densities so log ratios stay finite.
KDE_DENSITY_FLOOR = 1e-300

SERIES_RTOL = 1e-15

_UINT64_MAX = 2**64 - 1


def _scalar_or_array(values):
    values = np.asarray(values, dtype=float)
    return values[()] if values.ndim == 0 else values


# ---------------------------------------------------------------------------
# Normal laws
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NormalLaw:
    mean: float
    variance: float

    def __post_init__(self):
        if not (math.isfinite(self.mean) and math.isfinite(self.variance)):
            raise ParameterError(f"normal law needs finite parameters, got {self!r}")
        if self.variance <= 0:
            raise ParameterError(f"normal variance must be > 0, got {self.variance}")


def normal_log_pdf(x, law: NormalLaw):
    """Log density of ``law`` at ``x`` (scalar or array)."""
    x = np.asarray(x, dtype=float)
    z2 = (x - law.mean) ** 2 / law.variance
    return _scalar_or_array(-0.5 * (_LOG_2PI + math.log(law.variance) + z2))


@dataclass(frozen=True)
class BivariateNormalLaw:
    """Two dimensional normal law.

    ``covariance`` is stored as a nested tuple ``((a, b), (b, c))``.  A
    singular (but positive semi-definite) matrix is a valid law; only its
    density is undefined.
    """

    mean: tuple
    covariance: tuple

    def __post_init__(self):
        mean = tuple(float(m) for m in self.mean)
        cov = tuple(tuple(float(v) for v in row) for row in self.covariance)
        if len(mean) != 2 or len(cov) != 2 or any(len(row) != 2 for row in cov):
            raise ParameterError("bivariate law needs a 2-vector mean and a 2x2 covariance")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", cov)
        (a, b), (b2, c) = cov
        if b != b2:
            raise ParameterError(f"covariance must be symmetric, got {cov}")
        if a <= 0 or c <= 0:
            raise ParameterError(f"covariance diagonal must be > 0, got {cov}")
        if b * b > a * c:
            raise ParameterError(f"covariance is not positive semi-definite: {cov}")

    @property
    def determinant(self) -> float:
        (a, b), (_, c) = self.covariance
        return a * c - b * b


def bivariate_normal_log_pdf(x, law: BivariateNormalLaw):
    """Log density of a 2D normal; ``x`` has shape ``(2,)`` or ``(n, 2)``."""
    det = law.determinant
    if not det > 0:
        raise DegenerateLawError(f"covariance determinant is {det}; density undefined")
    x = np.asarray(x, dtype=float)
    (a, b), (_, c) = law.covariance
    dx = x[..., 0] - law.mean[0]
    dy = x[..., 1] - law.mean[1]
    quad = (c * dx * dx - 2.0 * b * dx * dy + a * dy * dy) / det
    return _scalar_or_array(-0.5 * (2.0 * _LOG_2PI + math.log(det) + quad))


# ---------------------------------------------------------------------------
# Scaled chi-squared with one degree of freedom
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScaledChiSq1:
    """Law of ``scale * X`` with ``X ~ chi2_1(noncentrality)``.

    Equivalently the law of ``W**2`` where ``W ~ N(m, scale)`` and
    ``noncentrality = m**2 / scale``.
    """

    scale: float
    noncentrality: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.scale) and self.scale > 0):
            raise ParameterError(f"chi-squared scale must be finite and > 0, got {self.scale}")
        if not (math.isfinite(self.noncentrality) and self.noncentrality >= 0):
            raise ParameterError(f"noncentrality must be finite and >= 0, got {self.noncentrality}")

    @classmethod
    def of_squared_normal(cls, mean: float, variance: float) -> "ScaledChiSq1":
        """Law of ``W**2`` for ``W ~ N(mean, variance)``."""
        return cls(scale=variance, noncentrality=mean * mean / variance)


def _logsumexp_rows(a):
    top = np.max(a, axis=1)
    safe = np.where(np.isfinite(top), top, 0.0)
    with np.errstate(divide="ignore"):
        return safe + np.log(np.sum(np.exp(a - safe[:, None]), axis=1))


def _central_log_pdf(y):
    return -0.5 * (_LOG_2PI + np.log(y)) - 0.5 * y


def _noncentral_log_pdf(y, lam, rtol):
    # Poisson(lam/2) mixture of chi2_{1+2k} densities.  Terms are log-concave
    # in k, so the sum is taken over a window centred on the largest term and
    # widened until both edge terms fall below rtol of the running sum.
    half = 0.5 * lam
    log_half = math.log(half)
    log_y = np.log(y)
    mode = np.floor(np.maximum(0.0, 0.5 * (np.sqrt(0.25 + lam * y) - 1.5)))
    width = int(math.ceil(7.0 * math.sqrt(float(mode.max()) + 1.0))) + 16
    log_rtol = math.log(rtol)
    while True:
        offsets = np.arange(-width, width + 1, dtype=float)
        k = mode[:, None] + offsets[None, :]
        valid = k >= 0
        kk = np.where(valid, k, 0.0)
        terms = (
            -half
            + kk * log_half
            - gammaln(kk + 1.0)
            + (kk - 0.5) * log_y[:, None]
            - 0.5 * y[:, None]
            - (kk + 0.5) * _LOG_2
            - gammaln(kk + 0.5)
        )
        terms = np.where(valid, terms, -np.inf)
        total = _logsumexp_rows(terms)
        low_ok = (~valid[:, 0]) | (terms[:, 0] - total < log_rtol)
        high_ok = terms[:, -1] - total < log_rtol
        if np.all(low_ok & high_ok):
            return total
        width *= 2


def scaled_chisq1_log_pdf(x, law: ScaledChiSq1, rtol: float = SERIES_RTOL):
    """Log density of ``law`` at ``x > 0``.

    The noncentral case is the Poisson mixture of central chi-squared
    densities, accumulated in log space and truncated once the remaining
    terms fall below ``rtol`` of the running sum.
    """
    if isinstance(x, (float, int)) and not isinstance(x, bool):
        if not x > 0:
            raise DomainError("scaled chi-squared density is only defined for x > 0")
        if not math.isfinite(x):
            raise DomainError("scaled chi-squared density needs finite x")
        y = x / law.scale
        if law.noncentrality == 0:
            return float(_central_log_pdf(y)) - math.log(law.scale)
        return float(_noncentral_log_pdf(np.array([y]), law.noncentrality, rtol)[0]) - math.log(law.scale)
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError("scaled chi-squared density is only defined for x > 0")
    if not np.all(np.isfinite(x)):
        raise DomainError("scaled chi-squared density needs finite x")
    y = np.atleast_1d(x / law.scale).ravel()
    if law.noncentrality == 0:
        out = _central_log_pdf(y)
    else:
        out = np.empty_like(y)
        # Keep the (rows, window) work array near 2**21 entries.
        peak = float(np.max(np.sqrt(law.noncentrality * y)))
        step = max(1, 2**21 // (2 * int(7.0 * math.sqrt(0.5 * peak + 1.0) + 16) + 1))
        for start in range(0, y.size, step):
            chunk = y[start:start + step]
            out[start:start + step] = _noncentral_log_pdf(chunk, law.noncentrality, rtol)
    out = out - math.log(law.scale)
    return _scalar_or_array(out.reshape(x.shape))


def scaled_chisq1_log_sf(x, law: ScaledChiSq1):
    """Log of ``P(X > x)``."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(np.isnan(x)):
        raise DomainError("scaled chi-squared tail needs x >= 0")
    r = np.sqrt(x / law.scale)
    m = math.sqrt(law.noncentrality)
    with np.errstate(divide="ignore"):
        out = np.logaddexp(log_ndtr(m - r), log_ndtr(-m - r))
    return _scalar_or_array(out)


def scaled_chisq1_log_cdf(x, law: ScaledChiSq1):
    """Log of ``P(X <= x)``; ``-inf`` at ``x = 0``."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(np.isnan(x)):
        raise DomainError("scaled chi-squared cdf needs x >= 0")
    r = np.sqrt(x / law.scale)
    m = math.sqrt(law.noncentrality)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_sf = np.logaddexp(log_ndtr(m - r), log_ndtr(-m - r))
        from_sf = np.log1p(-np.exp(log_sf))
        # P(-r - m < W < r - m) for W standard normal, stable when both tails are small.
        la = log_ndtr(r - m)
        lb = log_ndtr(-r - m)
        from_diff = la + np.log1p(-np.exp(lb - la))
        # Narrow interval: midpoint rule with corrections to fourth order.
        w = 2.0 * r
        m2, w2 = m * m, w * w
        corr = (m2 - 1.0) * w2 / 24.0 + (m2 * m2 - 6.0 * m2 + 3.0) * w2 * w2 / 1920.0
        narrow = np.log(w) - 0.5 * (_LOG_2PI + m2) + np.log1p(corr)
        from_diff = np.where(w * max(1.0, m) < 1e-2, narrow, from_diff)
        out = np.where(log_sf < -_LOG_2, from_sf, from_diff)
        out = np.where(x == 0, -np.inf, out)
    return _scalar_or_array(out)


def scaled_chisq1_cdf(x, law: ScaledChiSq1):
    """``P(X <= x)`` for ``x >= 0``."""
    return _scalar_or_array(np.exp(scaled_chisq1_log_cdf(x, law)))


# ---------------------------------------------------------------------------
# Kernel density estimation
# ---------------------------------------------------------------------------

_TRANSFORMS = ("identity", "log")


@dataclass(frozen=True, eq=False)
class Kde1D:
    """Gaussian-kernel density estimate.

    With ``transform="log"`` the kernels live on ``log(x)`` and the density
    returned by :func:`kde_log_pdf` carries the ``1/x`` Jacobian, which is the
    right choice for positive, skewed samples such as squared differences.
    """

    sample: np.ndarray = field(repr=False)
    bandwidth: float
    transform: str = "identity"

    def __post_init__(self):
        if not self.bandwidth > 0:
            raise EstimationError(f"bandwidth must be > 0, got {self.bandwidth}")
        if self.transform not in _TRANSFORMS:
            raise ParameterError(f"unknown KDE transform {self.transform!r}")

    @property
    def support(self) -> tuple[float, float]:
        """Range, in the kernel's own coordinates, beyond which values are extrapolated."""
        return (float(self.sample.min() - 6 * self.bandwidth),
                float(self.sample.max() + 6 * self.bandwidth))


def silverman_bandwidth(sample) -> float:
    sample = np.asarray(sample, dtype=float)
    sd = float(np.std(sample, ddof=1))
    q75, q25 = np.percentile(sample, [75, 25])
    iqr = float(q75 - q25)
    spread = min(sd, iqr / 1.34) if iqr > 0 else sd
    return 0.9 * spread * sample.size ** (-0.2)


def kde_build(sample, transform: str = "identity", min_size: int = 50) -> Kde1D:
    """Fit a Gaussian KDE with Silverman's rule-of-thumb bandwidth."""
    sample = np.asarray(sample, dtype=float).ravel()
    if sample.size < min_size:
        raise EstimationError(f"KDE needs at least {min_size} observations, got {sample.size}")
    if not np.all(np.isfinite(sample)):
        raise EstimationError("KDE sample contains non-finite values")
    if transform == "log":
        if np.any(sample <= 0):
            raise EstimationError("log-transformed KDE needs a strictly positive sample")
        sample = np.log(sample)
    if not np.std(sample) > 0:
        raise EstimationError("KDE sample has zero spread")
    bandwidth = silverman_bandwidth(sample)
    if not bandwidth > 0:
        raise EstimationError("KDE sample has zero spread")
    return Kde1D(sample=np.sort(sample), bandwidth=bandwidth, transform=transform)


def kde_to_kernel_space(x, k: Kde1D):
    x = np.asarray(x, dtype=float)
    if k.transform == "log":
        with np.errstate(divide="ignore"):
            return np.log(x)
    return x


def kde_log_pdf(x, k: Kde1D, block: int = 1 << 16):
    """Log density of the KDE at ``x``, floored at ``log(KDE_DENSITY_FLOOR)``."""
    x = np.asarray(x, dtype=float)
    t = np.atleast_1d(kde_to_kernel_space(x, k)).ravel()
    h = k.bandwidth
    acc = np.full(t.shape, -np.inf)
    for start in range(0, k.sample.size, block):
        s = k.sample[start:start + block]
        z = (t[:, None] - s[None, :]) / h
        acc = np.logaddexp(acc, _logsumexp_rows(-0.5 * z * z))
    out = acc - math.log(k.sample.size * h) - 0.5 * _LOG_2PI
    if k.transform == "log":
        with np.errstate(invalid="ignore"):
            out = np.where(np.isfinite(t), out - t, -np.inf)
    out = np.maximum(out, math.log(KDE_DENSITY_FLOOR))
    return _scalar_or_array(out.reshape(x.shape))


# ---------------------------------------------------------------------------
# Random streams
# ---------------------------------------------------------------------------


class RngStream:
    """Counter-based random stream keyed by ``(root_seed, stream_id)``.

    Each ``(root_seed, stream_id)`` pair maps to its own Philox key through
    :class:`numpy.random.SeedSequence`, so replicates can be drawn in any
    order or in parallel and still reproduce.  A stream is mutable and must
    not be shared between workers.
    """

    def __init__(self, root_seed: int, stream_id: int = 0, _path: tuple = ()):
        for name, value in (("root_seed", root_seed), ("stream_id", stream_id)):
            if not (isinstance(value, (int, np.integer)) and 0 <= int(value) <= _UINT64_MAX):
                raise ParameterError(f"{name} must be a 64-bit unsigned integer, got {value!r}")
        self.root_seed = int(root_seed)
        self.stream_id = int(stream_id)
        self._path = tuple(int(i) for i in _path)
        seq = np.random.SeedSequence(self.root_seed, spawn_key=(self.stream_id,) + self._path)
        self.generator = np.random.Generator(np.random.Philox(seq))

    def __repr__(self):
        path = f", path={self._path}" if self._path else ""
        return f"RngStream(root_seed={self.root_seed}, stream_id={self.stream_id}{path})"

    def child(self, index: int) -> "RngStream":
        """Independent sub-stream, e.g. one per chunk of a parallel job."""
        return RngStream(self.root_seed, self.stream_id, self._path + (index,))

    def standard_normal(self, size=None):
        return self.generator.standard_normal(size)

    def uniform(self, low=0.0, high=1.0, size=None):
        return self.generator.uniform(low, high, size)


def rng_standard_normal(stream: RngStream) -> float:
    """Next standard normal variate of ``stream``."""
    return float(stream.standard_normal())
