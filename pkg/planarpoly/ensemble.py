"""
Monte Carlo over truncated Haar unitary matrices.

Sample ``i`` of a run with seed ``s`` always comes from the Philox stream
keyed by (s, i), so results are independent of the thread count; reductions
run in sample order.
"""
import logging
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import linalg, stats

from .asymptotics import clt_standardize
from .conf import settings
from .exceptions import AccuracyError, ParameterRangeError, VarianceWarning

logger = logging.getLogger(__name__)

MAX_SIZE = 512


@dataclass(frozen=True)
class EnsembleSample:
    eigenvalues: np.ndarray
    logdet: float
    seed: int
    index: int


@dataclass(frozen=True)
class McEstimate:
    mean: float
    standard_error: float
    samples: int
    seed: int

    @property
    def log_mean(self):
        return math.log(self.mean) if self.mean > 0 else -math.inf


@dataclass(frozen=True)
class CltSummary:
    mean: float
    variance: float
    ks_statistic: float
    ks_pvalue: float
    samples: int
    seed: int


def generator(seed, index):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, index])))


def haar_columns(big_n, n, rng):
    """
    First n columns of an N x N Haar unitary: QR of a complex Gaussian block
    with the diagonal of R rotated to the positive reals.
    """
    block = (rng.standard_normal((big_n, n)) + 1j * rng.standard_normal((big_n, n))) / math.sqrt(2.0)
    q, r = linalg.qr(block, mode='economic')
    d = np.diag(r)
    q = q * (d / np.abs(d))
    defect = float(np.max(np.abs(q.conj().T @ q - np.eye(n))))
    if defect > settings.section('ENSEMBLE', 'UNITARITY_TOLERANCE'):
        raise AccuracyError('sampled columns are not orthonormal', defect=defect)
    return q


def _check_sizes(n, big_n):
    if not 0 < n < big_n:
        raise ParameterRangeError('need 0 < n < N', n=n, N=big_n)
    if int(big_n) != big_n:
        raise ParameterRangeError('the matrix model needs an integer N', N=big_n)
    if big_n > MAX_SIZE:
        raise ParameterRangeError(f'N above {MAX_SIZE}', N=big_n)


def sample_truncation(n, big_n, seed, index=0, x=0.0):
    """Eigenvalues of the leading n x n block of a Haar unitary, and log|det(B_n - x)|."""
    _check_sizes(n, big_n)
    columns = haar_columns(int(big_n), n, generator(seed, index))
    eigenvalues = linalg.eigvals(columns[:n, :])
    radius = float(np.max(np.abs(eigenvalues)))
    if radius > 1.0 + 1e-10:
        raise AccuracyError('truncation eigenvalue outside the unit disc', radius=radius)
    logdet = math.fsum(np.log(np.abs(eigenvalues - x)))
    return EnsembleSample(eigenvalues, logdet, seed, index)


def _chunk(p, seed, indices, keep):
    out = []
    for index in indices:
        sample = sample_truncation(p.n, p.N, seed, index, p.x)
        out.append(sample if keep else sample.logdet)
    return out


def draw(p, samples, seed, keep_eigenvalues=False):
    """Samples 0..samples-1 in index order; logdets only unless ``keep_eigenvalues``."""
    cfg = settings.ENSEMBLE
    size = cfg['CHUNK_SIZE']
    chunks = [range(start, min(start + size, samples)) for start in range(0, samples, size)]
    threads = max(1, int(cfg['THREADS']))
    logger.info('drawing %d samples (n=%d, N=%s) on %d threads', samples, p.n, p.N, threads)
    if threads == 1:
        parts = [_chunk(p, seed, chunk, keep_eigenvalues) for chunk in chunks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda chunk: _chunk(p, seed, chunk, keep_eigenvalues), chunks))
    flat = [item for part in parts for item in part]
    return flat if keep_eigenvalues else np.array(flat)


def _mean_and_error(values):
    count = len(values)
    mean = math.fsum(values) / count
    if count < 2:
        return mean, math.inf
    variance = math.fsum((values - mean) ** 2) / (count - 1)
    return mean, math.sqrt(variance / count)


def mc_rgamma(p, samples, seed, allow_heavy_tail=False):
    """Monte Carlo estimate of E|det(B_n - x)|^gamma."""
    if not p.gamma_is_real:
        raise ParameterRangeError('Monte Carlo needs a real gamma', gamma=p.gamma)
    if samples < 1:
        raise ParameterRangeError('need at least one sample', samples=samples)
    gamma = p.gamma.real
    if gamma <= -1.0:
        message = f'gamma={gamma:g} <= -1: the estimator has infinite variance'
        if not allow_heavy_tail:
            raise ParameterRangeError(message, gamma=gamma)
        logger.warning(message)
        warnings.warn(message, VarianceWarning, stacklevel=2)
    logdets = draw(p, samples, seed)
    values = np.exp(gamma * logdets)
    mean, error = _mean_and_error(values)
    return McEstimate(mean, error, samples, seed)


def clt_summary(logdets, p, seed):
    standardized = clt_standardize(logdets, p)
    samples = len(standardized)
    mean = math.fsum(standardized) / samples
    variance = math.fsum((standardized - mean) ** 2) / (samples - 1)
    ks = stats.kstest(standardized, 'norm')
    return CltSummary(mean, variance, float(ks.statistic), float(ks.pvalue), samples, seed)


def clt_empirical(p, samples, seed):
    """Standardized log|det| sample: mean, variance and KS distance to N(0, 1)."""
    if samples < 2:
        raise ParameterRangeError('the CLT summary needs at least two samples', samples=samples)
    return clt_summary(draw(p, samples, seed), p, seed)


def rotation_chi_square(eigenvalues, bins=16):
    """Chi-square test of uniformity of arg(lambda); returns (statistic, p-value)."""
    angles = np.angle(np.asarray(eigenvalues))
    counts, _ = np.histogram(angles, bins=bins, range=(-math.pi, math.pi))
    result = stats.chisquare(counts)
    return float(result.statistic), float(result.pvalue)


def sample_rows(samples):
    """CSV rows (index, eig_re, eig_im, logdet), one per eigenvalue."""
    return [
        (sample.index, eig.real, eig.imag, sample.logdet)
        for sample in samples for eig in sample.eigenvalues
    ]
