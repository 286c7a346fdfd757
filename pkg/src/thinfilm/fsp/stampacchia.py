# -*- coding: utf-8 -*-

"""Stampacchia-type iteration lemmas as calculators.

A non-increasing ``g`` with ``g(s + δ) <= c0 (δ^-α g(s))^β`` vanishes beyond a finite offset. Besides the
closed-form offset, the calculators iterate the recurrence along a geometric sequence
``δ_k = δ0 r^k`` and report the offset by which the resulting majorant has vanished.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt
from scipy.special import logsumexp

from ..constants import STAMPACCHIA_MAX_ITERATIONS, STAMPACCHIA_VANISH
from ..errors import DomainError, NotApplicableError

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]

LOG_VANISH = math.log(STAMPACCHIA_VANISH)
#: Majorants above ``exp(LOG_BLOWUP)`` are treated as diverged
LOG_BLOWUP = 700.0
#: Geometric ratios tried by the system calculator, besides ``1/β_i``
RATIO_GRID = tuple(np.round(np.linspace(0.05, 0.95, 19), 12))
BISECTION_STEPS = 80
#: Relative enlargement of the equality step length; rounding errors grow by β per step otherwise
DELTA_SAFETY = 1 + 1e-9


@dataclass(frozen=True, eq=False)
class StampacchiaBound:
    """Offsets beyond which a scalar Stampacchia function vanishes."""

    closed_form: float
    s0_star: float
    delta0: float
    ratio: float
    #: Rows ``(s_k, g_k)`` of the iterated majorant
    trace: FloatArray


def _check_scalar(c0: float, alpha: float, beta: float, g0: float) -> None:
    if beta <= 1:
        raise DomainError(f'beta must exceed 1, got {beta}')
    if c0 <= 0:
        raise DomainError(f'c0 must be positive, got {c0}')
    if alpha <= 0:
        raise DomainError(f'alpha must be positive, got {alpha}')
    if g0 < 0:
        raise DomainError(f'g0 must be nonnegative, got {g0}')


def closed_form_offset(c0: float, beta: float, g0: float) -> float:
    """``2^(β/(β-1)) (c0 g0^(β-1))^(1/(2β))``."""
    return 2 ** (beta / (beta - 1)) * (c0 * g0 ** (beta - 1)) ** (1 / (2 * beta))


def stampacchia_s0(c0: float, alpha: float, beta: float, g0: float, ratio: Optional[float] = None) -> StampacchiaBound:
    """Offsets for the scalar lemma.

    With ``δ0 = (c0 g0^(β-1))^(1/(αβ)) r^(-1/(β-1))`` the recurrence holds with equality along
    ``g_k = g0 q^k``, ``q = r^(αβ/(β-1))``, hence ``g`` vanishes at ``s0* = δ0 / (1 - r)``. The step
    length is enlarged by ``DELTA_SAFETY`` so the iterated majorant stays strictly below the equality
    path. The ratio ``r = 1/β`` minimizes ``s0*``.

    :param c0: recurrence constant
    :param alpha: exponent of ``δ``
    :param beta: power, greater than 1
    :param g0: ``g(0)``
    :param ratio: geometric ratio in (0, 1) (default ``1/β``)
    :raises DomainError: for ``β <= 1`` or other invalid inputs
    """
    _check_scalar(c0, alpha, beta, g0)
    r = 1 / beta if ratio is None else ratio
    if not 0 < r < 1:
        raise DomainError(f'ratio must lie in (0, 1), got {r}')
    closed_form = closed_form_offset(c0, beta, g0)
    if g0 == 0:
        return StampacchiaBound(closed_form=0.0, s0_star=0.0, delta0=0.0, ratio=r, trace=np.array([[0.0, 0.0]]))

    log_delta0 = (math.log(c0) + (beta - 1) * math.log(g0)) / (alpha * beta) - math.log(r) / (beta - 1)
    log_delta0 += math.log(DELTA_SAFETY)
    delta0 = math.exp(log_delta0)

    rows = [(0.0, math.log(g0))]
    offset, log_g, log_delta = 0.0, math.log(g0), log_delta0
    for _ in range(STAMPACCHIA_MAX_ITERATIONS):
        if log_g < LOG_VANISH:
            break
        log_g = math.log(c0) + beta * (log_g - alpha * log_delta)
        offset += math.exp(log_delta)
        log_delta += math.log(r)
        rows.append((offset, log_g))
    else:
        logger.warning(f'majorant still above {STAMPACCHIA_VANISH:g} after {STAMPACCHIA_MAX_ITERATIONS} steps')

    trace = np.array([(s, math.exp(value)) for s, value in rows])
    return StampacchiaBound(
        closed_form=closed_form,
        s0_star=delta0 / (1 - r),
        delta0=delta0,
        ratio=r,
        trace=trace,
    )


@dataclass(frozen=True)
class SystemBound:
    """Result of the system lemma."""

    s0: float
    constant: float
    g_s1: float
    q_s1: float
    terms: Tuple[float, ...]
    ratio: float
    delta0: float


def _system_vanishes(
    log_delta0: float,
    ratio: float,
    log_c: FloatArray,
    alphas: FloatArray,
    betas: FloatArray,
    log_g0: FloatArray,
    leading: int,
) -> bool:
    """Iterate ``g_i <- c_i (Σ_j δ_k^-α_j g_j)^β_i`` and tell whether the first ``leading`` components vanish."""
    log_g = log_g0.copy()
    log_delta = log_delta0
    log_ratio = math.log(ratio)
    for _ in range(STAMPACCHIA_MAX_ITERATIONS):
        if np.all(log_g[:leading] < LOG_VANISH) and np.all(log_g < LOG_BLOWUP):
            return True
        if np.any(log_g > LOG_BLOWUP):
            return False
        aggregate = logsumexp(log_g - alphas * log_delta)
        log_g = log_c + betas * aggregate
        log_delta += log_ratio
    return False


def _minimal_delta0(ratio: float, log_c: FloatArray, alphas: FloatArray, betas: FloatArray, log_g0: FloatArray, leading: int) -> float:
    """Smallest ``δ0`` (by bisection in log scale) for which the iterated majorant vanishes."""
    def vanishes(log_delta: float) -> bool:
        return _system_vanishes(log_delta, ratio, log_c, alphas, betas, log_g0, leading)

    high = 0.0
    while not vanishes(high):
        high += 2.0
        if high > LOG_BLOWUP:
            raise NotApplicableError(f'no step length makes the majorant vanish for ratio {ratio:g}')
    low = high - 2.0
    while vanishes(low):
        low -= 2.0
        if low < -LOG_BLOWUP:
            return 0.0
    for _ in range(BISECTION_STEPS):
        middle = 0.5 * (low + high)
        if vanishes(middle):
            high = middle
        else:
            low = middle
    return math.exp(high)


def stampacchia_system(
    c: Sequence[float],
    alpha: Sequence[float],
    beta: Sequence[float],
    g0: Sequence[float],
    s1: float = 0.0,
) -> SystemBound:
    """Offset ``s0`` for the system lemma.

    With ``β = Π β_j``, ``β̄_i = β / β_i`` and ``c̄_i = c_i^β̄_i``, the aggregate is
    ``g = Σ c̄_i g_i^β̄_i`` and ``Q = k^β Σ_{i > l} c̄_i^(2 - β_i) g^(β_i - 1)``. The offset is
    ``s0 = s1 + C Σ_{i <= l} (c̄_i^(2 - β_i) g^(β_i - 1))^(1/(α_i β))`` where ``C`` is read off the
    shortest iterated majorant over a grid of geometric ratios.

    :param c: positive constants ``c_i``
    :param alpha: exponents, positive for the first ``l`` components and zero after
    :param beta: powers, all greater than 1
    :param g0: values ``g_i(s1)``
    :param s1: starting offset
    :raises DomainError: for malformed inputs
    :raises NotApplicableError: if ``Q(s1) >= 1``
    """
    cs, alphas, betas, values = (np.asarray(item, dtype=float) for item in (c, alpha, beta, g0))
    k = len(cs)
    if k == 0 or not len(alphas) == len(betas) == len(values) == k:
        raise DomainError('c, alpha, beta and g0 must be non-empty and of equal length')
    if np.any(betas <= 1):
        raise DomainError('every beta must exceed 1')
    if np.any(cs <= 0) or np.any(values < 0) or np.any(alphas < 0):
        raise DomainError('c must be positive, alpha and g0 nonnegative')
    leading = int(np.argmax(alphas <= 0)) if np.any(alphas <= 0) else k
    if leading == 0 or np.any(alphas[leading:] > 0):
        raise DomainError('positive alphas must come first and at least one is required')

    product = float(np.prod(betas))
    bars = product / betas
    c_bar = cs ** bars
    g_s1 = float(np.sum(c_bar * values ** bars))
    weights = c_bar ** (2 - betas)
    q_s1 = float(k ** product * np.sum(weights[leading:] * g_s1 ** (betas[leading:] - 1))) if leading < k else 0.0
    if q_s1 >= 1:
        raise NotApplicableError(f'Q(s1) = {q_s1:g} is not below 1')

    terms = tuple(
        float((weights[i] * g_s1 ** (betas[i] - 1)) ** (1 / (alphas[i] * product))) for i in range(leading)
    )
    if g_s1 == 0:
        return SystemBound(s0=s1, constant=0.0, g_s1=0.0, q_s1=q_s1, terms=terms, ratio=math.nan, delta0=0.0)

    with np.errstate(divide='ignore'):
        log_g0 = np.log(values)
    ratios = sorted(set(RATIO_GRID) | {float(1 / b) for b in betas})
    best_length, best_ratio, best_delta = math.inf, math.nan, math.nan
    for ratio in ratios:
        delta0 = _minimal_delta0(ratio, np.log(cs), alphas, betas, log_g0, leading)
        length = delta0 / (1 - ratio)
        if length < best_length:
            best_length, best_ratio, best_delta = length, ratio, delta0
    total = float(sum(terms))
    constant = best_length / total if total > 0 else math.inf
    logger.debug(f'system offset {best_length:.6g} with ratio {best_ratio:g}, C={constant:.6g}')
    return SystemBound(
        s0=s1 + best_length,
        constant=constant,
        g_s1=g_s1,
        q_s1=q_s1,
        terms=terms,
        ratio=best_ratio,
        delta0=best_delta,
    )
