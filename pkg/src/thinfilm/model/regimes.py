# -*- coding: utf-8 -*-

"""Theorem hypotheses as a decision procedure, plus the derived exponent formulas."""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .params import ModelParams
from ..errors import DomainError

Number = Union[int, float]


@dataclass(frozen=True)
class Interval:
    """Open interval ``(lo, hi)``; ``lo == hi`` is a degenerate single point, ``lo > hi`` is empty."""

    lo: float
    hi: float

    @property
    def empty(self) -> bool:
        """Whether the open interval contains no point."""
        return not self.lo < self.hi

    @property
    def degenerate(self) -> bool:
        """Whether the closure collapses to a single point."""
        return self.lo == self.hi

    @property
    def midpoint(self) -> float:
        """Center of the interval."""
        return 0.5 * (self.lo + self.hi)

    def contains(self, value: float) -> bool:
        """Whether ``value`` lies in the open interval."""
        return self.lo < value < self.hi

    def closure_contains(self, value: float, tol: float = 0.0) -> bool:
        """Whether ``value`` lies in the closed interval, up to ``tol``."""
        return self.lo - tol <= value <= self.hi + tol


@dataclass(frozen=True)
class RegimeReport:
    """Which theorem hypotheses a parameter set satisfies."""

    weak_existence: bool
    weak_case: Optional[str]
    strong_entropy: bool
    local_energy: bool
    fsp_strong_slip: bool
    fsp_weak_slip: bool
    via_bound: bool = False
    notes: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def fsp(self) -> bool:
        """Whether finite speed of propagation is proven in either slippage regime."""
        return self.fsp_strong_slip or self.fsp_weak_slip

    @property
    def uncovered(self) -> bool:
        """Whether no theorem covers the parameters."""
        return not self.weak_existence

    def as_dict(self) -> Dict[str, object]:
        """Flatten to ``key -> value`` for printing."""
        return {
            'weak_existence': self.weak_existence,
            'weak_case': self.weak_case or 'none',
            'strong_entropy': self.strong_entropy,
            'local_energy': self.local_energy,
            'fsp_strong_slip': self.fsp_strong_slip,
            'fsp_weak_slip': self.fsp_weak_slip,
            'fsp': self.fsp,
            'via_bound': self.via_bound,
            'uncovered': self.uncovered,
        }


def classify_regime(p: ModelParams) -> RegimeReport:
    """Decide which existence, entropy, local energy and propagation results apply to ``p``.

    Strict inequalities of the hypotheses are checked strictly, so boundary values do not qualify.
    Variant potentials are classified through the power they are bounded by, and flagged ``via_bound``.

    :param p: valid model parameters
    :return: the regime report; ``notes`` lists every violated hypothesis
    """
    nu, m, M, A, via_bound = p.effective_exponents()
    n = p.n
    notes: List[str] = []

    weak_case = _weak_existence_case(nu, n, m, M, A, notes)
    if weak_case is None:
        return RegimeReport(
            weak_existence=False,
            weak_case=None,
            strong_entropy=False,
            local_energy=False,
            fsp_strong_slip=False,
            fsp_weak_slip=False,
            via_bound=via_bound,
            notes=tuple(notes),
        )

    strong = _strong_entropy(nu, n, m, A, notes)
    local_energy = strong and _local_energy(nu, n, m, A, notes)
    strong_slip = strong and _fsp_strong_slip(nu, n, m, A, notes)
    weak_slip = strong and _fsp_weak_slip(nu, n, m, A, notes)
    if not strong:
        notes.append('finite speed of propagation and the local energy estimate need the local entropy estimate')
    if n >= 3:
        notes.append('n >= 3: entropy solutions need not be strong')

    return RegimeReport(
        weak_existence=True,
        weak_case=weak_case,
        strong_entropy=strong,
        local_energy=local_energy,
        fsp_strong_slip=strong_slip,
        fsp_weak_slip=weak_slip,
        via_bound=via_bound,
        notes=tuple(notes),
    )


def _weak_existence_case(nu: int, n: float, m: float, M: float, A: float, notes: List[str]) -> Optional[str]:
    if n <= 0:
        notes.append('weak existence: needs n > 0')
        return None
    if not n - 2 < m:
        notes.append(f'weak existence: needs m > n - 2 = {n - 2:g}')
        return None
    if A > 0 and not m < M:
        notes.append('weak existence: needs m < M when A > 0')
        return None
    if nu == -1:
        return 'i'
    if A > 0:
        return 'ii'
    if m < n + 2:
        return 'iii'
    notes.append(f'weak existence: needs m < n + 2 = {n + 2:g} when nu = 1, A = 0; blow up may occur for m >= n + 2')
    return None


def _strong_entropy(nu: int, n: float, m: float, A: float, notes: List[str]) -> bool:
    if nu == -1:
        if m - n >= -2:
            return True
        notes.append('stable entropy estimate: needs m - n >= -2')
        return False

    holds = True
    if not m - n > -1.5:
        notes.append('unstable entropy estimate: needs m - n > -3/2')
        holds = False
    if A == 0 and not m - n < 2:
        notes.append('unstable entropy estimate: needs m - n < 2 when A = 0')
        holds = False
    return holds


def _local_energy(nu: int, n: float, m: float, A: float, notes: List[str]) -> bool:
    holds = True
    if not 2 <= n < 3:
        notes.append('local energy estimate: needs 2 <= n < 3')
        holds = False
    if nu == 1 and A == 0 and not m < n + 2:
        notes.append('local energy estimate: needs m < n + 2 when nu = 1, A = 0')
        holds = False
    if nu == -1:
        if not m - 0.75 * n >= -1:
            notes.append('local energy estimate: needs m - 3n/4 >= -1 when nu = -1')
            holds = False
    elif n < 2.5:
        if not 3 * m - 2 * n > -2:
            notes.append('local energy estimate: needs m - 2n/3 > -2/3 when nu = 1, n < 5/2')
            holds = False
    elif not m - n > -1.5:
        notes.append('local energy estimate: needs m - n > -3/2 when nu = 1, n >= 5/2')
        holds = False
    return holds


def _fsp_strong_slip(nu: int, n: float, m: float, A: float, notes: List[str]) -> bool:
    holds = True
    if not 0 < n < 2:
        notes.append('strong slippage propagation: needs 0 < n < 2')
        holds = False
    if nu == 1 and A == 0 and not m < n + 2:
        notes.append('strong slippage propagation: needs m < n + 2 when nu = 1, A = 0')
        holds = False
    if nu == -1 and not m > 0:
        notes.append('strong slippage propagation: needs m > 0 when nu = -1')
        holds = False
    if nu == 1 and not m > n / 2:
        notes.append(f'strong slippage propagation: needs m > n/2 = {n / 2:g} when nu = 1')
        holds = False
    return holds


def _fsp_weak_slip(nu: int, n: float, m: float, A: float, notes: List[str]) -> bool:
    holds = True
    if not 0.5 < n < 3:
        notes.append('weak slippage propagation: needs 1/2 < n < 3')
        holds = False
    if not m > n / 2:
        notes.append(f'weak slippage propagation: needs m > n/2 = {n / 2:g}')
        holds = False
    if nu == 1 and A == 0 and not m < n + 2:
        notes.append('weak slippage propagation: needs m < n + 2 when nu = 1, A = 0')
        holds = False
    if holds and admissible_eta(n, m) is None:
        notes.append('weak slippage propagation: no admissible eta for the interpolation exponents')
        holds = False
    return holds


def _check_open_unit(n: float) -> None:
    if not 0 < n < 3:
        raise DomainError(f'n must lie in (0, 3), got {n}')


def alpha_star(n: float) -> float:
    """Return the data-independent upper bound for the entropy exponent's lower limit.

    :param n: mobility exponent in (0, 3)
    :return: ``1/2 - n`` for ``n <= 3/2``, ``-1`` otherwise
    :raises DomainError: for n outside (0, 3)
    """
    _check_open_unit(n)
    if n <= 1.5:
        return 0.5 - n
    return -1.0


def beta_zero_bound(n: float) -> float:
    """Return the guaranteed regularity bound β0 for ``u^(1/β)``.

    :param n: mobility exponent in (0, 3)
    :return: ``2`` for ``n <= 3/2``, ``3/n`` otherwise
    :raises DomainError: for n outside (0, 3)
    """
    _check_open_unit(n)
    if n <= 1.5:
        return 2.0
    return 3.0 / n


def regularity_exponent(p: ModelParams, alpha0: Optional[float] = None) -> float:
    """Regularity exponent β0 for given entropy exponent lower limit ``alpha0``.

    The stable case takes ``max(3/(n+α0+1), 1/(m+α0+1))``; the unstable case first raises α0 to
    ``n - 2m - 1``. Without ``alpha0`` the data-free bound ``alpha_star(n)`` is used.
    """
    nu, m, _, _, _ = p.effective_exponents()
    n = p.n
    if alpha0 is None:
        alpha0 = alpha_star(n)
    if nu == -1:
        candidates = [3.0 / (n + alpha0 + 1)]
        if m + alpha0 + 1 > 0:
            candidates.append(1.0 / (m + alpha0 + 1))
        return max(candidates)
    alpha1 = max(alpha0, n - 2 * m - 1)
    return 3.0 / (n + alpha1 + 1)


def gamma_window(alpha: float, n: float) -> Interval:
    """Return the admissible interval for γ given ``t = alpha + n``.

    :raises DomainError: if ``t`` lies outside ``[1/2, 2]`` (empty window)
    """
    t = alpha + n
    if t < 0.5 or t > 2:
        raise DomainError(f'gamma window is empty for alpha + n = {t:g} outside [1/2, 2]')
    root = math.sqrt(max((t - 2) * (1 - 2 * t), 0.0))
    return Interval((t + 1 - root) / 3, (t + 1 + root) / 3)


def eta_window(n: float, m: float) -> Interval:
    """Return the weak-slippage η interval; it is empty exactly when ``2m - n <= 0``."""
    eta_min = 1 - n / 2
    return Interval(eta_min, eta_min + 1.5 * (2 * m - n))


def entropy_alpha_window(p: ModelParams) -> Interval:
    """Return the open window of α for the local entropy estimate (0 and -1 excluded separately)."""
    nu, m, _, _, _ = p.effective_exponents()
    n = p.n
    lower = max(alpha_star(n), -m - 1)
    if nu == 1:
        lower = max(lower, n - 2 * m - 1)
    return Interval(lower, 2 - n)


def is_admissible_entropy_alpha(alpha: float, p: ModelParams) -> bool:
    """Whether α is admissible for the local entropy estimate of ``p``."""
    if alpha in (0.0, -1.0):
        return False
    try:
        return entropy_alpha_window(p).contains(alpha)
    except DomainError:
        return False


def fsp_betas(n: float, m: float) -> Tuple[float, float, float]:
    """Weights ``(n, m, 2m - n)`` of the energy functions.

    For ``m >= 6 - n`` the lower-order exponent is replaced by ``m̄ = (n/2 + min(6 - n, m)) / 2``.
    """
    if m >= 6 - n:
        m = substituted_exponent(n, m)
    return n, m, 2 * m - n


def substituted_exponent(n: float, m: float) -> float:
    """Deterministic ``m̄`` in ``(n/2, 6 - n)`` used when ``m >= 6 - n``."""
    return 0.5 * (n / 2 + min(6 - n, m))


def mu_exponents(n: float, betas: Sequence[Number], alpha: float) -> Tuple[float, ...]:
    """Return ``μ_i = 4 β_i / (n + 4(α + 1))``.

    :raises DomainError: unless every ``β_i < n + 4(α + 1)`` (so that ``μ_i < 4``)
    """
    scale = n + 4 * (alpha + 1)
    if scale <= 0:
        raise DomainError(f'n + 4(alpha + 1) must be positive, got {scale:g}')
    for beta in betas:
        if not beta < scale:
            raise DomainError(f'beta = {beta:g} must be below n + 4(alpha + 1) = {scale:g}')
    return tuple(4 * beta / scale for beta in betas)


@dataclass(frozen=True)
class WeakSlipExponents:
    """Exponent bookkeeping of the weak-slippage argument for one η.

    The eight energy terms are ``δ^-χ_i ∫ u^ξ_i`` over the shrinking domain; ``thetas`` are the
    interpolation exponents and ``powers`` the resulting exponents of the functional system.
    """

    eta: float
    xi: Tuple[float, ...]
    chi: Tuple[float, ...]
    thetas: Tuple[float, ...]
    powers: Tuple[float, ...]
    admissible: bool


#: Powers of δ^-1 in front of each of the eight weak-slippage terms
WEAK_SLIP_CHI = (0.0, 0.0, 0.0, 6.0, 2.0, 2.0, 2.0, 3.0)


def weak_slip_exponents(n: float, m: float, eta: float) -> WeakSlipExponents:
    """Evaluate the weak-slippage exponents for given ``n``, ``m`` and ``η``.

    ``admissible`` requires η in :func:`eta_window`, ``η > (1 - n)/3``, every ``ξ_i > 1 + η`` and
    every ``η > (ξ_i - n - 8)/6``.
    """
    xi = (
        3 * m - 2 * n + 2,
        (3 * m + 3 * eta + 1 - n) / 2,
        n + 3 * eta - 1,
        n + 2,
        2 * m - n + 2,
        n + 2 * eta,
        m + eta + 1,
        (3 * m - n + 4) / 2,
    )
    scale = 5 * eta + n + 7
    thetas = tuple((n + 2) * (value - eta - 1) / (value * scale) for value in xi)
    powers = tuple(1 + 6 * (value - eta - 1) / scale for value in xi)
    admissible = (
        eta_window(n, m).contains(eta)
        and eta > (1 - n) / 3
        and all(value > 1 + eta for value in xi)
        and all(eta > (value - n - 8) / 6 for value in xi)
    )
    return WeakSlipExponents(
        eta=eta,
        xi=xi,
        chi=WEAK_SLIP_CHI,
        thetas=thetas,
        powers=powers,
        admissible=admissible,
    )


def admissible_eta(n: float, m: float, samples: int = 201) -> Optional[float]:
    """Return an η satisfying every weak-slippage condition, or ``None`` if none is found.

    The η window is scanned on an even grid and the first admissible value is returned.
    """
    window = eta_window(n, m)
    if window.empty:
        return None
    for eta in np.linspace(window.lo, window.hi, samples + 2)[1:-1]:
        if weak_slip_exponents(n, m, float(eta)).admissible:
            return float(eta)
    return None
