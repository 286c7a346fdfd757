# -*- coding: utf-8 -*-

"""Regularized mobility, lower-order potentials and the entropy integrand."""

import logging
from dataclasses import dataclass
from typing import Any, Tuple, Union

import numpy as np
import numpy.typing as npt

from .params import ExponentialPolar, ModelParams, RationalGravity
from ..constants import BRANCH_TOL
from ..errors import DomainError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, npt.ArrayLike]
FloatArray = npt.NDArray[np.float64]

#: Integer exponents up to this size are evaluated by repeated multiplication
INTEGER_POWER_LIMIT = 4


@dataclass(frozen=True)
class PotentialEval:
    """Force term ``h'``, its antiderivative ``h`` and double antiderivative ``H`` at one height."""

    h_prime: Any
    h: Any
    H: Any


def spow(s: ArrayLike, p: float) -> FloatArray:
    """Evaluate ``s**p`` for ``s >= 0``.

    Small integer exponents use numpy's integer power; other exponents go through ``exp(p log s)``,
    with ``0**p`` taken as 0, 1 or ``inf`` according to the sign of ``p``.
    """
    values = np.asarray(s, dtype=float)
    if float(p).is_integer() and abs(p) <= INTEGER_POWER_LIMIT:
        with np.errstate(divide='ignore'):
            return np.asarray(np.power(values, int(p)) if p >= 0 else 1.0 / np.power(values, -int(p)), dtype=float)
    with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
        out = np.exp(p * np.log(values))
    return np.asarray(out, dtype=float)


def _scalar_or_array(values: FloatArray, like: ArrayLike) -> Any:
    if np.ndim(like) == 0:
        return float(values)
    return values


def _nonnegative(s: ArrayLike, name: str = 's') -> FloatArray:
    values = np.asarray(s, dtype=float)
    if np.any(values < 0):
        raise DomainError(f'{name} must be nonnegative')
    return values


def mobility_f_eps(s: ArrayLike, n: float, eps: float) -> Any:
    """Evaluate the regularized mobility ``f_eps(s) = s^(n+4) / (eps s^n + s^4)``.

    It is computed as ``1 / (s^-n + eps s^-4)``, which is well conditioned for small ``s`` and gives
    ``f_eps(0) = 0`` by continuity.

    :param s: film height(s), nonnegative
    :param n: mobility exponent
    :param eps: regularization, nonnegative
    :return: mobility value(s)
    :raises DomainError: for negative heights
    """
    values = _nonnegative(s)
    with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
        out = 1.0 / inverse_mobility(values, n, eps)
    return _scalar_or_array(np.asarray(out, dtype=float), s)


def inverse_mobility(s: ArrayLike, n: float, eps: float) -> FloatArray:
    """Return ``1 / f_eps(s) = s^-n + eps s^-4`` (``inf`` at 0)."""
    values = np.asarray(s, dtype=float)
    out = spow(values, -n)
    if eps > 0:
        out = out + eps * spow(values, -4)
    return out


def inverse_mobility_derivative(s: ArrayLike, n: float, eps: float) -> FloatArray:
    """Derivative of :func:`inverse_mobility`."""
    values = np.asarray(s, dtype=float)
    out = -n * spow(values, -n - 1)
    if eps > 0:
        out = out - 4 * eps * spow(values, -5)
    return out


def inverse_mobility_primitive(s: ArrayLike, n: float, eps: float) -> FloatArray:
    """Antiderivative of ``1 / f_eps``: ``s^(1-n)/(1-n) - eps s^-3 / 3`` (``ln s`` when ``n = 1``)."""
    values = np.asarray(s, dtype=float)
    with np.errstate(divide='ignore'):
        if abs(n - 1) < BRANCH_TOL:
            out = np.log(values)
        else:
            out = spow(values, 1 - n) / (1 - n)
        if eps > 0:
            out = out - eps * spow(values, -3) / 3
    return np.asarray(out, dtype=float)


def _power_terms(s: FloatArray, coefficient: float, k: float) -> Tuple[FloatArray, FloatArray, FloatArray, FloatArray]:
    """Return ``(h', h, H, h'')`` of the single term ``h' = coefficient s^k``."""
    h_prime = coefficient * spow(s, k)
    h_second = coefficient * k * spow(s, k - 1) if k != 0 else np.zeros_like(s)
    with np.errstate(divide='ignore', invalid='ignore'):
        if abs(k + 1) < BRANCH_TOL:
            h = coefficient * np.log(s)
            H = coefficient * (s * np.log(s) - s)
        elif abs(k + 2) < BRANCH_TOL:
            h = coefficient * spow(s, k + 1) / (k + 1)
            H = -coefficient * np.log(s)
        else:
            h = coefficient * spow(s, k + 1) / (k + 1)
            H = coefficient * spow(s, k + 2) / ((k + 2) * (k + 1))
    return h_prime, h, H, h_second


def _is_log_branch(k: float) -> bool:
    return abs(k + 1) < BRANCH_TOL or abs(k + 2) < BRANCH_TOL


def _evaluate(s: FloatArray, p: ModelParams) -> Tuple[FloatArray, FloatArray, FloatArray, FloatArray]:
    variant = p.potential
    if isinstance(variant, RationalGravity):
        B, gravity = variant.B, variant.nubar * variant.G
        bs = 1 + B * s
        log_bs = np.log(bs)
        h_prime = s / bs ** 2 - gravity
        h = (log_bs + 1 / bs) / B ** 2 - gravity * s
        H = ((2 + B * s) * log_bs / B - s) / B ** 2 - 0.5 * gravity * s ** 2
        h_second = (1 - B * s) / bs ** 3
        return h_prime, h, H, h_second

    if isinstance(variant, ExponentialPolar):
        decay = np.exp(-s / variant.b2)
        return (
            variant.b1 / variant.b2 * decay,
            -variant.b1 * decay,
            variant.b1 * variant.b2 * decay,
            -variant.b1 / variant.b2 ** 2 * decay,
        )

    terms = _power_terms(s, float(p.nu), p.m - p.n)
    if p.A > 0:
        extra = _power_terms(s, -p.A, p.M - p.n)
        terms = tuple(a + b for a, b in zip(terms, extra))  # type: ignore[assignment]
    return terms


def _check_zero_heights(s: FloatArray, p: ModelParams) -> None:
    if not np.any(s == 0) or not p.is_power_law:
        return
    exponents = [p.m - p.n] + ([p.M - p.n] if p.A > 0 else [])
    for k in exponents:
        if _is_log_branch(k):
            raise DomainError(f'logarithmic potential branch (m - n = {k:g}) is singular at s = 0')


def potential(s: ArrayLike, p: ModelParams) -> PotentialEval:
    """Evaluate ``h'``, ``h`` and ``H`` for the potential of ``p``.

    Power laws pick the logarithmic branches when ``m - n`` (or ``M - n``) is within
    :data:`~thinfilm.constants.BRANCH_TOL` of -1 or -2. At ``s = 0`` the continuous extension is
    used where it is finite.

    :param s: film height(s), nonnegative
    :param p: model parameters
    :return: the three values, as floats for scalar input
    :raises DomainError: for negative heights, a logarithmic branch at 0, or an infinite extension
    """
    values = _nonnegative(s)
    _check_zero_heights(values, p)
    with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
        h_prime, h, H, _ = _evaluate(values, p)
    for name, array in (('h_prime', h_prime), ('h', h), ('H', H)):
        if not np.all(np.isfinite(array)):
            raise DomainError(f'{name} is not finite at the given heights')
    return PotentialEval(
        h_prime=_scalar_or_array(h_prime, s),
        h=_scalar_or_array(h, s),
        H=_scalar_or_array(H, s),
    )


def potential_H(s: ArrayLike, p: ModelParams) -> Any:
    """Double antiderivative ``H`` alone (used by the energy)."""
    return potential(s, p).H


def force_coefficient(u: ArrayLike, p: ModelParams) -> Tuple[FloatArray, FloatArray]:
    """Return ``(h'(u), h''(u))`` without domain checks, for the discrete flux and its Jacobian.

    Non-finite values are returned as they come; callers mask heights below the power floor.
    """
    values = np.asarray(u, dtype=float)
    with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
        h_prime, _, _, h_second = _evaluate(values, p)
    return np.asarray(h_prime, dtype=float), np.asarray(h_second, dtype=float)


def entropy_G_eps(s: ArrayLike, alpha: float, n: float, eps: float) -> Any:
    """Evaluate the entropy integrand ``G_eps``.

    ``G_eps(s) = eps s^(α+n-3) / ((α+n-4)(α+n-3)) + s^(α+1) / (α(α+1))``; with ``eps = 0`` only the
    second term remains.

    :raises DomainError: for α in {0, -1}, ``α + n`` in {3, 4} with ``eps > 0``, or a non-finite value
    """
    if alpha in (0.0, -1.0):
        raise DomainError(f'alpha = {alpha:g} is excluded from the entropy')
    t = alpha + n
    if eps > 0 and (abs(t - 3) < BRANCH_TOL or abs(t - 4) < BRANCH_TOL):
        raise DomainError(f'alpha + n = {t:g} is excluded from the regularized entropy')
    values = _nonnegative(s)
    with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
        out = spow(values, alpha + 1) / (alpha * (alpha + 1))
        if eps > 0:
            out = out + eps * spow(values, t - 3) / ((t - 4) * (t - 3))
    if not np.all(np.isfinite(out)):
        raise DomainError('entropy is not finite at the given heights')
    return _scalar_or_array(np.asarray(out, dtype=float), s)
