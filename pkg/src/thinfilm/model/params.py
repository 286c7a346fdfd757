# -*- coding: utf-8 -*-

"""Model parameters of one thin-film equation instance."""

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Tuple, Union

from ..errors import ParameterError


@dataclass(frozen=True)
class PowerLaw:
    """Power-law lower-order terms ``nu u^(m-n) - A u^(M-n)``."""

    kind: str = field(default='power_law', init=False)


@dataclass(frozen=True)
class RationalGravity:
    """Force ``h'(u) = u (1 + B u)^-2 - nubar G`` (capillary part plus gravity)."""

    B: float = 1.0
    G: float = 1.0
    nubar: float = 0.0
    kind: str = field(default='rational_gravity', init=False)


@dataclass(frozen=True)
class ExponentialPolar:
    """Force ``h'(u) = (b1 / b2) exp(-u / b2)`` of polar van der Waals type."""

    b1: float = 1.0
    b2: float = 1.0
    kind: str = field(default='exponential_polar', init=False)


PotentialVariant = Union[PowerLaw, RationalGravity, ExponentialPolar]

#: Exponent offset ``m - n`` bounding each variant potential
VARIANT_EXPONENT_OFFSET = {
    'rational_gravity': -1.0,
    'exponential_polar': 0.0,
}


def variant_from_dict(data: Dict[str, Any]) -> PotentialVariant:
    """Build a potential variant from its serialized form.

    :param data: mapping with a ``kind`` key and the variant's parameters
    :return: the potential variant
    :raises ParameterError: for an unknown kind or unknown parameter
    """
    values = dict(data)
    kind = values.pop('kind', 'power_law')
    match kind:
        case 'power_law':
            cls: Any = PowerLaw
        case 'rational_gravity':
            cls = RationalGravity
        case 'exponential_polar':
            cls = ExponentialPolar
        case _:
            raise ParameterError('potential.kind', f'unknown potential variant {kind!r}')
    try:
        return cls(**{key: float(value) for key, value in values.items()})  # type: ignore[no-any-return]
    except TypeError as error:
        raise ParameterError('potential', str(error)) from None


def variant_to_dict(variant: PotentialVariant) -> Dict[str, Any]:
    """Serialize a potential variant, ``kind`` included."""
    return dataclasses.asdict(variant)


@dataclass(frozen=True)
class ModelParams:
    """Parameters ``(nu, n, m, M, A, eps, theta, a)`` plus the potential variant.

    Instances are validated on construction, so every ``ModelParams`` in circulation is valid.
    """

    nu: int = 1
    n: float = 1.0
    m: float = 1.0
    M: float = 2.0
    A: float = 0.0
    eps: float = 0.0
    theta: float = 0.4
    half_width: float = 1.0
    potential: PotentialVariant = field(default_factory=PowerLaw)

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        """Check the parameter invariants.

        :raises ParameterError: naming the first offending field
        """
        if self.nu not in (1, -1):
            raise ParameterError('nu', f'must be +1 or -1, got {self.nu}')
        for name in ('n', 'm', 'M', 'A', 'eps', 'theta', 'half_width'):
            if not math.isfinite(getattr(self, name)):
                raise ParameterError(name, 'must be finite')
        if self.n <= 0:
            raise ParameterError('n', f'must be positive, got {self.n}')
        if self.A < 0:
            raise ParameterError('A', f'must be nonnegative, got {self.A}')
        if self.A > 0 and self.M <= self.m:
            raise ParameterError('M', f'must exceed m={self.m} when A > 0, got {self.M}')
        if self.eps < 0:
            raise ParameterError('eps', f'must be nonnegative, got {self.eps}')
        if not 0 < self.theta <= 0.4:
            raise ParameterError('theta', f'must lie in (0, 2/5], got {self.theta}')
        if self.half_width <= 0:
            raise ParameterError('half_width', f'must be positive, got {self.half_width}')

        variant = self.potential
        if isinstance(variant, RationalGravity):
            if variant.B <= 0 or variant.G <= 0:
                raise ParameterError('potential', 'rational gravity requires B > 0 and G > 0')
            if variant.nubar < 0:
                raise ParameterError('potential.nubar', 'must be nonnegative')
        elif isinstance(variant, ExponentialPolar):
            if variant.b1 <= 0 or variant.b2 <= 0:
                raise ParameterError('potential', 'exponential polar requires b1 > 0 and b2 > 0')
        elif not isinstance(variant, PowerLaw):
            raise ParameterError('potential', f'unknown potential variant {variant!r}')

    def with_updates(self, **changes: Any) -> 'ModelParams':
        """Return a validated copy with the given fields replaced."""
        if 'nu' in changes:
            changes['nu'] = _as_sign(changes['nu'])
        return dataclasses.replace(self, **changes)

    @property
    def is_power_law(self) -> bool:
        """Whether the lower-order terms are the power-law ones."""
        return isinstance(self.potential, PowerLaw)

    def effective_exponents(self) -> Tuple[int, float, float, float, bool]:
        """Return ``(nu, m, M, A, via_bound)`` as seen by the theorem hypotheses.

        Variant potentials are majorized by a single power ``u^(m-n)`` with ``nu = 1``, ``A = 0``.
        """
        if self.is_power_law:
            return self.nu, self.m, self.M, self.A, False
        offset = VARIANT_EXPONENT_OFFSET[self.potential.kind]
        return 1, self.n + offset, self.M, 0.0, True

    def to_dict(self) -> Dict[str, Any]:
        """Serialize to plain python values."""
        data = {
            name.name: getattr(self, name.name)
            for name in dataclasses.fields(self)
            if name.name != 'potential'
        }
        data['potential'] = variant_to_dict(self.potential)
        return data


def _as_sign(value: Any) -> Any:
    """Coerce integral floats such as ``-1.0`` to ints so ``nu`` compares as a sign."""
    if isinstance(value, float) and value.is_integer():
        return int(value)
    return value
