# outage.py - Conditional outage probability of a link
"""
Closed-form outage probability of a Nakagami-faded link conditioned on the
normalized powers at the receiver, a Monte Carlo oracle for it, and a
vectorised form that evaluates all included links of a service realization
at once.
"""

import math
from dataclasses import dataclass
from typing import Dict, Iterable, Sequence, Tuple

import numpy as np
from scipy import special

from .channel import ChannelRealization
from .errors import InvalidInputError, NumericalInstabilityError

GUARD_BAND = 1e-9


@dataclass(frozen=True)
class Interferer:
    """Normalized power, Nakagami parameter and activity of one interferer"""

    omega: float
    m: int
    activity: float


@dataclass(frozen=True)
class LinkOutageInput:
    """Everything the closed form needs for the link k -> j"""

    desired_omega: float
    desired_m: int
    interferers: Tuple[Interferer, ...] = ()
    inv_snr: float = 1.0
    threshold: float = 2.0

    def validate(self) -> None:
        if not self.desired_omega > 0:
            raise InvalidInputError("desired normalized power must be > 0")
        if int(self.desired_m) != self.desired_m or self.desired_m < 1:
            raise InvalidInputError("desired Nakagami parameter must be a positive integer")
        if self.inv_snr < 0:
            raise InvalidInputError("inverse SNR must be ≥ 0")
        if not self.threshold > 0:
            raise InvalidInputError("SINR threshold must be > 0")
        for interferer in self.interferers:
            if not interferer.omega > 0:
                raise InvalidInputError("interferer normalized power must be > 0")
            if int(interferer.m) != interferer.m or interferer.m < 1:
                raise InvalidInputError("interferer Nakagami parameter must be a positive integer")
            if not 0 <= interferer.activity <= 1:
                raise InvalidInputError("interferer activity must lie in [0, 1]")

    @property
    def beta_kj(self) -> float:
        return self.threshold * self.desired_m / self.desired_omega


@dataclass(frozen=True, eq=False)
class OutageTable:
    """Outage probability of every included link (tx[l], rx[l])"""

    tx: np.ndarray
    rx: np.ndarray
    eps: np.ndarray

    def __len__(self) -> int:
        return len(self.eps)

    def get(self, k: int, j: int) -> float:
        match = np.flatnonzero((self.tx == k) & (self.rx == j))
        if not len(match):
            raise KeyError((k, j))
        return float(self.eps[match[0]])

    def as_dict(self) -> Dict[Tuple[int, int], float]:
        return {
            (int(k), int(j)): float(e) for k, j, e in zip(self.tx, self.rx, self.eps)
        }


def _rising_ratio(ell: int, m):
    """Gamma(ell + m) / (ell! Gamma(m))"""
    return special.poch(m, ell) / special.factorial(ell, exact=True)


def _checked(eps):
    """Reject values outside the guard band, then clamp to [0, 1]."""
    eps = np.asarray(eps, dtype=float)
    if np.any(~np.isfinite(eps)) or np.any(
        (eps < -GUARD_BAND) | (eps > 1 + GUARD_BAND)
    ):
        raise NumericalInstabilityError(
            "outage probability left [0, 1] beyond the guard band"
        )
    return np.clip(eps, 0.0, 1.0)


def term_G(ell: int, interferer: Interferer, beta_kj: float) -> float:
    """Coefficient of x**ell in the generating function of one interferer."""
    if ell < 0:
        raise InvalidInputError("degree must be ≥ 0")
    m = interferer.m
    scaled = interferer.omega / m
    psi = 1.0 / (beta_kj * scaled + 1.0)
    if ell == 0:
        return 1.0 - interferer.activity * (1.0 - psi**m)
    return float(
        interferer.activity
        * _rising_ratio(ell, m)
        * scaled**ell
        * psi ** (m + ell)
    )


def _h_coefficients(
    interferers: Sequence[Interferer], beta_kj: float, degree: int
) -> np.ndarray:
    """Coefficients 0..degree of the product of the interferer polynomials."""
    product = np.zeros(degree + 1)
    product[0] = 1.0
    for interferer in interferers:
        factor = np.array([term_G(ell, interferer, beta_kj) for ell in range(degree + 1)])
        product = np.convolve(product, factor)[: degree + 1]
    return product


def coefficient_H(t: int, interferers: Sequence[Interferer], beta_kj: float) -> float:
    """Sum over multi-indices summing to t of the products of G terms."""
    if t < 0:
        raise InvalidInputError("degree must be ≥ 0")
    return float(_h_coefficients(interferers, beta_kj, t)[t])


def outage_probability(link: LinkOutageInput) -> float:
    """
    Closed-form outage probability. The noise power z enters as
    beta^s z^(s-t) so that a noise-free link (z = 0) keeps only s = t terms.
    """
    link.validate()
    m = int(link.desired_m)
    beta_kj = link.beta_kj
    z = link.inv_snr
    h = _h_coefficients(link.interferers, beta_kj, m - 1)

    total = 0.0
    for s in range(m):
        for t in range(s + 1):
            total += beta_kj**s * z ** (s - t) * h[t] / math.factorial(s - t)
    eps = 1.0 - math.exp(-beta_kj * z) * total
    return float(_checked(eps))


def monte_carlo_outage(
    link: LinkOutageInput, draws: int, rng: np.random.Generator
) -> Tuple[float, float]:
    """Estimate the outage probability by sampling unit-mean Gamma gains."""
    link.validate()
    if draws < 1:
        raise InvalidInputError("draws must be ≥ 1")
    m = link.desired_m
    signal = rng.gamma(m, 1.0 / m, size=draws) * link.desired_omega
    interference = np.full(draws, float(link.inv_snr))
    for interferer in link.interferers:
        active = rng.random(draws) < interferer.activity
        gain = rng.gamma(interferer.m, 1.0 / interferer.m, size=draws)
        interference += active * gain * interferer.omega
    outages = np.count_nonzero(signal <= link.threshold * interference)
    eps_hat = outages / draws
    return eps_hat, math.sqrt(eps_hat * (1.0 - eps_hat) / draws)


def link_outages(
    desired_omega: np.ndarray,
    desired_m: np.ndarray,
    interferer_omega: np.ndarray,
    interferer_m: np.ndarray,
    activity: np.ndarray,
    inv_snr: float,
    threshold: float,
) -> np.ndarray:
    """
    Vectorised outage_probability for L links sharing the same interferer
    columns. Interferer arrays are (L, I); activity broadcasts against them.
    """
    desired_omega = np.asarray(desired_omega, dtype=float)
    desired_m = np.asarray(desired_m, dtype=int)
    if desired_omega.size == 0:
        return np.zeros(0)
    if np.any(desired_omega <= 0) or np.any(desired_m < 1):
        raise InvalidInputError("desired powers must be > 0 and m ≥ 1")
    interferer_omega = np.asarray(interferer_omega, dtype=float)
    interferer_m = np.asarray(interferer_m, dtype=float)
    activity = np.broadcast_to(np.asarray(activity, dtype=float), interferer_omega.shape)

    degree = int(desired_m.max()) - 1
    beta_kj = threshold * desired_m / desired_omega
    scaled = interferer_omega / interferer_m
    psi = 1.0 / (beta_kj[:, None] * scaled + 1.0)

    terms = [1.0 - activity * (1.0 - psi**interferer_m)]
    for ell in range(1, degree + 1):
        terms.append(
            activity
            * _rising_ratio(ell, interferer_m)
            * scaled**ell
            * psi ** (interferer_m + ell)
        )

    h = np.zeros((len(desired_omega), degree + 1))
    h[:, 0] = 1.0
    for column in range(interferer_omega.shape[1]):
        updated = np.zeros_like(h)
        for t in range(degree + 1):
            for ell in range(t + 1):
                updated[:, t] += h[:, t - ell] * terms[ell][:, column]
        h = updated

    total = np.zeros(len(desired_omega))
    for s in range(degree + 1):
        in_range = s < desired_m
        for t in range(s + 1):
            term = beta_kj**s * inv_snr ** (s - t) * h[:, t] / math.factorial(s - t)
            total += np.where(in_range, term, 0.0)
    eps = 1.0 - np.exp(-beta_kj * inv_snr) * total
    return _checked(eps)


def link_outage_input(
    channel: ChannelRealization,
    k: int,
    j: int,
    interferers: Iterable[int],
    transmit_prob: np.ndarray,
) -> LinkOutageInput:
    """Collect the closed-form inputs of the link k -> j from a channel."""
    interferers = [i for i in interferers if i not in (k, j)]
    return LinkOutageInput(
        desired_omega=channel.normalized_power(k, j, k),
        desired_m=int(channel.nakagami_m[k, j]),
        interferers=tuple(
            Interferer(
                omega=channel.normalized_power(i, j, k),
                m=int(channel.nakagami_m[i, j]),
                activity=float(transmit_prob[i]),
            )
            for i in interferers
        ),
        inv_snr=channel.config.inv_snr,
        threshold=channel.config.sinr_threshold,
    )


def outage_table(
    channel: ChannelRealization,
    tx: np.ndarray,
    rx: np.ndarray,
    transmit_prob: np.ndarray,
    interferers: Sequence[int],
) -> OutageTable:
    """
    Outage probability of each link (tx[l], rx[l]) against the given
    interferers, each active with its transmit probability. Link endpoints
    are expected to have transmit probability zero.
    """
    tx = np.asarray(tx, dtype=int)
    rx = np.asarray(rx, dtype=int)
    transmit_prob = np.asarray(transmit_prob, dtype=float)
    interferers = np.asarray(interferers, dtype=int)
    if np.any(transmit_prob[tx] > 0) or np.any(transmit_prob[rx] > 0):
        raise InvalidInputError("link endpoints must not transmit as interferers")

    eps = link_outages(
        desired_omega=channel.desired_omegas(tx, rx),
        desired_m=channel.nakagami_m[tx, rx],
        interferer_omega=channel.interference_omegas(interferers, tx, rx),
        interferer_m=channel.nakagami_m[np.ix_(interferers, rx)].T,
        activity=transmit_prob[interferers][None, :],
        inv_snr=channel.config.inv_snr,
        threshold=channel.config.sinr_threshold,
    )
    return OutageTable(tx=tx, rx=rx, eps=eps)
