"""Numerical kernels: Laguerre polynomials, log-gamma, signed-log summation
and the radial / axial-momentum quadratures used by the physics modules."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import mpmath
import numpy as np
from numpy.polynomial.hermite_e import hermegauss
from scipy import integrate


class ConvergenceError(ArithmeticError):
    """Adaptive quadrature failed to reach the requested tolerance."""

    def __init__(self, message: str, estimate: float, error_bound: float):
        super().__init__(f"{message} (estimate={estimate!r}, error bound={error_bound!r})")
        self.estimate = estimate
        self.error_bound = error_bound


class PrecisionExhaustedError(ArithmeticError):
    """Extended-precision summation could not certify the requested accuracy."""


@dataclass(frozen=True)
class QuadratureConfig:
    relative_tolerance: float = 1e-10
    max_subdivisions: int = 200
    momentum_node_count: int = 64
    radial_cutoff_factor: float = 6.0

    def __post_init__(self):
        if not 0.0 < self.relative_tolerance < 1e-3:
            raise ValueError("relative_tolerance must lie in (0, 1e-3)")
        if self.momentum_node_count < 16:
            raise ValueError("momentum_node_count must be at least 16")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be positive")
        if self.radial_cutoff_factor <= 0:
            raise ValueError("radial_cutoff_factor must be positive")


DEFAULT_QUADRATURE = QuadratureConfig()


@dataclass(frozen=True)
class SignedLogValue:
    """A real number stored as ``sign * exp(log_magnitude)``.

    ``log_magnitude`` may be a float or an ``mpmath.mpf``; the latter keeps
    terms exact enough for sums with heavy cancellation.
    """

    sign: int
    log_magnitude: float = -math.inf

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0 or +1")

    @classmethod
    def from_float(cls, x: float) -> "SignedLogValue":
        if x == 0:
            return cls(0)
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    def __float__(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * float(mpmath.exp(self.log_magnitude))

    def __mul__(self, other: "SignedLogValue") -> "SignedLogValue":
        if self.sign == 0 or other.sign == 0:
            return SignedLogValue(0)
        return SignedLogValue(self.sign * other.sign, self.log_magnitude + other.log_magnitude)


def laguerre(k, alpha, x):
    """Generalized Laguerre polynomial L_k^alpha(x) by upward recurrence in k.

    Works elementwise on arrays. The explicit alternating series loses every
    digit by k ~ 20 at moderate x; the recurrence stays accurate to k ~ 100+.
    """
    if k < 0:
        raise ValueError("degree must be non-negative")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if k == 0:
        return prev if prev.ndim else float(prev)
    cur = alpha + 1.0 - x
    for j in range(1, k):
        # (j+1) L_{j+1} = (2j + alpha + 1 - x) L_j - (j + alpha) L_{j-1}
        prev, cur = cur, ((2 * j + alpha + 1.0 - x) * cur - (j + alpha) * prev) / (j + 1)
    return cur if cur.ndim else float(cur)


def laguerre_series(k: int, alpha: int, x: float) -> float:
    """Term-by-term explicit sum of L_k^alpha(x); reference for small k only."""
    return math.fsum(
        (-1) ** j * math.comb(k + alpha, k - j) * x**j / math.factorial(j) for j in range(k + 1)
    )


def log_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0."""
    if not x > 0:
        raise ValueError(f"log_gamma requires a positive argument, got {x!r}")
    return math.lgamma(x)


def signed_log_sum(terms: Iterable[SignedLogValue], prec: int = 128) -> SignedLogValue:
    """Sum signed-log values with Neumaier-compensated extended precision.

    Terms are rescaled by the largest magnitude before exponentiation, so no
    intermediate overflows. ``prec`` is the working precision in bits. When
    any input carries an mpf log-magnitude the result does too.
    """
    terms = [t for t in terms if t.sign != 0]
    if not terms:
        return SignedLogValue(0)
    keep_mp = any(isinstance(t.log_magnitude, mpmath.mpf) for t in terms)
    with mpmath.workprec(prec):
        logs = [mpmath.mpf(t.log_magnitude) for t in terms]
        top = max(logs)
        total = mpmath.mpf(0)
        comp = mpmath.mpf(0)
        for t, lg in zip(terms, logs):
            v = t.sign * mpmath.exp(lg - top)
            s = total + v
            if abs(total) >= abs(v):
                comp += (total - s) + v
            else:
                comp += (v - s) + total
            total = s
        total += comp
        if total == 0:
            return SignedLogValue(0)
        log_mag = top + mpmath.log(abs(total))
        sign = 1 if total > 0 else -1
    return SignedLogValue(sign, +log_mag if keep_mp else float(log_mag))


def radial_cutoff(beta: float, n_max: int, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    return cfg.radial_cutoff_factor * math.sqrt(2 * n_max + 4) / beta


def integrate_radial(
    f: Callable[[float], float],
    beta: float,
    n_max: int,
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
    abs_tolerance: float = 0.0,
) -> float:
    """Adaptive quadrature of f over [0, R], R = cutoff_factor * sqrt(2 n_max + 4) / beta.

    Raises ConvergenceError when the adaptive rule fails, or when f has not
    decayed at R (probed by integrating over [R, 2R]).
    """
    upper = radial_cutoff(beta, n_max, cfg)
    tol = cfg.relative_tolerance
    value, err, *_ = integrate.quad(
        f, 0.0, upper, epsabs=abs_tolerance, epsrel=tol, limit=cfg.max_subdivisions, full_output=1
    )
    if err > max(abs_tolerance, tol * abs(value)):
        raise ConvergenceError("radial quadrature did not converge", value, err)
    tail, _, *_ = integrate.quad(
        f, upper, 2 * upper, epsabs=abs_tolerance, epsrel=1e-3, limit=cfg.max_subdivisions, full_output=1
    )
    if abs(tail) > max(abs_tolerance, tol * abs(value)):
        raise ConvergenceError(
            f"integrand has not decayed at the radial cutoff {upper:.6g}", value, abs(tail)
        )
    return value


def momentum_rule(p0: float, sigma_p: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE):
    """Nodes and weights for expectations under a normal density N(p0, sigma_p^2).

    Nodes are symmetrised about p0 so odd integrands cancel exactly, and any
    node beyond 8 sigma is dropped.
    """
    x, w = hermegauss(cfg.momentum_node_count)
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1]) / math.sqrt(2 * math.pi)
    keep = np.abs(x) <= 8.0
    return p0 + sigma_p * x[keep], w[keep]


def integrate_momentum(g: Callable[[float], float], packet, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Expectation of g(p) under the packet's Gaussian momentum density."""
    nodes, weights = momentum_rule(packet.p0, packet.sigma_p, cfg)
    return math.fsum(float(wk * g(pk)) for pk, wk in zip(nodes, weights))
