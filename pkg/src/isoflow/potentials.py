"""Scalar potentials with exact gradients, Hessians and Laplacians.

Evaluators are batched: an input of shape ``(..., d)`` yields ``u`` of shape
``(...,)``, gradients of shape ``(..., d)`` and Hessians of shape
``(..., d, d)``.  All evaluators are pure; instances may be shared read-only
across workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad

from .errors import DomainError
from .geometry import Box

__all__ = [
    "Component1D",
    "PolyTrigComponent",
    "CallableComponent",
    "LogSquaredComponent",
    "Potential",
    "SeparablePotential",
    "CallablePotential",
    "make_separable",
]


# ---------------------------------------------------------------------------
# 1-D components for separable potentials
# ---------------------------------------------------------------------------

class Component1D:
    """One axis of a separable potential: value, first and second derivative.

    ``dperiod`` is the period of the derivative ``f'`` (``None`` when not
    periodic); ``known_dzeros`` optionally lists zeros of ``f'`` inside one
    period when they are analytically known.
    """

    dperiod: float | None = None
    known_dzeros: tuple[float, ...] | None = None

    def f(self, t):
        raise NotImplementedError

    def df(self, t):
        raise NotImplementedError

    def d2f(self, t):
        raise NotImplementedError

    def reciprocal_primitive(self, x: float, base: float) -> float:
        """∫_base^x dt / f'(t) by adaptive quadrature.

        ``f'`` must keep one sign between ``base`` and ``x``; near a simple
        zero of ``f'`` at the origin the integrand behaves like 1/t, so the
        interval is split geometrically toward 0 before calling ``quad``.
        """
        x = float(x)
        base = float(base)
        if x == base:
            return 0.0
        lo, hi = min(x, base), max(x, base)
        if lo <= 0.0 <= hi:
            raise DomainError("reciprocal primitive across the origin")
        pieces: list[tuple[float, float]] = []
        if lo > 0.0:
            a, b = lo, hi
            while b / a > 4.0:
                pieces.append((a, 4.0 * a))
                a *= 4.0
            pieces.append((a, b))
        elif hi < 0.0:
            a, b = lo, hi
            while a / b > 4.0:
                pieces.append((4.0 * b, b))
                b *= 4.0
            pieces.append((a, b))
        total = 0.0
        for a, b in pieces:
            val, _ = quad(lambda t: 1.0 / float(self.df(t)), a, b,
                          epsabs=1e-13, epsrel=1e-12, limit=200)
            total += val
        return total if x > base else -total


@dataclass(frozen=True)
class PolyTrigComponent(Component1D):
    """f(t) = c0 + a·t + b·t²/2 + e·t³/3 + g·cos(ωt) + s·sin(ωt).

    Covers every closed-form catalog axis (linear, quadratic, cubic and
    single-frequency trigonometric profiles) and maps directly onto the
    compiled flow kernel.
    """

    c0: float = 0.0
    a: float = 0.0
    b: float = 0.0
    e: float = 0.0
    g: float = 0.0
    s: float = 0.0
    omega: float = 0.0
    dperiod: float | None = None
    known_dzeros: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.dperiod is None and self.b == 0.0 and self.e == 0.0:
            # f' is then a pure (possibly constant) trigonometric profile
            period = 2.0 * np.pi / self.omega if self.omega != 0.0 else 1.0
            object.__setattr__(self, "dperiod", float(period))

    def params(self) -> np.ndarray:
        return np.array([self.c0, self.a, self.b, self.e, self.g, self.s, self.omega])

    def f(self, t):
        t = np.asarray(t, dtype=float)
        wt = self.omega * t
        return (self.c0 + self.a * t + 0.5 * self.b * t * t + self.e * t ** 3 / 3.0
                + self.g * np.cos(wt) + self.s * np.sin(wt))

    def df(self, t):
        t = np.asarray(t, dtype=float)
        wt = self.omega * t
        return (self.a + self.b * t + self.e * t * t
                + self.omega * (self.s * np.cos(wt) - self.g * np.sin(wt)))

    def d2f(self, t):
        t = np.asarray(t, dtype=float)
        wt = self.omega * t
        return (self.b + 2.0 * self.e * t
                - self.omega ** 2 * (self.g * np.cos(wt) + self.s * np.sin(wt)))


@dataclass(frozen=True)
class CallableComponent(Component1D):
    """User-supplied axis profile given by three consistent callables."""

    fun: Callable
    dfun: Callable
    d2fun: Callable
    dperiod: float | None = None
    known_dzeros: tuple[float, ...] | None = None

    def f(self, t):
        return np.asarray(self.fun(np.asarray(t, dtype=float)), dtype=float)

    def df(self, t):
        return np.asarray(self.dfun(np.asarray(t, dtype=float)), dtype=float)

    def d2f(self, t):
        return np.asarray(self.d2fun(np.asarray(t, dtype=float)), dtype=float)


# --- the implicitly-warped even profile -----------------------------------
#
# F(x) < 0 solves   x = exp(F + ln²|F|)  for x > 0, one-to-one increasing;
# the axis profile is the even C² function with
#   f'(x) = x · (1 + 2 ln|F(x)| / F(x)),   f(0) = f'(0) = 0,  f''(0) = 1.
# f itself is recovered by quadrature of f' and cached on a dense table in
# ln x, because f enters level-set detection inside the flow loop.

def _h(t: float) -> float:
    return t + np.log(abs(t)) ** 2


def _dh(t: float) -> float:
    return 1.0 + 2.0 * np.log(abs(t)) / t


def _d2h(t: float) -> float:
    lt = np.log(abs(t))
    return (2.0 - 2.0 * lt) / (t * t)


def _solve_F_scalar(lnx: float) -> float:
    """Root t < 0 of t + ln²|t| = lnx (monotone; safeguarded Newton)."""
    hi = -1e-9
    lo = min(lnx - np.log(max(abs(lnx), 2.0)) ** 2 - 10.0, -4.0)
    while _h(lo) > lnx:
        lo *= 2.0
    t = lnx - np.log(max(abs(lnx), 0.5)) ** 2
    t = min(max(t, lo), hi)
    for _ in range(100):
        r = _h(t) - lnx
        if r > 0.0:
            hi = t
        else:
            lo = t
        step = r / _dh(t)
        tn = t - step
        if not (lo <= tn <= hi):
            tn = 0.5 * (lo + hi)
        if abs(tn - t) <= 1e-15 * abs(t):
            return tn
        t = tn
    return t


@lru_cache(maxsize=1)
def _logsq_table():
    """Cumulative table of f on a dense ln-x lattice with exact slopes."""
    s_lo, s_hi, n = -62.0, float(np.log(1.5)), 6144
    s = np.linspace(s_lo, s_hi, n)
    x = np.exp(s)
    F = np.array([_solve_F_scalar(si) for si in s])
    fp = x * (1.0 + 2.0 * np.log(np.abs(F)) / F)
    # Gauss–Legendre per interval for ∫ f'(e^s) e^s ds
    gl_x, gl_w = np.polynomial.legendre.leggauss(7)
    f = np.empty(n)
    f[0] = 0.5 * x[0] ** 2 * _dh(F[0])  # tail below the table is quadratic
    for i in range(n - 1):
        mid = 0.5 * (s[i] + s[i + 1])
        half = 0.5 * (s[i + 1] - s[i])
        sq = mid + half * gl_x
        xq = np.exp(sq)
        Fq = np.array([_solve_F_scalar(v) for v in sq])
        fpq = xq * (1.0 + 2.0 * np.log(np.abs(Fq)) / Fq)
        f[i + 1] = f[i] + half * float(np.dot(gl_w, fpq * xq))
    dfds = fp * x  # d f(e^s) / ds
    return s, f, dfds


@dataclass(frozen=True)
class LogSquaredComponent(Component1D):
    """Even C² profile, quadratic at 0 but with log-squared warping.

    Satisfies f(0)=f'(0)=0 and f''(0)=1 while the primitive of 1/f' departs
    from ln|x| by an unbounded ln² term near the origin, so pairing it with
    -t²/2 produces a saddle whose realizability probe diverges.
    """

    dperiod: float | None = None
    known_dzeros: tuple[float, ...] | None = (0.0,)

    def F(self, x):
        """Implicit warp value for x > 0 (vectorized)."""
        xa = np.asarray(x, dtype=float)
        if np.any(xa <= 0.0):
            raise DomainError("F(x) of the log-squared profile needs x > 0")
        flat = np.log(xa).ravel()
        out = np.array([_solve_F_scalar(v) for v in flat])
        return out.reshape(xa.shape) if xa.shape else float(out[0])

    def f(self, t):
        t = np.asarray(t, dtype=float)
        a = np.abs(t)
        s_tab, f_tab, dfds_tab = _logsq_table()
        out = np.zeros_like(a, dtype=float)
        pos = a > 0.0
        if np.any(pos):
            ap = a[pos]
            if np.any(ap > np.exp(s_tab[-1])):
                raise DomainError("log-squared profile evaluated beyond |t| = 1.5")
            s = np.log(ap)
            tiny = s < s_tab[0]
            vals = np.empty_like(s)
            if np.any(tiny):
                vals[tiny] = 0.5 * ap[tiny] ** 2
            reg = ~tiny
            if np.any(reg):
                vals[reg] = _hermite_eval(s_tab, f_tab, dfds_tab, s[reg])
            out[pos] = vals
        return out if out.shape else float(out)

    def df(self, t):
        t = np.asarray(t, dtype=float)
        a = np.abs(t)
        out = np.zeros_like(a, dtype=float)
        pos = a > 0.0
        if np.any(pos):
            Fv = self.F(a[pos])
            out[pos] = a[pos] * (1.0 + 2.0 * np.log(np.abs(Fv)) / Fv)
        out = out * np.sign(t)
        return out if out.shape else float(out)

    def d2f(self, t):
        t = np.asarray(t, dtype=float)
        a = np.abs(t)
        out = np.ones_like(a, dtype=float)
        pos = a > 0.0
        if np.any(pos):
            Fv = np.atleast_1d(self.F(a[pos]))
            dh = 1.0 + 2.0 * np.log(np.abs(Fv)) / Fv
            d2h = (2.0 - 2.0 * np.log(np.abs(Fv))) / (Fv * Fv)
            out[pos] = dh + d2h / dh
        return out if out.shape else float(out)

    def reciprocal_primitive(self, x: float, base: float) -> float:
        # exact: ∫ dt/f' = F up to the additive constant fixed by `base`
        x, base = float(x), float(base)
        sx, sb = np.sign(x), np.sign(base)
        if sx != sb or sx == 0.0:
            raise DomainError("reciprocal primitive across the origin")
        val = float(self.F(abs(x))) - float(self.F(abs(base)))
        return val * (1.0 if sx > 0 else -1.0)


def _hermite_eval(xk: np.ndarray, yk: np.ndarray, dyk: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Cubic Hermite interpolation on a uniform table with exact slopes."""
    h = xk[1] - xk[0]
    idx = np.clip(((x - xk[0]) / h).astype(int), 0, len(xk) - 2)
    th = (x - xk[idx]) / h
    t2 = th * th
    t3 = t2 * th
    h00 = 2 * t3 - 3 * t2 + 1
    h10 = t3 - 2 * t2 + th
    h01 = -2 * t3 + 3 * t2
    h11 = t3 - t2
    return h00 * yk[idx] + h * h10 * dyk[idx] + h01 * yk[idx + 1] + h * h11 * dyk[idx + 1]


# ---------------------------------------------------------------------------
# Potentials
# ---------------------------------------------------------------------------

class Potential:
    """Scalar field with consistent derivative evaluators."""

    name: str | None = None
    smoothness: str = "C2"

    @property
    def d(self) -> int:
        raise NotImplementedError

    @property
    def domain(self) -> Box:
        raise NotImplementedError

    @property
    def periods(self) -> tuple[float | None, ...]:
        return (None,) * self.d

    def u(self, x):
        raise NotImplementedError

    def grad(self, x):
        raise NotImplementedError

    def hessian(self, x):
        raise NotImplementedError

    def laplacian(self, x):
        h = self.hessian(x)
        return np.trace(np.asarray(h), axis1=-2, axis2=-1)

    def kernel_params(self) -> np.ndarray | None:
        """Per-axis closed-form rows for the compiled kernel, or None."""
        return None

    def spec_string(self) -> str | None:
        """Catalog address that reconstructs this potential in a worker."""
        return self.name


@dataclass(frozen=True)
class SeparablePotential(Potential):
    """u(x) = Σ_i f_i(x_i); the Hessian is diagonal by construction."""

    components: tuple[Component1D, ...]
    _domain: Box
    name: str | None = None
    smoothness: str = "C2"

    @property
    def d(self) -> int:
        return len(self.components)

    @property
    def domain(self) -> Box:
        return self._domain

    @property
    def periods(self) -> tuple[float | None, ...]:
        return tuple(c.dperiod for c in self.components)

    def u(self, x):
        x = np.asarray(x, dtype=float)
        total = np.zeros(x.shape[:-1], dtype=float)
        for i, c in enumerate(self.components):
            total = total + c.f(x[..., i])
        return total if total.shape else float(total)

    def grad(self, x):
        x = np.asarray(x, dtype=float)
        out = np.empty_like(x)
        for i, c in enumerate(self.components):
            out[..., i] = c.df(x[..., i])
        return out

    def hessian(self, x):
        x = np.asarray(x, dtype=float)
        d = self.d
        out = np.zeros(x.shape[:-1] + (d, d), dtype=float)
        for i, c in enumerate(self.components):
            out[..., i, i] = c.d2f(x[..., i])
        return out

    def laplacian(self, x):
        x = np.asarray(x, dtype=float)
        total = np.zeros(x.shape[:-1], dtype=float)
        for i, c in enumerate(self.components):
            total = total + c.d2f(x[..., i])
        return total if total.shape else float(total)

    def kernel_params(self) -> np.ndarray | None:
        rows = []
        for c in self.components:
            if not isinstance(c, PolyTrigComponent):
                return None
            rows.append(c.params())
        return np.array(rows)


@dataclass(frozen=True)
class CallablePotential(Potential):
    """Potential from user callables, each vectorized over (..., d) points."""

    dim: int
    _domain: Box
    u_fn: Callable
    grad_fn: Callable
    hess_fn: Callable
    name: str | None = None
    smoothness: str = "C2"

    @property
    def d(self) -> int:
        return self.dim

    @property
    def domain(self) -> Box:
        return self._domain

    def u(self, x):
        x = np.asarray(x, dtype=float)
        v = np.asarray(self.u_fn(x), dtype=float)
        return v if v.shape else float(v)

    def grad(self, x):
        return np.asarray(self.grad_fn(np.asarray(x, dtype=float)), dtype=float)

    def hessian(self, x):
        return np.asarray(self.hess_fn(np.asarray(x, dtype=float)), dtype=float)


def make_separable(components: Sequence[Component1D],
                   domain: Box | None = None,
                   name: str | None = None,
                   smoothness: str = "C2") -> SeparablePotential:
    """Assemble a separable potential; default domain is one period or
    [-1, 1] per axis."""
    comps = tuple(components)
    if len(comps) not in (2, 3):
        raise ValueError("separable potentials support d in {2, 3}")
    if domain is None:
        lo, hi = [], []
        for c in comps:
            if c.dperiod is not None:
                lo.append(0.0)
                hi.append(float(c.dperiod))
            else:
                lo.append(-1.0)
                hi.append(1.0)
        domain = Box.make(lo, hi)
    if domain.d != len(comps):
        raise ValueError("domain dimension does not match component count")
    return SeparablePotential(comps, domain, name=name, smoothness=smoothness)
