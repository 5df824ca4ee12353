"""Forward-mode dual numbers over numpy arrays.

Every derivative taken in this library is exact: contact inequalities are
statements about derivatives, so finite differences are never used outside
of tests, where they serve as an independent cross-check.  Nesting ``Dual``
inside ``Dual`` gives exact second derivatives, which are needed when
differentiating coefficients that already contain profile derivatives.

Payloads may be floats or numpy arrays of any broadcastable shape, so a
single evaluation sweeps a whole verification grid.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError

_TAN_POLE_TOL = 1e-12


class Dual:
    """``value + eps * (derivative)`` with numpy-array payloads."""

    __slots__ = ("val", "eps")

    def __init__(self, val, eps):
        self.val = val
        self.eps = eps

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val + other.val, self.eps + other.eps)
        return Dual(self.val + other, self.eps)

    __radd__ = __add__

    def __neg__(self):
        return Dual(-self.val, -self.eps)

    def __sub__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val - other.val, self.eps - other.eps)
        return Dual(self.val - other, self.eps)

    def __rsub__(self, other):
        return Dual(other - self.val, -self.eps)

    def __mul__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val * other.val,
                        self.val * other.eps + self.eps * other.val)
        return Dual(self.val * other, self.eps * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual):
            inv = 1.0 / other.val
            return Dual(self.val * inv,
                        (self.eps - self.val * inv * other.eps) * inv)
        return Dual(self.val / other, self.eps / other)

    def __rtruediv__(self, other):
        inv = 1.0 / self.val
        v = other * inv
        return Dual(v, -v * inv * self.eps)

    def __pow__(self, n):
        if isinstance(n, Dual):
            raise TypeError("exponent must be a plain number")
        if n == 0:
            return Dual(np.ones_like(np.asarray(self.val) * 1.0), 0.0 * self.eps)
        return Dual(self.val ** n, n * self.val ** (n - 1) * self.eps)

    def __repr__(self):
        return f"Dual({self.val!r}, {self.eps!r})"


def value_of(x):
    """Strip all dual layers, returning the underlying float/array."""
    while isinstance(x, Dual):
        x = x.val
    return x


def _check_tan_domain(x):
    c = np.cos(x)
    bad = np.abs(c) < _TAN_POLE_TOL
    if np.any(bad):
        where = np.asarray(x)[np.asarray(bad)] if np.ndim(x) else x
        raise DomainError(f"tan evaluated at a pole (argument near pi/2 + k*pi): {where}")
    return c


# -- primitives, recursive in the dual depth --------------------------

def sin(x):
    if isinstance(x, Dual):
        return Dual(sin(x.val), cos(x.val) * x.eps)
    return np.sin(x)


def cos(x):
    if isinstance(x, Dual):
        return Dual(cos(x.val), -sin(x.val) * x.eps)
    return np.cos(x)


def tan(x):
    if isinstance(x, Dual):
        c = cos(x.val)
        return Dual(tan(x.val), x.eps / (c * c))
    _check_tan_domain(x)
    return np.tan(x)


def exp(x):
    if isinstance(x, Dual):
        e = exp(x.val)
        return Dual(e, e * x.eps)
    return np.exp(x)


def log(x):
    if isinstance(x, Dual):
        return Dual(log(x.val), x.eps / x.val)
    if np.any(np.asarray(x) <= 0):
        raise DomainError("log of non-positive value")
    return np.log(x)


def sqrt(x):
    if isinstance(x, Dual):
        r = sqrt(x.val)
        return Dual(r, 0.5 * x.eps / r)
    return np.sqrt(x)


def where(mask, a, b):
    """Piecewise select that threads through dual parts."""
    if isinstance(a, Dual) or isinstance(b, Dual):
        av, ae = (a.val, a.eps) if isinstance(a, Dual) else (a, 0.0 * np.asarray(mask))
        bv, be = (b.val, b.eps) if isinstance(b, Dual) else (b, 0.0 * np.asarray(mask))
        return Dual(where(mask, av, bv), where(mask, ae, be))
    return np.where(mask, a, b)


def apply_chain(derivs, x, order: int = 0):
    """Apply a function given by its derivative list to a possibly-dual x.

    ``derivs[k]`` evaluates the k-th derivative on raw arrays.  Recursion in
    the dual structure raises the order by one per layer, so the list length
    bounds the supported nesting depth.
    """
    if isinstance(x, Dual):
        return Dual(apply_chain(derivs, x.val, order),
                    apply_chain(derivs, x.val, order + 1) * x.eps)
    if order >= len(derivs):
        from .errors import DerivativeDepthError
        raise DerivativeDepthError(
            f"profile differentiated to order {order}, only {len(derivs) - 1} stored")
    return derivs[order](x)


def seed(args, i):
    """Return ``args`` with slot ``i`` promoted to a unit-derivative dual."""
    out = list(args)
    out[i] = Dual(out[i], 1.0)
    return tuple(out)
