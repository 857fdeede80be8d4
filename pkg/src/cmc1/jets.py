"""Order-2 complex jets: a holomorphic value together with its first two
derivatives, propagated by exact product, quotient and chain rules.

Components may be Python complex numbers or complex numpy arrays of a common
shape, so the same rules drive scalar evaluation and whole-grid evaluation.
The ``*_masked`` kernels never raise: they return the jet plus a boolean mask
marking the entries where the operation hit a singularity.  The operator
overloads on :class:`Jet2` and :func:`compose` raise :class:`DomainError`
instead.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

#: relative distance to a branch cut below which an argument counts as on it
CUT_TOL = 1e-15


@dataclass(frozen=True)
class Jet2:
    """Value and first two complex derivatives of a holomorphic function."""

    val: complex
    d1: complex = 0j
    d2: complex = 0j

    def __post_init__(self):
        # numpy scalars divide by zero to inf instead of raising
        for name in ("val", "d1", "d2"):
            v = getattr(self, name)
            if not isinstance(v, np.ndarray):
                object.__setattr__(self, name, np.complex128(v))

    @classmethod
    def constant(cls, c):
        return cls(c, 0j, 0j)

    @classmethod
    def variable(cls, tau):
        """Seed jet of the independent variable at ``tau``."""
        one = np.ones_like(tau) if isinstance(tau, np.ndarray) else np.complex128(1)
        return cls(tau, one, 0 * one)

    def is_finite(self):
        return bool(np.all(np.isfinite(self.val)) and np.all(np.isfinite(self.d1))
                    and np.all(np.isfinite(self.d2)))

    def astuple(self):
        return (self.val, self.d1, self.d2)

    def __add__(self, other):
        return compose(self, _lift(other), "add")

    def __radd__(self, other):
        return compose(_lift(other), self, "add")

    def __sub__(self, other):
        return compose(self, _lift(other), "sub")

    def __rsub__(self, other):
        return compose(_lift(other), self, "sub")

    def __mul__(self, other):
        return compose(self, _lift(other), "mul")

    def __rmul__(self, other):
        return compose(_lift(other), self, "mul")

    def __truediv__(self, other):
        return compose(self, _lift(other), "div")

    def __rtruediv__(self, other):
        return compose(_lift(other), self, "div")

    def __pow__(self, other):
        return compose(self, _lift(other), "pow")

    def __neg__(self):
        return neg(self)


def _lift(x):
    return x if isinstance(x, Jet2) else Jet2.constant(complex(x))


def _false_like(*arrays):
    shape = np.broadcast_shapes(*(np.shape(a) for a in arrays))
    return np.zeros(shape, dtype=bool)


def add(a, b):
    return Jet2(a.val + b.val, a.d1 + b.d1, a.d2 + b.d2)


def sub(a, b):
    return Jet2(a.val - b.val, a.d1 - b.d1, a.d2 - b.d2)


def neg(a):
    return Jet2(-a.val, -a.d1, -a.d2)


def mul(a, b):
    return Jet2(a.val * b.val,
                a.d1 * b.val + a.val * b.d1,
                a.d2 * b.val + 2 * a.d1 * b.d1 + a.val * b.d2)


def div_masked(a, b):
    bad = np.asarray(b.val == 0)
    with np.errstate(all="ignore"):
        q = a.val / b.val
        q1 = (a.d1 - q * b.d1) / b.val
        q2 = (a.d2 - 2 * q1 * b.d1 - q * b.d2) / b.val
    return Jet2(q, q1, q2), bad


def chain(a, g0, g1, g2):
    """Jet of g(a) given g, g', g'' evaluated at ``a.val``."""
    return Jet2(g0, g1 * a.d1, g2 * a.d1 * a.d1 + g1 * a.d2)


def log_branch(z, branch=0.0):
    """Logarithm with its cut along the ray at angle ``branch + pi``.

    ``branch = 0`` is the principal logarithm.  Returns ``(value, bad)`` where
    ``bad`` marks zeros and arguments lying on the cut.
    """
    z = np.asarray(z, dtype=complex)
    w = z if np.all(np.asarray(branch) == 0) else z * np.exp(-1j * np.asarray(branch))
    with np.errstate(all="ignore"):
        on_cut = (w.real < 0) & (np.abs(w.imag) <= CUT_TOL * np.abs(w))
        value = np.log(np.abs(z)) + 1j * (branch + np.angle(w))
    return value, (z == 0) | on_cut


def sqrt_branch(z, branch=0.0):
    z = np.asarray(z, dtype=complex)
    principal = np.all(np.asarray(branch) == 0)
    w = z if principal else z * np.exp(-1j * np.asarray(branch))
    with np.errstate(all="ignore"):
        on_cut = (w.real < 0) & (np.abs(w.imag) <= CUT_TOL * np.abs(w))
        value = np.sqrt(w)
        if not principal:
            value = value * np.exp(0.5j * np.asarray(branch))
    return value, (z == 0) | on_cut


def _ipow(a, k):
    if k < 0:
        return 1.0 / _ipow(a, -k)
    result = np.ones_like(a) if isinstance(a, np.ndarray) else np.complex128(1)
    base = a
    while k:
        if k & 1:
            result = result * base
        base = base * base
        k >>= 1
    return result


def _integer_exponent(b):
    if not (np.all(b.d1 == 0) and np.all(b.d2 == 0)) or np.ndim(b.val) != 0:
        return None
    c = complex(b.val)
    if c.imag == 0 and c.real.is_integer() and abs(c.real) < 2**31:
        return int(c.real)
    return None


def pow_masked(a, b, branch=0.0):
    """``a ** b`` defined as ``exp(b log a)``; integer constant exponents are
    single-valued and skip the logarithm."""
    n = _integer_exponent(b)
    zero = np.asarray(a.val == 0)
    with np.errstate(all="ignore"):
        if n is not None:
            if n == 0:
                one = np.ones_like(a.val) if isinstance(a.val, np.ndarray) else 1 + 0j
                return Jet2(one, 0 * one, 0 * one), zero
            if n == 1:
                return a, _false_like(a.val)
            p2 = _ipow(a.val, n - 2)
            p1 = p2 * a.val
            p0 = p1 * a.val
            jet = chain(a, p0, n * p1, n * (n - 1) * p2)
            return jet, zero if n < 0 else _false_like(a.val)

        constant = np.all(b.d1 == 0) and np.all(b.d2 == 0)
        if constant:
            log_a, bad = log_branch(a.val, branch)
            e = b.val
            v = np.exp(e * log_a)
            g1 = e * v / a.val
            g2 = e * (e - 1) * v / (a.val * a.val)
            # zero base: defined only when every derivative term vanishes
            ok_zero = zero & (np.imag(e) == 0) & (np.real(e) > 2)
            v = np.where(zero, 0, v)
            g1 = np.where(zero, 0, g1)
            g2 = np.where(zero, 0, g2)
            bad = (bad & ~zero) | (zero & ~ok_zero)
            return chain(a, v, g1, g2), bad

        log_a, bad = log_branch(a.val, branch)
        lj = chain(a, log_a, 1 / a.val, -1 / (a.val * a.val))
        prod = mul(b, lj)
        e = np.exp(prod.val)
        return chain(prod, e, e, e), np.asarray(bad)


def _sqrt_parts(v, branch):
    s, bad = sqrt_branch(v, branch)
    with np.errstate(all="ignore"):
        return (s, 1 / (2 * s), -1 / (4 * s * v)), bad


def _log_parts(v, branch):
    value, bad = log_branch(v, branch)
    with np.errstate(all="ignore"):
        return (value, 1 / v, -1 / (v * v)), bad


def _exp_parts(v, branch):
    e = np.exp(v)
    return (e, e, e), None


def _sin_parts(v, branch):
    s, c = np.sin(v), np.cos(v)
    return (s, c, -s), None


def _cos_parts(v, branch):
    s, c = np.sin(v), np.cos(v)
    return (c, -s, -c), None


def _tan_parts(v, branch):
    t = np.tan(v)
    sec2 = 1 + t * t
    return (t, sec2, 2 * t * sec2), None


def _sinh_parts(v, branch):
    s, c = np.sinh(v), np.cosh(v)
    return (s, c, s), None


def _cosh_parts(v, branch):
    s, c = np.sinh(v), np.cosh(v)
    return (c, s, c), None


def _tanh_parts(v, branch):
    t = np.tanh(v)
    sech2 = 1 - t * t
    return (t, sech2, -2 * t * sech2), None


FUNCTIONS = {
    "exp": _exp_parts,
    "log": _log_parts,
    "sqrt": _sqrt_parts,
    "sin": _sin_parts,
    "cos": _cos_parts,
    "tan": _tan_parts,
    "sinh": _sinh_parts,
    "cosh": _cosh_parts,
    "tanh": _tanh_parts,
}


def apply_masked(name, a, branch=0.0):
    """Jet of the named elementary function applied to ``a``."""
    with np.errstate(all="ignore"):
        parts, bad = FUNCTIONS[name](a.val, branch)
        jet = chain(a, *parts)
    if bad is None:
        bad = _false_like(a.val)
    return jet, np.asarray(bad)


def nonfinite(jet):
    return ~(np.isfinite(jet.val) & np.isfinite(jet.d1) & np.isfinite(jet.d2))


def compose(a, b, op):
    """Combine two jets with ``op`` in {"add", "sub", "mul", "div", "pow"}.

    Raises DomainError on division by zero or any other singular result.
    """
    if op == "add":
        out, bad = add(a, b), False
    elif op == "sub":
        out, bad = sub(a, b), False
    elif op == "mul":
        out, bad = mul(a, b), False
    elif op == "div":
        out, bad = div_masked(a, b)
        if np.any(bad):
            raise DomainError("division by zero")
    elif op == "pow":
        out, bad = pow_masked(a, b)
        if np.any(bad):
            raise DomainError("power with zero base or base on the branch cut")
    else:
        raise ValueError(f"unknown jet operation {op!r}")
    if np.any(nonfinite(out)):
        raise DomainError(f"non-finite result in {op}")
    return out
