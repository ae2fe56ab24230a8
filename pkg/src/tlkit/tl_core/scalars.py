"""Coefficient fields for diagram arithmetic.

Every backend exposes the same small surface (zero, one, loop value ``d``,
coercion, exact zero test, conjugation, float view, JSON round trip) so the
diagram engine never inspects scalar types directly.  Scalars themselves
are plain Python objects with arithmetic operators: ``Fraction``, ``QElem``,
elements of a sympy fraction field, or ``complex``.
"""
from __future__ import annotations

from fractions import Fraction

import sympy


class BackendError(Exception):
    pass


class ExactnessRequired(BackendError):
    pass


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**12)
    raise BackendError(f"cannot read {x!r} as a rational")


class Backend:
    name = "abstract"
    exact = True

    def __init__(self):
        self.zero = self.coerce(0)
        self.one = self.coerce(1)

    # subclasses provide: coerce, is_zero, conj, to_complex, to_json, from_json, descriptor

    def check_d(self):
        if self.is_zero(self.d):
            raise BackendError("loop value d = 0 is not allowed")

    def power(self, x, k: int):
        out = self.one
        for _ in range(k):
            out = out * x
        return out

    def require_exact(self, what: str):
        if not self.exact:
            raise ExactnessRequired(f"{what} needs an exact backend, got {self.name}")

    def __eq__(self, other):
        return isinstance(other, Backend) and self.descriptor() == other.descriptor()

    def __hash__(self):
        return hash(repr(sorted(self.descriptor().items())))

    def __repr__(self):
        return f"{type(self).__name__}({self.descriptor()})"


class RationalBackend(Backend):
    name = "exact-rational"

    def __init__(self, d=1):
        super().__init__()
        self.d = _frac(d)
        self.check_d()

    def coerce(self, x):
        return _frac(x)

    def is_zero(self, x) -> bool:
        return x == 0

    def conj(self, x):
        return x

    def to_complex(self, x) -> complex:
        return complex(float(x))

    def to_json(self, x):
        return str(x)

    def from_json(self, obj):
        return Fraction(obj)

    def descriptor(self) -> dict:
        return {"backend": self.name, "d": str(self.d)}


def _trim(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_divmod(a: list, b: list):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    while len(_trim(a)) >= len(b):
        shift = len(a) - len(b)
        f = a[-1] / b[-1]
        q[shift] = f
        for i, bc in enumerate(b):
            a[i + shift] -= f * bc
        _trim(a)
    return _trim(q), a


def _poly_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _poly_sub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


class QElem:
    """Element of Q[δ]/(m(δ)), stored as reduced coefficients (low degree first)."""

    __slots__ = ("ring", "c")

    def __init__(self, ring: "QuotientRingBackend", coeffs):
        self.ring = ring
        c = _trim([_frac(x) for x in coeffs])
        if len(c) >= len(ring.modulus):
            _, c = _poly_divmod(c, ring.modulus)
        self.c = tuple(c)

    def _lift(self, other) -> "QElem":
        if isinstance(other, QElem):
            if other.ring is not self.ring and other.ring != self.ring:
                raise BackendError("quotient-ring elements from different rings")
            return other
        return QElem(self.ring, [other])

    def __add__(self, other):
        o = self._lift(other)
        n = max(len(self.c), len(o.c))
        a = list(self.c) + [0] * (n - len(self.c))
        b = list(o.c) + [0] * (n - len(o.c))
        return QElem(self.ring, [x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return QElem(self.ring, [-x for x in self.c])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return QElem(self.ring, _poly_mul(list(self.c), list(o.c)))

    __rmul__ = __mul__

    def inverse(self) -> "QElem":
        # extended Euclid on (self, modulus)
        if not self.c:
            raise ZeroDivisionError("inverse of zero in quotient ring")
        r0, r1 = list(self.ring.modulus), list(self.c)
        s0, s1 = [], [Fraction(1)]
        while r1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        if len(r0) != 1:
            raise ZeroDivisionError("element is a zero divisor; modulus is reducible")
        return QElem(self.ring, [x / r0[0] for x in s0])

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __eq__(self, other):
        try:
            o = self._lift(other)
        except BackendError:
            return NotImplemented
        return self.c == o.c

    def __hash__(self):
        return hash(self.c)

    def __float__(self):
        t = self.ring.real_embedding
        return float(sum(float(x) * t**i for i, x in enumerate(self.c)))

    def __repr__(self):
        if not self.c:
            return "0"
        terms = []
        for i, x in enumerate(self.c):
            if x == 0:
                continue
            terms.append(str(x) if i == 0 else f"{x}*δ^{i}")
        return " + ".join(terms)


class QuotientRingBackend(Backend):
    """Q[δ]/(m(δ)) with a chosen real root used for sign and float decisions.

    The loop value is the class of δ itself.
    """

    name = "quotient-ring"

    def __init__(self, min_poly, real_embedding: float):
        coeffs = _trim([_frac(x) for x in min_poly])
        if len(coeffs) < 2:
            raise BackendError("minimal polynomial must have degree >= 1")
        lead = coeffs[-1]
        self.modulus = tuple(x / lead for x in coeffs)
        self.min_poly = [str(x) for x in coeffs]
        self.real_embedding = float(real_embedding)
        value = sum(float(x) * self.real_embedding**i for i, x in enumerate(self.modulus))
        if abs(value) > 1e-8 * max(1.0, abs(self.real_embedding)) ** len(self.modulus):
            raise BackendError("real_embedding is not a root of min_poly")
        super().__init__()
        self.d = QElem(self, [0, 1]) if len(self.modulus) > 2 else QElem(self, [-self.modulus[0]])
        self.check_d()

    def coerce(self, x):
        if isinstance(x, QElem):
            return x
        return QElem(self, [x])

    def is_zero(self, x) -> bool:
        return not self.coerce(x).c

    def conj(self, x):
        # the embedding is real, so conjugation fixes the field
        return x

    def to_complex(self, x) -> complex:
        return complex(float(self.coerce(x)))

    def to_json(self, x):
        return [str(c) for c in self.coerce(x).c]

    def from_json(self, obj):
        if isinstance(obj, list):
            return QElem(self, obj)
        return QElem(self, [obj])

    def descriptor(self) -> dict:
        return {"backend": self.name, "min_poly": self.min_poly,
                "real_embedding": self.real_embedding}


class RationalFunctionBackend(Backend):
    """Rational functions in a formal loop variable δ (generic d)."""

    name = "rational-function"

    def __init__(self):
        self.symbol = sympy.Symbol("delta")
        self.field = sympy.QQ.frac_field(self.symbol)
        super().__init__()
        self.d = self.field.from_sympy(self.symbol)

    def coerce(self, x):
        if isinstance(x, Fraction):
            return self.field.from_sympy(sympy.Rational(x.numerator, x.denominator))
        if isinstance(x, int):
            return self.field.from_sympy(sympy.Integer(x))
        if isinstance(x, str):
            return self.field.from_sympy(sympy.sympify(x, locals={"delta": self.symbol}))
        if isinstance(x, sympy.Basic):
            return self.field.from_sympy(x)
        try:
            self.field.to_sympy(x)
            return x
        except Exception as exc:  # pragma: no cover - defensive
            raise BackendError(f"cannot coerce {x!r}") from exc

    def is_zero(self, x) -> bool:
        return not x

    def conj(self, x):
        return x

    def specialize(self, x, value) -> complex:
        expr = self.field.to_sympy(x)
        return complex(sympy.N(expr.subs(self.symbol, value)))

    def to_complex(self, x) -> complex:
        raise BackendError("a formal rational function has no numeric value; use specialize()")

    def to_json(self, x):
        return str(self.field.to_sympy(x))

    def from_json(self, obj):
        return self.coerce(str(obj))

    def descriptor(self) -> dict:
        return {"backend": self.name}


class ComplexBackend(Backend):
    name = "complex-float"
    exact = False

    def __init__(self, d=2.0):
        super().__init__()
        self.d = complex(d)
        self.check_d()

    def coerce(self, x):
        if isinstance(x, QElem):
            return complex(float(x))
        return complex(x)

    def is_zero(self, x) -> bool:
        # exact zero only; tolerance decisions are made by callers
        return x == 0

    def conj(self, x):
        return complex(x).conjugate()

    def to_complex(self, x) -> complex:
        return complex(x)

    def to_json(self, x):
        x = complex(x)
        return [x.real, x.imag]

    def from_json(self, obj):
        if isinstance(obj, list):
            return complex(obj[0], obj[1])
        return complex(obj)

    def descriptor(self) -> dict:
        d = complex(self.d)
        return {"backend": self.name, "d": [d.real, d.imag] if d.imag else d.real}


def backend_from_descriptor(desc: dict) -> Backend:
    kind = desc.get("backend")
    if kind == "exact-rational":
        return RationalBackend(desc.get("d", 1))
    if kind == "quotient-ring":
        return QuotientRingBackend(desc["min_poly"], desc["real_embedding"])
    if kind == "rational-function":
        return RationalFunctionBackend()
    if kind == "complex-float":
        d = desc.get("d", 2.0)
        if isinstance(d, list):
            d = complex(d[0], d[1])
        return ComplexBackend(d)
    raise BackendError(f"unknown backend descriptor {desc!r}")


def root_of_unity_backend(ell: int) -> QuotientRingBackend:
    """Backend with δ = 2cos(π/ℓ), ℓ ≥ 3, exact over its minimal polynomial."""
    if ell < 3:
        raise BackendError("need ell >= 3")
    t = sympy.Symbol("t")
    value = 2 * sympy.cos(sympy.pi / ell)
    poly = sympy.Poly(sympy.minimal_polynomial(value, t), t)
    coeffs = [int(c) for c in reversed(poly.all_coeffs())]
    return QuotientRingBackend(coeffs, float(value))


def to_complex_at(backend: Backend, x, d_value=None) -> complex:
    """Numeric value of a scalar; formal rational functions need ``d_value``."""
    if isinstance(backend, RationalFunctionBackend):
        if d_value is None:
            raise BackendError("specialization value required for rational functions")
        return backend.specialize(x, d_value)
    return backend.to_complex(x)


def is_close(a: complex, b: complex, tol: float) -> bool:
    return abs(complex(a) - complex(b)) <= tol


__all__ = [
    "Backend", "BackendError", "ExactnessRequired", "RationalBackend", "QuotientRingBackend",
    "QElem", "RationalFunctionBackend", "ComplexBackend", "backend_from_descriptor",
    "root_of_unity_backend", "to_complex_at", "is_close",
]
