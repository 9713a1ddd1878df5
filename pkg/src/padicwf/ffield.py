"""Finite fields of odd prime order, and their quadratic extensions.

Two field kinds are provided:

  * PrimeField(p)  -- the field Z/p for an odd prime p
  * QuadField(p)   -- F_{p^2} realized as F_p[s]/(s^2 - n), n the least
                      quadratic non-residue mod p

Elements are small immutable wrappers; all arithmetic is exact.  QuadField
elements carry the Frobenius a -> a^p as .conj().  Fields are cached so two
fields with the same parameters are the same object, which makes element
compatibility checks cheap.
"""

from functools import lru_cache


def is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def least_nonresidue(p):
    """Smallest quadratic non-residue mod the odd prime p."""
    for n in range(2, p):
        if pow(n, (p - 1) // 2, p) == p - 1:
            return n
    raise ValueError("no non-residue found (p must be an odd prime)")


class FFElt:
    """Element of a PrimeField or QuadField.  Immutable."""

    __slots__ = ("field", "v")

    def __init__(self, field, v):
        self.field = field
        self.v = v

    def _check(self, other):
        if not isinstance(other, FFElt):
            if isinstance(other, int):
                return self.field(other)
            return NotImplemented
        if other.field is not self.field:
            # allow mixing a prime field element into its quadratic extension
            f, g = self.field, other.field
            if isinstance(f, QuadField) and f.base is g.base_or_self():
                return f.embed(other)
            if isinstance(g, QuadField) and g.base is f.base_or_self():
                return other  # caller promotes self into g
            return NotImplemented
        return other

    def __add__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return NotImplemented
        if o.field is not self.field:
            return o.field.embed(self) + o
        return FFElt(self.field, self.field._add(self.v, o.v))

    __radd__ = __add__

    def __neg__(self):
        return FFElt(self.field, self.field._neg(self.v))

    def __sub__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return NotImplemented
        if o.field is not self.field:
            return o.field.embed(self) * o
        return FFElt(self.field, self.field._mul(self.v, o.v))

    __rmul__ = __mul__

    def inv(self):
        if not self:
            raise ZeroDivisionError("inverse of zero in finite field")
        return FFElt(self.field, self.field._inv(self.v))

    def __truediv__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, k):
        if k < 0:
            return self.inv() ** (-k)
        r = self.field.one
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def conj(self):
        """Frobenius over the prime field (identity on PrimeField)."""
        return FFElt(self.field, self.field._conj(self.v))

    def trace(self):
        """Trace to the prime field (identity map there)."""
        return self.field.trace(self)

    def norm(self):
        return self.field.norm(self)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field(other)
        if not isinstance(other, FFElt):
            return NotImplemented
        if other.field is not self.field:
            o = self._check(other)
            if o is NotImplemented:
                return NotImplemented
            if o.field is not self.field:
                # other lives in the quadratic extension; embed self there
                return o.field.embed(self).v == o.v
            other = o
        return self.v == other.v

    def __hash__(self):
        return hash((id(self.field), self.v))

    def __bool__(self):
        return self.v != self.field.zero.v

    def __repr__(self):
        return self.field.fmt(self.v)


class PrimeField:
    """The prime field Z/p, p an odd prime."""

    def __init__(self, p):
        assert is_prime(p) and p % 2 == 1, "p must be an odd prime"
        self.p = p
        self.q = p
        self.degree = 1
        self.zero = FFElt(self, 0)
        self.one = FFElt(self, 1)

    def base_or_self(self):
        return self

    def __call__(self, v):
        if isinstance(v, FFElt):
            assert v.field is self
            return v
        return FFElt(self, int(v) % self.p)

    # raw value arithmetic
    def _add(self, u, v):
        return (u + v) % self.p

    def _neg(self, u):
        return (-u) % self.p

    def _mul(self, u, v):
        return (u * v) % self.p

    def _inv(self, u):
        return pow(u, self.p - 2, self.p)

    def _conj(self, u):
        return u

    def trace(self, a):
        return a

    def norm(self, a):
        return a

    def elements(self):
        for v in range(self.p):
            yield FFElt(self, v)

    def random(self, rng):
        return FFElt(self, rng.randrange(self.p))

    def sqrt(self, a):
        """A square root of a, or None if a is a non-residue."""
        for x in self.elements():
            if x * x == a:
                return x
        return None

    def fmt(self, v):
        return str(v)

    def __repr__(self):
        return "F_%d" % self.p


class QuadField:
    """F_{p^2} = F_p[s]/(s^2 - n) with n the least non-residue mod p.

    Elements are pairs (a, b) standing for a + b*s.  conj is the Frobenius
    a + b*s -> a - b*s.
    """

    def __init__(self, p):
        self.base = prime_field(p)
        self.p = p
        self.q = p * p
        self.degree = 2
        self.n = least_nonresidue(p)
        self.zero = FFElt(self, (0, 0))
        self.one = FFElt(self, (1, 0))
        self.gen = FFElt(self, (0, 1))  # the square root of n

    def base_or_self(self):
        return self.base

    def __call__(self, v):
        if isinstance(v, FFElt):
            if v.field is self:
                return v
            assert v.field is self.base
            return FFElt(self, (v.v, 0))
        if isinstance(v, tuple):
            return FFElt(self, (int(v[0]) % self.p, int(v[1]) % self.p))
        return FFElt(self, (int(v) % self.p, 0))

    def embed(self, a):
        """Embed a base field element."""
        assert a.field is self.base
        return FFElt(self, (a.v, 0))

    def _add(self, u, v):
        return ((u[0] + v[0]) % self.p, (u[1] + v[1]) % self.p)

    def _neg(self, u):
        return ((-u[0]) % self.p, (-u[1]) % self.p)

    def _mul(self, u, v):
        a, b = u
        c, d = v
        return ((a * c + self.n * b * d) % self.p, (a * d + b * c) % self.p)

    def _inv(self, u):
        a, b = u
        d = (a * a - self.n * b * b) % self.p
        di = pow(d, self.p - 2, self.p)
        return ((a * di) % self.p, (-b * di) % self.p)

    def _conj(self, u):
        return (u[0], (-u[1]) % self.p)

    def trace(self, a):
        """Trace to the base field."""
        return FFElt(self.base, (2 * a.v[0]) % self.p)

    def norm(self, a):
        v = a.v
        return FFElt(self.base, (v[0] * v[0] - self.n * v[1] * v[1]) % self.p)

    def elements(self):
        for a in range(self.p):
            for b in range(self.p):
                yield FFElt(self, (a, b))

    def random(self, rng):
        return FFElt(self, (rng.randrange(self.p), rng.randrange(self.p)))

    def sqrt(self, a):
        for x in self.elements():
            if x * x == a:
                return x
        return None

    def trace_zero_gen(self):
        """A generator of the trace-zero line over the base field."""
        return self.gen

    def fmt(self, v):
        a, b = v
        if b == 0:
            return str(a)
        if a == 0:
            return "%d*s" % b
        return "(%d+%d*s)" % (a, b)

    def __repr__(self):
        return "F_%d^2" % self.p


@lru_cache(maxsize=None)
def prime_field(p):
    return PrimeField(p)


@lru_cache(maxsize=None)
def quad_field(p):
    return QuadField(p)
