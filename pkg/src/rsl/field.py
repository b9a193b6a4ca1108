"""Exact arithmetic in finite fields GF(p^w) and extensions of them.

Elements are canonical integers.  The coefficient vector (c0, ..., c_{w-1})
of a residue-class polynomial, reduced modulo the field modulus, encodes
as sum(c_i * p**i) -- little-endian in the generator, so for p=2 the
encoding is plain bit packing and elements print naturally as hex.

A FieldSpec is a calculator: a small immutable object whose methods are
pure functions of integer arguments.  Two specs constructed with the same
(p, w, modulus) compare equal and are interchangeable.  ExtensionSpec
layers GF(q^t) on top of a FieldSpec with q = p^w, with elements packed
the same way in base q, so the base field embeds as the integers below q.

Fields with order <= 2^16 get eager log/exp tables over a deterministic
primitive element; everything larger falls back to polynomial arithmetic.
"""

from __future__ import annotations

from .errors import DivideByZero, LengthMismatch, NotPrime, Reducible

_TABLE_LIMIT = 1 << 16

# deterministic Miller-Rabin witnesses, sound for n < 3.3e24
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for small in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % small == 0:
            return n == small
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


class _Zp:
    """Prime-field calculator used to bootstrap polynomial moduli."""

    __slots__ = ("order",)

    def __init__(self, p: int):
        self.order = p

    def add(self, a, b):
        return (a + b) % self.order

    def sub(self, a, b):
        return (a - b) % self.order

    def neg(self, a):
        return (-a) % self.order

    def mul(self, a, b):
        return a * b % self.order

    def inv(self, a):
        if a == 0:
            raise DivideByZero("inverse of zero")
        return pow(a, self.order - 2, self.order)


# -- polynomials as coefficient lists (ascending degree) over a calculator K


def _ptrim(cs):
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


def _padd(K, a, b):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = K.add(out[i], c)
    return _ptrim(out)


def _psub(K, a, b):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = K.sub(out[i], c)
    return _ptrim(out)


def _pmul(K, a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            if cb:
                out[i + j] = K.add(out[i + j], K.mul(ca, cb))
    return _ptrim(out)


def _pmod(K, a, m):
    """Remainder of a modulo m; m need not be monic."""
    a = list(a)
    dm = len(m) - 1
    lead_inv = K.inv(m[-1])
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i]
        if c == 0:
            continue
        f = K.mul(c, lead_inv)
        shift = i - dm
        for j, cm in enumerate(m):
            if cm:
                a[shift + j] = K.sub(a[shift + j], K.mul(f, cm))
    del a[dm:]
    return _ptrim(a)


def _pgcd(K, a, b):
    a, b = list(a), list(b)
    while b:
        a, b = b, _pmod(K, a, b)
    if a:
        lead_inv = K.inv(a[-1])
        a = [K.mul(c, lead_inv) for c in a]
    return a


def _psquare(K, a):
    """a**2, using the freshman's-dream shortcut in characteristic 2."""
    if getattr(K, "char", K.order) != 2 or not a:
        return _pmul(K, a, a)
    out = [0] * (2 * len(a) - 1)
    for i, c in enumerate(a):
        if c:
            out[2 * i] = K.mul(c, c)
    return _ptrim(out)


def _ppowmod(K, base, e: int, m):
    """base**e reduced modulo m, by square and multiply."""
    result = [1]
    acc = _pmod(K, base, m)
    while e:
        if e & 1:
            result = _pmod(K, _pmul(K, result, acc), m)
        acc = _pmod(K, _psquare(K, acc), m)
        e >>= 1
    return result


def _rabin_irreducible(K, f) -> bool:
    """Deterministic irreducibility of monic f over the field K."""
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    q = K.order
    x = [0, 1]
    if _ppowmod(K, x, q**n, f) != _pmod(K, x, f):
        return False
    for r in _prime_factors(n):
        h = _psub(K, _ppowmod(K, x, q ** (n // r), f), x)
        if _pgcd(K, h, f) != [1]:
            return False
    return True


def _sieve_irreducible(K, f) -> bool:
    """Irreducibility of monic f by hunting for factors of small degree.

    gcd(x**(q**i) - x, f) collects exactly the irreducible factors of f
    whose degree divides i, and any reducible f of degree n has a factor
    of degree at most n // 2, so checking i = 1 .. n // 2 is complete.
    Equivalent verdict to _rabin_irreducible, but cheap on the reducible
    candidates that dominate a modulus search.
    """
    n = len(f) - 1
    if n < 1:
        return False
    if f[0] == 0:
        return n == 1  # divisible by x
    q = K.order
    x = [0, 1]
    h = x
    for _ in range(n // 2):
        h = _ppowmod(K, h, q, f)
        if _pgcd(K, _psub(K, h, x), f) != [1]:
            return False
    return True


_MODULUS_CACHE: dict = {}


def _search_modulus(K, degree: int) -> tuple[int, ...]:
    """Lexicographically smallest irreducible monic polynomial of the degree.

    Candidates are ordered by the integer encoding of their low coefficients
    in base |K|, so the result is a deterministic function of (K, degree).
    """
    q = K.order
    key = (q, getattr(K, "modulus", None), degree)
    hit = _MODULUS_CACHE.get(key)
    if hit is not None:
        return hit
    for v in range(q**degree):
        coeffs, rest = [], v
        for _ in range(degree):
            rest, c = divmod(rest, q)
            coeffs.append(c)
        poly = coeffs + [1]
        if _sieve_irreducible(K, poly):
            _MODULUS_CACHE[key] = tuple(poly)
            return _MODULUS_CACHE[key]
    raise AssertionError("no irreducible polynomial found")  # unreachable


class Field:
    """Shared calculator surface for FieldSpec and ExtensionSpec."""

    order: int
    char: int

    def element(self, x: int) -> int:
        if not isinstance(x, int) or isinstance(x, bool):
            raise TypeError(f"field element must be int, got {type(x).__name__}")
        if not 0 <= x < self.order:
            raise ValueError(f"{x} out of range for {self!r}")
        return x

    def elements(self):
        return range(self.order)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            raise ValueError("negative exponent; use inv() first")
        if a == 0:
            return 1 if e == 0 else 0
        result, acc = 1, a
        while e:
            if e & 1:
                result = self.mul(result, acc)
            acc = self.mul(acc, acc)
            e >>= 1
        return result

    def render(self, a: int) -> str:
        return format(a, "#x") if self.char == 2 else str(a)


class FieldSpec(Field):
    """GF(p^w) with modulus coefficients ascending, monic, over GF(p)."""

    __slots__ = ("p", "w", "modulus", "order", "char", "_zp", "_mod_int",
                 "_exp", "_log", "_gen")

    def __init__(self, p: int, w: int, modulus=None):
        if not _is_prime(p):
            raise NotPrime(f"characteristic {p} is not prime")
        if w < 1:
            raise ValueError("extension degree must be >= 1")
        zp = _Zp(p)
        if modulus is None:
            modulus = (0, 1) if w == 1 else _search_modulus(zp, w)
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != w + 1:
                raise LengthMismatch(
                    f"modulus needs {w + 1} coefficients, got {len(modulus)}")
            if modulus[-1] != 1:
                raise ValueError("modulus must be monic")
            if w >= 2 and not _rabin_irreducible(zp, list(modulus)):
                raise Reducible(f"modulus {list(modulus)} factors over GF({p})")
        self.p = p
        self.w = w
        self.modulus = modulus
        self.order = p**w
        self.char = p
        self._zp = zp
        self._mod_int = sum(c << i for i, c in enumerate(modulus)) if p == 2 else 0
        self._gen = None
        self._exp = self._log = None
        if w > 1 and self.order <= _TABLE_LIMIT:
            self._build_tables()

    # -- representation

    def coeffs(self, a: int) -> tuple[int, ...]:
        """Coefficient vector of length w, constant term first."""
        self.element(a)
        out = []
        for _ in range(self.w):
            a, c = divmod(a, self.p)
            out.append(c)
        return tuple(out)

    def from_coeffs(self, cs) -> int:
        cs = [int(c) % self.p for c in cs]
        if len(cs) != self.w:
            raise LengthMismatch(f"need {self.w} coefficients, got {len(cs)}")
        return sum(c * self.p**i for i, c in enumerate(cs))

    def to_json(self) -> dict:
        return {"p": self.p, "w": self.w, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, data: dict) -> "FieldSpec":
        return cls(data["p"], data["w"], data["modulus"])

    # -- arithmetic

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.w == 1:
            return (a + b) % self.p
        return self.from_coeffs(
            [x + y for x, y in zip(self.coeffs(a), self.coeffs(b))])

    def sub(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.w == 1:
            return (a - b) % self.p
        return self.from_coeffs(
            [x - y for x, y in zip(self.coeffs(a), self.coeffs(b))])

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        if self.w == 1:
            return (-a) % self.p
        return self.from_coeffs([-c for c in self.coeffs(a)])

    def mul(self, a: int, b: int) -> int:
        if self._exp is not None:
            if a == 0 or b == 0:
                return 0
            return self._exp[(self._log[a] + self._log[b]) % (self.order - 1)]
        return self._raw_mul(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivideByZero("inverse of zero")
        if self._exp is not None:
            n = self.order - 1
            return self._exp[(n - self._log[a]) % n]
        if self.w == 1:
            return pow(a, self.p - 2, self.p)
        return self.pow(a, self.order - 2)

    def pow(self, a: int, e: int) -> int:
        if self._exp is not None and a != 0:
            if e < 0:
                raise ValueError("negative exponent; use inv() first")
            return self._exp[self._log[a] * e % (self.order - 1)]
        return super().pow(a, e)

    def _raw_mul(self, a: int, b: int) -> int:
        if self.w == 1:
            return a * b % self.p
        if self.p == 2:
            acc = 0
            while b:
                if b & 1:
                    acc ^= a
                b >>= 1
                a <<= 1
            top = acc.bit_length() - 1
            while top >= self.w:
                acc ^= self._mod_int << (top - self.w)
                top = acc.bit_length() - 1
            return acc
        prod = _pmod(self._zp, _pmul(self._zp, list(self.coeffs(a)),
                                     list(self.coeffs(b))), list(self.modulus))
        prod += [0] * (self.w - len(prod))
        return self.from_coeffs(prod)

    def _raw_pow(self, a: int, e: int) -> int:
        result, acc = 1, a
        while e:
            if e & 1:
                result = self._raw_mul(result, acc)
            acc = self._raw_mul(acc, acc)
            e >>= 1
        return result

    # -- structure

    def generator(self) -> int:
        """Smallest (by encoding) generator of the multiplicative group."""
        if self._gen is None:
            n = self.order - 1
            if n == 1:
                self._gen = 1
            else:
                radicals = _prime_factors(n)
                for cand in range(2, self.order):
                    if all(self._raw_pow(cand, n // r) != 1 for r in radicals):
                        self._gen = cand
                        break
        return self._gen

    def _build_tables(self):
        g = self.generator()
        n = self.order - 1
        exp = [1] * n
        log = [0] * self.order
        for i in range(1, n):
            exp[i] = self._raw_mul(exp[i - 1], g)
            log[exp[i]] = i
        self._exp = exp
        self._log = log

    def __eq__(self, other):
        return (isinstance(other, FieldSpec)
                and (self.p, self.w, self.modulus)
                == (other.p, other.w, other.modulus))

    def __hash__(self):
        return hash((FieldSpec, self.p, self.w, self.modulus))

    def __repr__(self):
        return f"GF({self.p})" if self.w == 1 else f"GF({self.p}^{self.w})"


class ExtensionSpec(Field):
    """GF(q^t) built over a FieldSpec with q = p^w.

    Elements pack base-q digits of F-elements, so embed() of a base
    element is the identity on its integer encoding.
    """

    __slots__ = ("base", "t", "modulus", "order", "char", "_gen")

    def __init__(self, base: FieldSpec, t: int, modulus=None):
        if not isinstance(base, FieldSpec):
            raise TypeError("extension base must be a FieldSpec")
        if t < 1:
            raise ValueError("extension degree must be >= 1")
        if modulus is None:
            modulus = (0, 1) if t == 1 else _search_modulus(base, t)
        else:
            modulus = tuple(base.element(int(c)) for c in modulus)
            if len(modulus) != t + 1:
                raise LengthMismatch(
                    f"modulus needs {t + 1} coefficients, got {len(modulus)}")
            if modulus[-1] != 1:
                raise ValueError("modulus must be monic")
            if t >= 2 and not _rabin_irreducible(base, list(modulus)):
                raise Reducible(f"modulus factors over {base!r}")
        self.base = base
        self.t = t
        self.modulus = modulus
        self.order = base.order**t
        self.char = base.p
        self._gen = None

    # -- representation

    def coeffs(self, a: int) -> tuple[int, ...]:
        """Base-field coefficient vector of length t, constant term first."""
        self.element(a)
        q = self.base.order
        out = []
        for _ in range(self.t):
            a, c = divmod(a, q)
            out.append(c)
        return tuple(out)

    def from_coeffs(self, cs) -> int:
        cs = [self.base.element(int(c)) for c in cs]
        if len(cs) != self.t:
            raise LengthMismatch(f"need {self.t} coefficients, got {len(cs)}")
        q = self.base.order
        return sum(c * q**i for i, c in enumerate(cs))

    def to_json(self) -> dict:
        return {"base": self.base.to_json(), "t": self.t,
                "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, data: dict) -> "ExtensionSpec":
        return cls(FieldSpec.from_json(data["base"]), data["t"],
                   data["modulus"])

    # -- arithmetic

    def add(self, a: int, b: int) -> int:
        if self.char == 2:
            return a ^ b
        base = self.base
        return self.from_coeffs(
            [base.add(x, y) for x, y in zip(self.coeffs(a), self.coeffs(b))])

    def sub(self, a: int, b: int) -> int:
        if self.char == 2:
            return a ^ b
        base = self.base
        return self.from_coeffs(
            [base.sub(x, y) for x, y in zip(self.coeffs(a), self.coeffs(b))])

    def neg(self, a: int) -> int:
        if self.char == 2:
            return a
        return self.from_coeffs([self.base.neg(c) for c in self.coeffs(a)])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        base = self.base
        da, db = self.coeffs(a), self.coeffs(b)
        prod = [0] * (2 * self.t - 1)
        for i, ca in enumerate(da):
            if ca == 0:
                continue
            for j, cb in enumerate(db):
                if cb:
                    prod[i + j] = base.add(prod[i + j], base.mul(ca, cb))
        mod = self.modulus
        for i in range(len(prod) - 1, self.t - 1, -1):
            c = prod[i]
            if c == 0:
                continue
            shift = i - self.t
            for j in range(self.t + 1):
                if mod[j]:
                    prod[shift + j] = base.sub(prod[shift + j],
                                               base.mul(c, mod[j]))
        q = base.order
        return sum(c * q**i for i, c in enumerate(prod[:self.t]))

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivideByZero("inverse of zero")
        return self.pow(a, self.order - 2)

    # -- structure

    def embed(self, a: int) -> int:
        """Lift a base-field element; identity on the integer encoding."""
        return self.base.element(a)

    def frobenius(self, a: int, i: int = 1) -> int:
        """a raised to the |base|^i power; fixes embedded base elements."""
        self.element(a)
        i %= self.t
        return self.pow(a, self.base.order**i) if i else a

    def generator(self) -> int:
        """Smallest (by encoding) generator of the multiplicative group."""
        if self._gen is None:
            n = self.order - 1
            if n == 1:
                self._gen = 1
            else:
                radicals = _prime_factors(n)
                for cand in range(2, self.order):
                    if all(self.pow(cand, n // r) != 1 for r in radicals):
                        self._gen = cand
                        break
        return self._gen

    def __eq__(self, other):
        return (isinstance(other, ExtensionSpec)
                and (self.base, self.t, self.modulus)
                == (other.base, other.t, other.modulus))

    def __hash__(self):
        return hash((ExtensionSpec, self.base, self.t, self.modulus))

    def __repr__(self):
        return f"{self.base!r}^{self.t}"
