"""Exact arithmetic for odd prime fields F_p, extensions F_{p^n}, and
residue rings Z_{p^l}.

Elements are integer codes in [0, q).  For prime fields and residue rings
the code is the residue itself.  For extension fields an element
c_0 + c_1*x + ... + c_{n-1}*x^{n-1} over F_p[x]/(f) is packed base p as
code = sum(c_j * p**j); multiplication runs over log/antilog tables for a
primitive element, so all per-element tables stay O(q).

The modulus f is the lexicographically first monic irreducible polynomial
of degree n: candidates x^n + c_{n-1}x^{n-1} + ... + c_0 are scanned in
increasing order of the packed code of (c_0, ..., c_{n-1}) and checked
with Rabin's irreducibility test.  The polynomial actually used is
recorded on the context (`modulus_coeffs`) and in the README table.

All arithmetic helpers accept plain ints or numpy integer arrays and
broadcast; contexts are immutable after construction and safe to share
across threads.
"""

from __future__ import annotations

import cmath
import math
import threading

import numpy as np

from .errors import (
    EvenCharacteristicError,
    InvalidElementError,
    InvalidParamsError,
    NonPrimeError,
    SizeTooLargeError,
)

PRIME_FIELD = "prime-field"
EXTENSION_FIELD = "extension-field"
RESIDUE_RING = "residue-ring"

KINDS = (PRIME_FIELD, EXTENSION_FIELD, RESIDUE_RING)

# Table-driven extension arithmetic caps q = p^n here.
MAX_EXTENSION_ORDER = 1 << 16
# Safety cap for the O(q) per-element tables of any domain.
MAX_ORDER = 1 << 22


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


# ----------------------------------------------------------------------
# Polynomial helpers over F_p (coefficient lists, lowest degree first).
# Only used during context construction; hot paths are table lookups.
# ----------------------------------------------------------------------

def _poly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mulmod(a, b, mod, p):
    n = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    # reduce by the monic modulus
    for deg in range(len(prod) - 1, n - 1, -1):
        c = prod[deg]
        if c:
            prod[deg] = 0
            for j in range(n):
                prod[deg - n + j] = (prod[deg - n + j] - c * mod[j]) % p
    return _poly_trim(prod[:n] + [0] * max(0, n - len(prod)))


def _poly_powmod(base, e, mod, p):
    result = [1]
    acc = list(base)
    while e:
        if e & 1:
            result = _poly_mulmod(result, acc, mod, p)
        acc = _poly_mulmod(acc, acc, mod, p)
        e >>= 1
    return result


def _poly_gcd(a, b, p):
    a, b = list(a), list(b)
    while _poly_trim(b):
        # a mod b with b made monic
        inv_lead = pow(b[-1], p - 2, p)
        b_monic = [(c * inv_lead) % p for c in b]
        while len(a) >= len(b_monic) and _poly_trim(a):
            shift = len(a) - len(b_monic)
            c = a[-1]
            for j, mj in enumerate(b_monic):
                a[shift + j] = (a[shift + j] - c * mj) % p
            _poly_trim(a)
        a, b = b, a
    return _poly_trim(a)


def _zip_pad(a, b):
    n = max(len(a), len(b))
    return zip(a + [0] * (n - len(a)), b + [0] * (n - len(b)))


def _is_irreducible(f, p):
    """Rabin's test for a monic polynomial f of degree n over F_p."""
    n = len(f) - 1
    x = [0, 1]
    xq = _poly_powmod(x, p**n, f, p)
    if _poly_trim([(a - b) % p for a, b in _zip_pad(xq, x)]):
        return False
    for r in _prime_factors(n):
        h = _poly_powmod(x, p ** (n // r), f, p)
        diff = _poly_trim([(a - b) % p for a, b in _zip_pad(h, x)])
        if not diff:
            return False
        if len(_poly_gcd(diff, f, p)) != 1:
            return False
    return True


def find_irreducible(p: int, n: int) -> list[int]:
    """Lexicographically first monic irreducible of degree n over F_p,
    returned as its n lower coefficients (c_0, ..., c_{n-1})."""
    if n == 1:
        return [0]
    for code in range(p**n):
        coeffs = [(code // p**j) % p for j in range(n)]
        if _is_irreducible(coeffs + [1], p):
            return coeffs
    raise AssertionError("no irreducible polynomial found")  # unreachable


# ----------------------------------------------------------------------
# Domain context
# ----------------------------------------------------------------------

class DomainCtx:
    """An odd-characteristic coefficient domain with precomputed tables.

    Attributes
    ----------
    kind : one of "prime-field", "extension-field", "residue-ring"
    p : the odd prime characteristic
    exponent : extension degree n (fields) or exponent l (rings)
    q : number of elements, p**exponent
    char_table : complex array, char_table[a] is the additive character
    trace_table : int array mapping codes to F_p (fields only)
    modulus_coeffs : lower coefficients of the extension modulus, or None
    """

    def __init__(self, kind: str, p: int, exponent: int):
        if kind not in KINDS:
            raise InvalidParamsError(f"unknown domain kind {kind!r}")
        if p == 2:
            raise EvenCharacteristicError("characteristic 2 is not supported")
        if not is_prime(p):
            raise NonPrimeError(f"p = {p} is not prime")
        if exponent < 1:
            raise InvalidParamsError(f"exponent must be >= 1, got {exponent}")
        if kind == PRIME_FIELD and exponent != 1:
            raise InvalidParamsError("prime fields have exponent 1; use extension-field")
        q = p**exponent
        if kind == EXTENSION_FIELD and q > MAX_EXTENSION_ORDER:
            raise SizeTooLargeError(f"extension order {q} exceeds {MAX_EXTENSION_ORDER}")
        if q > MAX_ORDER:
            raise SizeTooLargeError(f"order {q} exceeds table limit {MAX_ORDER}")

        self.kind = kind
        self.p = p
        self.exponent = exponent
        self.q = q
        self.modulus_coeffs = None
        self._log = None
        self._exp = None
        self._lock = threading.Lock()
        self._cache = {}

        if kind == EXTENSION_FIELD:
            self._build_extension_tables()

        codes = np.arange(q, dtype=np.int64)
        if kind == RESIDUE_RING:
            self.trace_table = None
            phase = codes.astype(np.float64) / q
        elif kind == PRIME_FIELD:
            self.trace_table = codes.copy()
            phase = codes.astype(np.float64) / p
        else:
            self.trace_table = self._build_trace_table()
            phase = self.trace_table.astype(np.float64) / p
        self.char_table = np.exp(2j * np.pi * phase)
        self.char_table.setflags(write=False)

    # -- construction helpers ------------------------------------------

    def _build_extension_tables(self):
        p, n, q = self.p, self.exponent, self.q
        self.modulus_coeffs = find_irreducible(p, n)
        mod = self.modulus_coeffs + [1]

        def code_of(poly):
            return sum(c * p**j for j, c in enumerate(poly))

        def poly_of(code):
            return _poly_trim([(code // p**j) % p for j in range(n)])

        # find a primitive element by order testing
        factors = _prime_factors(q - 1)
        gen = None
        for cand in range(2, q):
            cp = poly_of(cand)
            if all(
                code_of(_poly_powmod(cp, (q - 1) // r, mod, p)) != 1 for r in factors
            ):
                gen = cp
                break
        assert gen is not None

        exp = np.empty(q - 1, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        acc = [1]
        for i in range(q - 1):
            c = code_of(acc)
            exp[i] = c
            log[c] = i
            acc = _poly_mulmod(acc, gen, mod, p)
        assert code_of(acc) == 1, "generator order mismatch"
        exp.setflags(write=False)
        log.setflags(write=False)
        self._exp, self._log = exp, log

    def _build_trace_table(self):
        # Tr(a) = a + a^p + ... + a^(p^(n-1)), via Frobenius on the log table
        codes = np.arange(self.q, dtype=np.int64)
        frob = codes.copy()
        total = np.zeros(self.q, dtype=np.int64)
        for _ in range(self.exponent):
            total = self.add(total, frob)
            frob = self._pow_int(frob, self.p)
        assert (total < self.p).all(), "trace landed outside the prime subfield"
        total.setflags(write=False)
        return total

    def _pow_int(self, a, e: int):
        """a**e elementwise for extension-field codes (Frobenius powers)."""
        assert self.kind == EXTENSION_FIELD and e >= 1
        a = np.asarray(a)
        nz = a != 0
        la = self._log[np.where(nz, a, 1)]
        out = np.zeros_like(a)
        out[nz] = self._exp[(la[nz] * e) % (self.q - 1)]
        return out

    # -- identity ------------------------------------------------------

    @property
    def descriptor(self) -> str:
        if self.kind == PRIME_FIELD:
            return f"F{self.p}"
        if self.kind == EXTENSION_FIELD:
            return f"F{self.p}^{self.exponent}"
        return f"Z{self.p}^{self.exponent}"

    @property
    def is_field(self) -> bool:
        return self.kind != RESIDUE_RING

    def __repr__(self):
        return f"DomainCtx({self.descriptor})"

    def __eq__(self, other):
        return (
            isinstance(other, DomainCtx)
            and (self.kind, self.p, self.exponent) == (other.kind, other.p, other.exponent)
        )

    def __hash__(self):
        return hash((self.kind, self.p, self.exponent))

    # -- element arithmetic (ints or numpy arrays of codes) -------------

    def _digits(self, a):
        """(n, ...) array of base-p digits of packed extension codes."""
        a = np.asarray(a)
        p, n = self.p, self.exponent
        return np.stack([(a // p**j) % p for j in range(n)])

    def _pack(self, digits):
        p = self.p
        weights = p ** np.arange(self.exponent, dtype=np.int64)
        return np.tensordot(weights, digits, axes=(0, 0))

    def add(self, a, b):
        if self.kind == EXTENSION_FIELD:
            return self._pack((self._digits(a) + self._digits(b)) % self.p)
        return (np.asarray(a) + np.asarray(b)) % self.q

    def neg(self, a):
        if self.kind == EXTENSION_FIELD:
            return self._pack((-self._digits(a)) % self.p)
        return (-np.asarray(a)) % self.q

    def sub(self, a, b):
        if self.kind == EXTENSION_FIELD:
            return self._pack((self._digits(a) - self._digits(b)) % self.p)
        return (np.asarray(a) - np.asarray(b)) % self.q

    def mul(self, a, b):
        if self.kind == EXTENSION_FIELD:
            a = np.asarray(a)
            b = np.asarray(b)
            nz = (a != 0) & (b != 0)
            la = self._log[np.where(a != 0, a, 1)]
            lb = self._log[np.where(b != 0, b, 1)]
            prod = self._exp[(la + lb) % (self.q - 1)]
            return np.where(nz, prod, 0)
        return (np.asarray(a) * np.asarray(b)) % self.q

    def square(self, a):
        return self.mul(a, a)

    def is_unit_mask(self, a):
        a = np.asarray(a)
        if self.kind == RESIDUE_RING:
            return a % self.p != 0
        return a != 0

    def units(self) -> np.ndarray:
        codes = np.arange(self.q)
        return codes[self.is_unit_mask(codes)]

    def validate_element(self, a) -> int:
        a = int(a)
        if not 0 <= a < self.q:
            raise InvalidElementError(f"element code {a} outside [0, {self.q})")
        return a

    # -- shared derived-table cache (norm grids, DFT kernels, ...) ------

    def cached(self, key, builder):
        try:
            return self._cache[key]
        except KeyError:
            pass
        with self._lock:
            if key not in self._cache:
                self._cache[key] = builder()
            return self._cache[key]


# ----------------------------------------------------------------------
# Module operations
# ----------------------------------------------------------------------

_ctx_registry: dict[tuple, DomainCtx] = {}
_registry_lock = threading.Lock()


def make_domain(kind: str, p: int, n_or_ell: int = 1) -> DomainCtx:
    """Construct (or fetch the cached) domain context."""
    key = (kind, p, n_or_ell)
    ctx = _ctx_registry.get(key)
    if ctx is None:
        ctx = DomainCtx(kind, p, n_or_ell)
        with _registry_lock:
            _ctx_registry.setdefault(key, ctx)
            ctx = _ctx_registry[key]
    return ctx


def parse_domain(descriptor: str) -> DomainCtx:
    """Parse descriptors like F7, F3^2, Z3^2 (also Z7 for the l=1 ring)."""
    s = descriptor.strip()
    if not s or s[0] not in "FZ":
        raise InvalidParamsError(f"bad domain descriptor {descriptor!r}")
    body = s[1:]
    if "^" in body:
        base, _, expo = body.partition("^")
    else:
        base, expo = body, "1"
    try:
        p, e = int(base), int(expo)
    except ValueError:
        raise InvalidParamsError(f"bad domain descriptor {descriptor!r}") from None
    if s[0] == "Z":
        return make_domain(RESIDUE_RING, p, e)
    if e == 1:
        return make_domain(PRIME_FIELD, p, 1)
    return make_domain(EXTENSION_FIELD, p, e)


def char_value(ctx: DomainCtx, a) -> complex:
    """The additive character at a single element code."""
    return complex(ctx.char_table[ctx.validate_element(a)])


def norm_form(ctx: DomainCtx, x) -> int | np.ndarray:
    """Sum of squared coordinates.  Accepts one point (length-d sequence)
    or an (N, d) array of points; returns a code or an (N,) array."""
    x = np.asarray(x)
    sq = ctx.square(x)
    if x.ndim == 1:
        total = 0
        for v in sq:
            total = ctx.add(total, v)
        return int(total)
    total = np.zeros(x.shape[0], dtype=np.int64)
    for c in range(x.shape[1]):
        total = ctx.add(total, sq[:, c])
    return total


def is_unit(ctx: DomainCtx, a) -> bool:
    return bool(ctx.is_unit_mask(ctx.validate_element(a)))
