"""Exact arithmetic over F_p: field elements, terms, and sparse polynomials.

A ``Context`` fixes the prime modulus p, the number of variables n, and the
term order for one computation.  All values built from a context are
immutable and safe to share.

Terms are plain tuples of nonnegative exponents of length n.  Polynomials
store their support sorted in descending term order so the leading term is
always ``terms[0]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import DimensionMismatch, NotPrime, ZeroInverse

Term = tuple  # exponent vector, length n

_ORDERS = ("degrevlex", "deglex")

_MAX_PRIME = 1 << 31  # products must fit in 64-bit intermediates


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    # deterministic Miller-Rabin for p < 3,215,031,751
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7):
        if a % p == 0:
            continue
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Context:
    """Computation context: modulus p, variable count n, term order."""

    p: int
    n: int
    order: str = "degrevlex"

    def __post_init__(self):
        if not is_prime(self.p) or self.p >= _MAX_PRIME:
            raise NotPrime(f"modulus {self.p} is not a prime below 2^31")
        if self.n < 1:
            raise ValueError("need at least one variable")
        if self.order not in _ORDERS:
            raise ValueError(f"unknown term order {self.order!r}")
        # the same few hundred terms are keyed millions of times per run
        object.__setattr__(self, "_key_cache", {})
        object.__setattr__(self, "_heap_key_cache", {})

    # --- field arithmetic (elements are plain ints in [0, p)) ---

    def normalize(self, a: int) -> int:
        return a % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroInverse(f"0 has no inverse mod {self.p}")
        return pow(a, self.p - 2, self.p)

    # --- terms ---

    def check_term(self, t: Term) -> None:
        if len(t) != self.n:
            raise DimensionMismatch(f"term of length {len(t)}, expected {self.n}")

    def unit_term(self) -> Term:
        return (0,) * self.n

    def variable_term(self, j: int) -> Term:
        """Term x_j for 1-based variable index j."""
        return tuple(1 if i == j - 1 else 0 for i in range(self.n))

    def term_key(self, t: Term):
        """Sort key: ascending key order equals ascending term order."""
        key = self._key_cache.get(t)
        if key is None:
            if self.order == "degrevlex":
                key = (sum(t), tuple(-e for e in reversed(t)))
            else:
                key = (sum(t), t)
            self._key_cache[t] = key
        return key

    def heap_key(self, t: Term):
        """Negated key for min-heaps that must pop the greatest term first."""
        key = self._heap_key_cache.get(t)
        if key is None:
            if self.order == "degrevlex":
                key = (-sum(t), tuple(reversed(t)), t)
            else:
                key = (-sum(t), tuple(-e for e in t), t)
            self._heap_key_cache[t] = key
        return key

    def term_compare(self, a: Term, b: Term) -> int:
        """-1, 0, or 1 as a precedes, equals, or follows b in the order."""
        self.check_term(a)
        self.check_term(b)
        ka, kb = self.term_key(a), self.term_key(b)
        return (ka > kb) - (ka < kb)

    def term_divides(self, t: Term, s: Term) -> bool:
        self.check_term(t)
        self.check_term(s)
        return all(te <= se for te, se in zip(t, s))

    def sort_terms(self, terms: Iterable[Term], reverse: bool = True) -> list:
        return sorted(terms, key=self.term_key, reverse=reverse)


def term_mul(t: Term, s: Term) -> Term:
    return tuple(a + b for a, b in zip(t, s))


def term_degree(t: Term) -> int:
    return sum(t)


class Polynomial:
    """Sparse polynomial over F_p, terms kept in descending term order.

    No stored coefficient is zero; the zero polynomial has empty support.
    """

    __slots__ = ("ctx", "items")

    def __init__(self, ctx: Context, coeffs=None, _sorted_items=None):
        self.ctx = ctx
        if _sorted_items is not None:
            self.items = _sorted_items  # trusted: descending, no zeros
            return
        cleaned = {}
        for t, c in (coeffs or {}).items():
            ctx.check_term(t)
            c %= ctx.p
            if c:
                cleaned[t] = c
        self.items = tuple(
            (t, cleaned[t]) for t in ctx.sort_terms(cleaned.keys())
        )

    # --- constructors ---

    @classmethod
    def zero(cls, ctx: Context) -> "Polynomial":
        return cls(ctx, _sorted_items=())

    @classmethod
    def from_term(cls, ctx: Context, t: Term, c: int = 1) -> "Polynomial":
        c %= ctx.p
        if not c:
            return cls.zero(ctx)
        ctx.check_term(t)
        return cls(ctx, _sorted_items=((t, c),))

    # --- structure ---

    @property
    def is_zero(self) -> bool:
        return not self.items

    @property
    def leading_term(self) -> Term:
        if not self.items:
            raise ValueError("zero polynomial has no leading term")
        return self.items[0][0]

    @property
    def leading_coefficient(self) -> int:
        if not self.items:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.items[0][1]

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.items:
            return -1
        # the order is degree-compatible, so the leading term has max degree
        return term_degree(self.items[0][0])

    def support(self) -> tuple:
        return tuple(t for t, _ in self.items)

    def coefficient(self, t: Term) -> int:
        for s, c in self.items:
            if s == t:
                return c
        return 0

    def as_dict(self) -> dict:
        return dict(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self) -> Iterator:
        return iter(self.items)

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self.items == other.items

    def __hash__(self) -> int:
        return hash(self.items)

    # --- arithmetic ---

    def scale(self, c: int) -> "Polynomial":
        c %= self.ctx.p
        if c == 0:
            return Polynomial.zero(self.ctx)
        if c == 1:
            return self
        p = self.ctx.p
        return Polynomial(
            self.ctx,
            _sorted_items=tuple((t, v * c % p) for t, v in self.items),
        )

    def monic(self) -> "Polynomial":
        if self.is_zero or self.leading_coefficient == 1:
            return self
        return self.scale(self.ctx.inv(self.leading_coefficient))

    def shift(self, t: Term) -> "Polynomial":
        """Multiply by the monomial x^t (preserves relative term order)."""
        self.ctx.check_term(t)
        if not any(t):
            return self
        if sum(t) == 1:
            j = t.index(1)
            items = tuple(
                (s[:j] + (s[j] + 1,) + s[j + 1:], c) for s, c in self.items
            )
        else:
            items = tuple((term_mul(s, t), c) for s, c in self.items)
        return Polynomial(self.ctx, _sorted_items=items)

    def add(self, other: "Polynomial") -> "Polynomial":
        return self.axpy(self.ctx.p - 1, self.ctx.unit_term(), other)

    def sub(self, other: "Polynomial") -> "Polynomial":
        return self.axpy(1, self.ctx.unit_term(), other)

    def axpy(self, c: int, t: Term, g: "Polynomial") -> "Polynomial":
        """Return self - c * x^t * g, the single elimination step."""
        ctx = self.ctx
        c %= ctx.p
        if c == 0 or g.is_zero:
            return self
        ctx.check_term(t)
        p = ctx.p
        shifted = g.shift(t)
        # linear merge of two descending-sorted supports
        out = []
        i, j = 0, 0
        a, b = self.items, shifted.items
        key = ctx.term_key
        while i < len(a) and j < len(b):
            ta, ka = a[i][0], key(a[i][0])
            tb, kb = b[j][0], key(b[j][0])
            if ka > kb:
                out.append(a[i])
                i += 1
            elif ka < kb:
                out.append((tb, -c * b[j][1] % p))
                j += 1
            else:
                v = (a[i][1] - c * b[j][1]) % p
                if v:
                    out.append((ta, v))
                i += 1
                j += 1
        out.extend(a[i:])
        for tb, cb in b[j:]:
            out.append((tb, -c * cb % p))
        return Polynomial(ctx, _sorted_items=tuple(x for x in out if x[1]))

    def evaluate(self, point) -> int:
        ctx = self.ctx
        if len(point) != ctx.n:
            raise DimensionMismatch(
                f"point of length {len(point)}, expected {ctx.n}"
            )
        p = ctx.p
        total = 0
        for t, c in self.items:
            v = c
            for x, e in zip(point, t):
                if e:
                    v = v * pow(x, e, p) % p
            total = (total + v) % p
        return total

    # --- text form ---

    def __repr__(self) -> str:
        return f"Polynomial({format_polynomial(self)!r})"


def format_term(t: Term, c: int) -> str:
    factors = [str(c)]
    for i, e in enumerate(t):
        if e:
            factors.append(f"x{i + 1}^{e}")
    return "*".join(factors)


def format_polynomial(f: Polynomial) -> str:
    """Canonical text form: ``c*x1^a1*...*xn^an`` terms joined by `` + ``."""
    if f.is_zero:
        return "0"
    return " + ".join(format_term(t, c) for t, c in f.items)


def parse_polynomial(ctx: Context, text: str) -> Polynomial:
    """Parse the text form; tolerant of whitespace, ``^1`` and bare ``xi``."""
    text = text.strip()
    if not text or text == "0":
        return Polynomial.zero(ctx)
    coeffs: dict = {}
    for chunk in text.split("+"):
        chunk = chunk.strip()
        if not chunk:
            raise ValueError(f"empty term in {text!r}")
        coeff = 1
        exps = [0] * ctx.n
        for factor in chunk.split("*"):
            factor = factor.strip()
            if factor.startswith("x"):
                if "^" in factor:
                    var, _, exp = factor.partition("^")
                    e = int(exp)
                else:
                    var, e = factor, 1
                idx = int(var[1:])
                if not 1 <= idx <= ctx.n:
                    raise DimensionMismatch(
                        f"variable {var} out of range for n={ctx.n}"
                    )
                exps[idx - 1] += e
            else:
                coeff = coeff * int(factor)
        t = tuple(exps)
        coeffs[t] = (coeffs.get(t, 0) + coeff) % ctx.p
    return Polynomial(ctx, coeffs)
