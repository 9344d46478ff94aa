"""Order ideals, borders, and degree-bounded term universes.

An order ideal is a finite set of terms closed under divisibility.  Its
border is every term reachable by one variable multiplication that is not
already inside.  The universe of degree d is the full order ideal of all
terms of total degree at most d.
"""

from __future__ import annotations

from itertools import combinations_with_replacement

from .algebra import Context, Term, term_degree
from .errors import NotAnOrderIdeal


def divisors_below(t: Term):
    """Terms obtained from t by decrementing one positive exponent."""
    for i, e in enumerate(t):
        if e:
            yield t[:i] + (e - 1,) + t[i + 1:]


def is_order_ideal(terms) -> bool:
    s = set(terms)
    return all(d in s for t in s for d in divisors_below(t))


class OrderIdeal:
    """Immutable divisibility-closed term set with a computed border."""

    __slots__ = ("ctx", "terms", "_term_set")

    def __init__(self, ctx: Context, terms, check: bool = True):
        self.ctx = ctx
        term_set = set()
        for t in terms:
            ctx.check_term(t)
            term_set.add(t)
        if check and not is_order_ideal(term_set):
            raise NotAnOrderIdeal("term set is not closed under division")
        self._term_set = frozenset(term_set)
        self.terms = tuple(ctx.sort_terms(term_set))

    def __len__(self):
        return len(self.terms)

    def __contains__(self, t):
        return t in self._term_set

    def __iter__(self):
        return iter(self.terms)

    def __eq__(self, other):
        return isinstance(other, OrderIdeal) and self._term_set == other._term_set

    def __hash__(self):
        return hash(self._term_set)

    def border(self) -> tuple:
        """Border terms, sorted descending.

        Empty order ideal has border {1} by convention, since every ideal
        expansion must start somewhere.
        """
        if not self._term_set:
            return (self.ctx.unit_term(),)
        out = set()
        for t in self._term_set:
            for j in range(self.ctx.n):
                s = t[:j] + (t[j] + 1,) + t[j + 1:]
                if s not in self._term_set:
                    out.add(s)
        return tuple(self.ctx.sort_terms(out))

    def corner_terms(self) -> tuple:
        """Divisibility-maximal terms, sorted descending.

        O is exactly the set of divisors of its corners, so the corners
        identify the order ideal compactly.
        """
        n = self.ctx.n
        corners = [
            t for t in self._term_set
            if all(
                t[:j] + (t[j] + 1,) + t[j + 1:] not in self._term_set
                for j in range(n)
            )
        ]
        return tuple(self.ctx.sort_terms(corners))

    def max_degree(self) -> int:
        if not self.terms:
            return -1
        return term_degree(self.terms[0])


def universe(ctx: Context, degree: int) -> OrderIdeal:
    """All terms of total degree at most ``degree``."""
    terms = []
    for d in range(degree + 1):
        for bars in combinations_with_replacement(range(ctx.n), d):
            t = [0] * ctx.n
            for i in bars:
                t[i] += 1
            terms.append(tuple(t))
    return OrderIdeal(ctx, terms, check=False)


def reconstruct_from_corners(ctx: Context, corners) -> OrderIdeal:
    """Union of all divisors of the corner terms."""
    terms = set()
    stack = [tuple(c) for c in corners]
    while stack:
        t = stack.pop()
        if t in terms:
            continue
        terms.add(t)
        stack.extend(divisors_below(t))
    return OrderIdeal(ctx, terms, check=False)


def complement_in_universe(ctx: Context, uni: OrderIdeal, leading_terms) -> OrderIdeal:
    """O = L \\ lt(V): universe terms that are not leading terms."""
    lt = set(leading_terms)
    return OrderIdeal(ctx, (t for t in uni if t not in lt))
