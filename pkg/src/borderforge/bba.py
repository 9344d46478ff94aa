"""Border basis computation for zero-dimensional ideals over F_p.

The engine maintains a vector-space basis V of the span of the input
generators inside a degree-bounded term universe L, grows it by variable
multiplication until the span is L-stable, and enlarges L when the
candidate order ideal O = L \\ lt(V) has border terms outside L.

Variants:

``bba``
    every round expands all of V.

``ibba``
    each round expands only the polynomials added in the previous round;
    after a universe enlargement everything is expanded once more.

An optional oracle can replace full expansion rounds by proposing
specific (variable, leading term) products.  Because an oracle round
skips products, stability claimed after oracle use is only accepted once
one expansion over all of V confirms that nothing new appears.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import Context, Polynomial, term_degree
from .errors import (
    DegreeBudgetExceeded,
    MissingBorderGenerator,
    NotAnOrderIdeal,
    OracleUnavailable,
)
from .linalg import NaiveReducerSet, OpCounter, ReducerSet
from .orderideal import OrderIdeal, complement_in_universe, universe

ELIMINATORS = {"fge": ReducerSet, "naive": NaiveReducerSet}
VARIANTS = ("bba", "ibba")

# step kinds recorded in the trace
EXPAND = "expand"
ORACLE = "oracle"
FALLBACK = "fallback"
CONFIRM = "confirm"


@dataclass
class IterationRecord:
    """Cost and outcome of one expansion round."""

    index: int
    stage: int
    kind: str
    candidates: int
    inserted: int
    multiply_adds: int
    zero_reductions: int
    universe_degree: int = 0
    universe_size: int = 0
    basis_size: int = 0  # after the round


@dataclass
class RunTrace:
    """Everything a run did, round by round."""

    iterations: list = field(default_factory=list)
    enlargements: list = field(default_factory=list)  # iteration indices
    fallback_events: list = field(default_factory=list)
    oracle_calls: int = 0
    final_degree: int = 0
    totals: dict = field(default_factory=dict)

    def stage_count(self) -> int:
        return len(self.enlargements) + 1

    def final_stage_iterations(self) -> list:
        start = self.enlargements[-1] if self.enlargements else 0
        return [r for r in self.iterations if r.index >= start]

    def multiply_adds(self) -> int:
        return sum(r.multiply_adds for r in self.iterations)

    def zero_reductions(self) -> int:
        return sum(r.zero_reductions for r in self.iterations)

    def wasted_zero_reductions(self, final_stage_only: bool = False) -> int:
        """Zero reductions outside certification sweeps.

        A fallback or confirmation sweep is the termination certificate
        demanded after oracle use; its reductions to zero are mandatory
        checking work no oracle could have skipped, so they are not
        counted as waste.
        """
        rows = (
            self.final_stage_iterations()
            if final_stage_only
            else self.iterations
        )
        return sum(
            r.zero_reductions for r in rows if r.kind in (EXPAND, ORACLE)
        )


@dataclass(frozen=True)
class BorderBasis:
    """An order ideal together with one monic generator per border term."""

    ctx: Context
    order_ideal: OrderIdeal
    generators: tuple  # sorted by descending leading term

    def by_border_term(self) -> dict:
        return {g.leading_term: g for g in self.generators}

    def __eq__(self, other):
        return (
            isinstance(other, BorderBasis)
            and self.order_ideal == other.order_ideal
            and self.generators == other.generators
        )

    def __hash__(self):
        return hash((self.order_ideal, self.generators))


@dataclass
class EngineState:
    """Mutable snapshot handed to oracles before an oracle round."""

    ctx: Context
    uni: OrderIdeal
    reducers: ReducerSet
    stage: int


def expand_products(ctx: Context, uni_degree: int, polys):
    """All x_j * v with v in polys that stay inside the universe."""
    out = []
    for v in polys:
        if v.degree() + 1 > uni_degree:
            continue
        for j in range(1, ctx.n + 1):
            out.append(v.shift(ctx.variable_term(j)))
    return out


def default_degree_cap(d0: int) -> int:
    return max(2 * d0, d0 + 10)


class BBAEngine:
    """Stateful driver shared by the plain and oracle-guided front ends."""

    def __init__(
        self,
        ctx: Context,
        generators,
        variant: str = "ibba",
        eliminator: str = "fge",
        max_degree: int = None,
        oracle=None,
        oracle_tau: float = 0.9,
        oracle_budget: int = 5,
    ):
        if variant not in VARIANTS:
            raise ValueError(f"unknown variant {variant!r}")
        if eliminator not in ELIMINATORS:
            raise ValueError(f"unknown eliminator {eliminator!r}")
        self.ctx = ctx
        self.variant = variant
        self.gens = [g for g in generators if not g.is_zero]
        if not self.gens:
            raise ValueError("no nonzero generators")
        self.d0 = max(g.degree() for g in self.gens)
        self.degree = self.d0
        self.cap = max_degree if max_degree is not None else default_degree_cap(self.d0)
        self.counter = OpCounter()
        self.reducers = ELIMINATORS[eliminator](ctx, self.counter)
        self.oracle = oracle
        self.tau = oracle_tau
        self.k = oracle_budget
        self.trace = RunTrace()
        self.uni = universe(ctx, self.degree)
        # (degree, insertion count) at the last certified stability sweep
        self._certified = None

    # --- bookkeeping ---

    def _record(self, kind, candidates, inserted, before):
        rec = IterationRecord(
            index=len(self.trace.iterations),
            stage=len(self.trace.enlargements),
            kind=kind,
            candidates=candidates,
            inserted=inserted,
            multiply_adds=self.counter.multiply_adds - before["multiply_adds"],
            zero_reductions=self.counter.zero_reductions
            - before["zero_reductions"],
            universe_degree=self.degree,
            universe_size=len(self.uni),
            basis_size=len(self.reducers),
        )
        self.trace.iterations.append(rec)
        return rec

    def _insert_all(self, kind, candidates):
        before = self.counter.snapshot()
        new = self.reducers.insert_batch(candidates)
        self._record(kind, len(candidates), len(new), before)
        return new

    # --- main loop ---

    def run(self) -> BorderBasis:
        frontier = self._insert_all(EXPAND, self.gens)
        while True:
            self._stabilize(frontier)
            basis = self._try_finish()
            if basis is not None:
                self.trace.final_degree = self.degree
                self.trace.totals = self.counter.snapshot()
                return basis
            prev_degree = self.degree
            self._enlarge()
            # stability at prev_degree certified every product up to that
            # degree as dependent; the proof holds until the next insertion
            self._certified = (prev_degree, self.counter.insertions)
            frontier = self.reducers.polynomials()

    def _full_candidates(self):
        return expand_products(
            self.ctx, self.degree, self.reducers.polynomials()
        )

    def _stabilize(self, frontier) -> None:
        """Grow V until no expansion inside the current universe helps.

        Oracle rounds replace full expansions while trust and budget
        last.  Stability claimed after oracle use is never accepted on
        its own: a sweep over all of V must come up empty first.  The
        sweep runs right after the k-th oracle call, or earlier when an
        oracle round makes no progress; if it finds new elements the
        oracle is abandoned for the rest of the stage.
        """
        unchecked = False  # oracle rounds since the last full sweep
        reverted = False
        budget = self.k
        while True:
            use_oracle = (
                self.oracle is not None
                and not reverted
                and budget > 0
                and len(self.reducers) >= self.tau * len(self.uni)
            )
            if use_oracle:
                state = EngineState(
                    self.ctx,
                    self.uni,
                    self.reducers,
                    len(self.trace.enlargements),
                )
                try:
                    pairs = self.oracle.predict(state)
                except OracleUnavailable:
                    # transport failure: plain expansion, budget kept
                    new = self._insert_all(
                        EXPAND, self._frontier_candidates(frontier)
                    )
                    if new:
                        frontier = new
                        continue
                    if not unchecked:
                        return
                    new = self._insert_all(CONFIRM, self._full_candidates())
                    unchecked = False
                    if not new:
                        return
                    frontier = new
                    continue
                budget -= 1
                self.trace.oracle_calls += 1
                unchecked = True
                new = self._insert_all(ORACLE, self._realize_pairs(pairs))
                if new:
                    frontier = new
                if budget > 0 and new:
                    continue
                sweep = self._insert_all(FALLBACK, self._full_candidates())
                unchecked = False
                if not sweep:
                    return
                # the oracle missed real products; stop trusting it
                reverted = True
                self.trace.fallback_events.append(
                    len(self.trace.iterations) - 1
                )
                frontier = sweep
                continue
            new = self._insert_all(EXPAND, self._frontier_candidates(frontier))
            if new:
                frontier = new
                continue
            if not unchecked:
                return
            new = self._insert_all(CONFIRM, self._full_candidates())
            unchecked = False
            if not new:
                return
            frontier = new

    def _frontier_candidates(self, frontier):
        if self.variant == "bba":
            return self._full_candidates()
        cands = expand_products(self.ctx, self.degree, frontier)
        cert = self._certified
        if cert is not None and self.counter.insertions == cert[1]:
            d = cert[0]
            cands = [
                f for f in cands if term_degree(f.leading_term) > d
            ]
        return cands

    def _realize_pairs(self, pairs):
        out = []
        seen = set()
        for var, lt in pairs:
            lt = tuple(lt)
            if not 1 <= var <= self.ctx.n:
                continue
            v = self.reducers.find_reducer(lt)
            if v is None or v.degree() + 1 > self.degree:
                continue
            key = (var, lt)
            if key in seen:
                continue
            seen.add(key)
            out.append(v.shift(self.ctx.variable_term(var)))
        return out

    def _try_finish(self):
        """Border basis check; None means the universe is too small."""
        try:
            oi = complement_in_universe(
                self.ctx, self.uni, self.reducers.leading_terms()
            )
        except NotAnOrderIdeal:
            return None
        border = oi.border()
        uni_set = set(self.uni.terms)
        if any(b not in uni_set for b in border):
            return None
        lts = self.reducers.leading_terms()
        gens = []
        for b in border:
            g = self.reducers.find_reducer(b)
            if g is None:
                raise MissingBorderGenerator(
                    f"no element with leading term {b}"
                )
            gens.append(self._final_reduce(g, lts))
        oi_set = set(oi.terms)
        for g in gens:
            assert all(t in oi_set for t in g.support()[1:])
        return BorderBasis(self.ctx, oi, tuple(gens))

    def _final_reduce(self, g, lts):
        """Push the tail of a border generator into the order ideal.

        A fully interreduced reducer set already has its tails there; an
        eliminator that skips interreduction pays for the cascade here.
        """
        g = g.monic()
        tail = g.items[1:]
        if not any(t in lts for t, _ in tail):
            return g
        nf = self.reducers.reduce(
            Polynomial(self.ctx, _sorted_items=tail)
        )
        return Polynomial(self.ctx, _sorted_items=(g.items[0],) + nf.items)

    def _enlarge(self):
        if self.degree + 1 > self.cap:
            raise DegreeBudgetExceeded(
                f"universe degree exceeded cap {self.cap}"
            )
        self.degree += 1
        self.uni = universe(self.ctx, self.degree)
        self.trace.enlargements.append(len(self.trace.iterations))


def compute_border_basis(
    ctx: Context,
    generators,
    variant: str = "ibba",
    eliminator: str = "fge",
    max_degree: int = None,
):
    """Run the plain algorithm; returns (BorderBasis, RunTrace)."""
    engine = BBAEngine(
        ctx,
        generators,
        variant=variant,
        eliminator=eliminator,
        max_degree=max_degree,
    )
    basis = engine.run()
    return basis, engine.trace
