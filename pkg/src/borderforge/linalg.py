"""Row reduction machinery over F_p.

Two interchangeable eliminators operate on sparse polynomials:

``ReducerSet``
    keeps monic reducers indexed by leading term, interreduces stored
    tails on every insertion, and reuses new reducers immediately.

``NaiveReducerSet``
    the textbook reference: a flat list of rows scanned linearly, no
    normalization, no interreduction shortcuts, candidate rounds
    eliminated in two phases.  It is the baseline the fast path is
    checked against and measured relative to.

Both count multiply-add operations and reductions to zero, so runs can
be compared on cost as well as output.  ``MatrixFp`` is a small dense
matrix used by the point-evaluation solver.
"""

from __future__ import annotations

from .algebra import Context, Polynomial, Term
from .errors import DimensionMismatch, RankDeficient


class OpCounter:
    """Tallies elimination work: multiply-adds and zero reductions."""

    __slots__ = ("multiply_adds", "zero_reductions", "insertions")

    def __init__(self):
        self.multiply_adds = 0
        self.zero_reductions = 0
        self.insertions = 0

    def snapshot(self) -> dict:
        return {
            "multiply_adds": self.multiply_adds,
            "zero_reductions": self.zero_reductions,
            "insertions": self.insertions,
        }


class ReducerSet:
    """Monic reducers indexed by leading term; insertion keeps echelon form.

    ``insert(f)`` fully reduces f against the current set.  If f drops to
    zero the zero-reduction counter ticks and None is returned; otherwise
    the monic remainder joins the set and is returned.

    Rows live as mutable coefficient dicts so interreduction can update
    them in place; sorted ``Polynomial`` views are built on demand and
    cached until the row next changes.
    """

    def __init__(self, ctx: Context, counter: OpCounter = None):
        self.ctx = ctx
        self._rows: dict = {}  # leading term -> {term: coeff}, monic
        self._poly: dict = {}  # leading term -> cached Polynomial view
        # tail term -> leading terms of the rows whose tail contains it,
        # so interreduction touches only the rows that actually change
        self._occurs: dict = {}
        self.counter = counter if counter is not None else OpCounter()

    def __len__(self):
        return len(self._rows)

    def __iter__(self):
        return iter(self.polynomials())

    def clone(self) -> "ReducerSet":
        """Independent copy with a fresh counter."""
        dup = type(self)(self.ctx)
        dup._rows = {lt: dict(row) for lt, row in self._rows.items()}
        dup._poly = dict(self._poly)
        dup._occurs = {t: set(rows) for t, rows in self._occurs.items()}
        return dup

    @property
    def by_lt(self) -> dict:
        """Leading term -> stored polynomial, materialized."""
        return {t: self._view(t) for t in self._rows}

    def polynomials(self) -> list:
        """Reducers sorted by descending leading term."""
        return [
            self._view(t) for t in self.ctx.sort_terms(self._rows.keys())
        ]

    def leading_terms(self) -> set:
        return set(self._rows.keys())

    def find_reducer(self, t: Term):
        if t in self._rows:
            return self._view(t)
        return None

    def _view(self, lt: Term) -> Polynomial:
        poly = self._poly.get(lt)
        if poly is None:
            row = self._rows[lt]
            ctx = self.ctx
            poly = Polynomial(
                ctx,
                _sorted_items=tuple(
                    (t, row[t]) for t in ctx.sort_terms(row.keys())
                ),
            )
            self._poly[lt] = poly
        return poly

    def _reduce_dict(self, items) -> dict:
        """Normal form of sum(items) as a bare coefficient dict.

        Stored tails contain no stored leading term, so eliminating a
        term never changes the coefficient of another reducible term and
        never creates a new one.  One pass over the original support
        with the original coefficients therefore suffices.
        """
        p = self.ctx.p
        rows = self._rows
        work = dict(items)
        get = work.get
        pop = work.pop
        madds = 0
        for t, c in items:
            g = rows.get(t)
            if g is None:
                continue
            for s, gc in g.items():
                v = (get(s, 0) - c * gc) % p
                if v:
                    work[s] = v
                else:
                    pop(s, None)
            madds += len(g)
        self.counter.multiply_adds += madds
        return work

    def reduce(self, f: Polynomial) -> Polynomial:
        """Full tail reduction of f against the set."""
        if f.is_zero:
            return f
        ctx = self.ctx
        work = self._reduce_dict(f.items)
        items = tuple(
            (t, work[t]) for t in ctx.sort_terms(work.keys())
        )
        return Polynomial(ctx, _sorted_items=items)

    def insert(self, f: Polynomial):
        work = self._reduce_dict(f.items)
        if not work:
            self.counter.zero_reductions += 1
            return None
        ctx = self.ctx
        p = ctx.p
        lt = max(work, key=ctx.term_key)
        lc = work[lt]
        if lc != 1:
            inv = pow(lc, p - 2, p)
            for t in work:
                work[t] = work[t] * inv % p
        g = Polynomial(
            ctx,
            _sorted_items=tuple(
                (t, work[t]) for t in ctx.sort_terms(work.keys())
            ),
        )
        self._interreduce_tails(g)
        self._rows[lt] = work
        self._poly[lt] = g
        occurs = self._occurs
        for t, _ in g.items[1:]:
            occurs.setdefault(t, set()).add(lt)
        self.counter.insertions += 1
        return g

    def insert_batch(self, candidates) -> list:
        """Insert a round of candidates; returns the stored survivors.

        New reducers are available immediately for the candidates that
        follow them in the same round.
        """
        out = []
        for f in candidates:
            g = self.insert(f)
            if g is not None:
                out.append(g)
        return out

    def reduce_readonly(self, f: Polynomial) -> Polynomial:
        """Reduce without touching the run's operation counters."""
        saved = self.counter
        self.counter = OpCounter()
        try:
            return self.reduce(f)
        finally:
            self.counter = saved

    def _interreduce_tails(self, new: Polynomial) -> None:
        """Eliminate the new leading term from every stored tail.

        Only rows listed in the occurrence index are touched, in place;
        the index is updated in step with the coefficient changes.  Tail
        terms of ``new`` are never stored leading terms (``new`` is
        fully reduced), so a row's own leading term is never disturbed.
        """
        lt = new.leading_term
        affected = self._occurs.pop(lt, None)
        if not affected:
            return
        occurs = self._occurs
        p = self.ctx.p
        poly_cache = self._poly
        new_items = new.items
        for key in affected:
            row = self._rows[key]
            c = row[lt]
            for t, gc in new_items:
                v = (row.get(t, 0) - c * gc) % p
                if v:
                    if t not in row:
                        occurs.setdefault(t, set()).add(key)
                    row[t] = v
                elif row.pop(t, None) is not None and t != lt:
                    rows = occurs.get(t)
                    if rows:
                        rows.discard(key)
                        if not rows:
                            del occurs[t]
            self.counter.multiply_adds += len(new_items)
            poly_cache.pop(key, None)


class NaiveReducerSet(ReducerSet):
    """Reference eliminator: a flat reducer list, no lookup structures.

    This is the textbook elimination the fast path is measured against.
    It differs in three deliberate ways: pivots are found by rescanning
    the list after every single reduction step, rows are stored as they
    arrive (non-monic, so each use pays a field inversion), and a round
    of candidates is eliminated in two phases instead of reusing new
    pivots immediately.  Normal forms, zero-reduction events, and the
    final committed row space are identical to the fast path's.
    """

    def __init__(self, ctx: Context, counter: OpCounter = None):
        super().__init__(ctx, counter)
        self.rows: list = []
        self._store: dict = {}  # leading term -> stored row

    def clone(self) -> "NaiveReducerSet":
        dup = type(self)(self.ctx)
        dup.rows = list(self.rows)
        dup._store = dict(self._store)
        return dup

    @property
    def by_lt(self) -> dict:
        return dict(self._store)

    def __len__(self):
        return len(self._store)

    def polynomials(self) -> list:
        return [
            self._store[t]
            for t in self.ctx.sort_terms(self._store.keys())
        ]

    def leading_terms(self) -> set:
        return set(self._store.keys())

    def find_reducer(self, t: Term):
        for g in self.rows:
            if g.leading_term == t:
                return g
        return None

    def reduce(self, f: Polynomial) -> Polynomial:
        ctx = self.ctx
        if f.is_zero:
            return f
        p = ctx.p
        work = dict(f.items)
        # textbook loop: apply one reduction step, then rescan the list
        while True:
            for g in self.rows:
                c = work.get(g.leading_term)
                if not c:
                    continue
                c = c * pow(g.leading_coefficient, p - 2, p) % p
                for t, gc in g.items:
                    v = (work.get(t, 0) - c * gc) % p
                    if v:
                        work[t] = v
                    else:
                        work.pop(t, None)
                self.counter.multiply_adds += len(g)
                break
            else:
                return Polynomial(ctx, work)

    def insert(self, f: Polynomial):
        f = self.reduce(f)
        if f.is_zero:
            self.counter.zero_reductions += 1
            return None
        self._interreduce_tails(f)
        self._store[f.leading_term] = f
        self.rows.append(f)
        self.counter.insertions += 1
        return f

    def insert_batch(self, candidates) -> list:
        """Classic two-phase elimination for a round of candidates.

        Phase one reduces every candidate against the committed rows
        only; new pivots are not reused until the whole batch has been
        scanned.  Phase two runs forward elimination among the
        remainders, eagerly clearing each pivot column from all later
        rows.  The committed row space matches the fast path's, reached
        with more arithmetic.
        """
        ctx = self.ctx
        p = ctx.p
        term_key = ctx.term_key
        rems = []
        for f in candidates:
            nf = self.reduce(f)
            if nf.is_zero:
                self.counter.zero_reductions += 1
            else:
                rems.append(dict(nf.items))
        stored = []
        for i, work in enumerate(rems):
            if not work:
                self.counter.zero_reductions += 1
                continue
            lt = max(work, key=term_key)
            for other in rems[i + 1:]:
                c = other.get(lt)
                if not c:
                    continue
                c = c * pow(work[lt], p - 2, p) % p
                for t, gc in work.items():
                    v = (other.get(t, 0) - c * gc) % p
                    if v:
                        other[t] = v
                    else:
                        other.pop(t, None)
                self.counter.multiply_adds += len(work)
            items = tuple(
                (t, work[t]) for t in ctx.sort_terms(work.keys())
            )
            g = Polynomial(ctx, _sorted_items=items)
            self._interreduce_tails(g)
            self._store[lt] = g
            self.rows.append(g)
            self.counter.insertions += 1
            stored.append(g)
        return stored

    def _interreduce_tails(self, new: Polynomial) -> None:
        lt = new.leading_term
        p = self.ctx.p
        unit = self.ctx.unit_term()
        for i, g in enumerate(self.rows):
            c = g.coefficient(lt)
            if c:
                c = c * pow(new.leading_coefficient, p - 2, p) % p
                updated = g.axpy(c, unit, new)
                self.rows[i] = updated
                self._store[updated.leading_term] = updated
                self.counter.multiply_adds += len(new)


class MatrixFp:
    """Dense matrix over F_p with Gauss-Jordan based solvers."""

    def __init__(self, ctx: Context, rows):
        self.ctx = ctx
        self.rows = [list(ctx.normalize(v) for v in r) for r in rows]
        widths = {len(r) for r in self.rows}
        if len(widths) > 1:
            raise DimensionMismatch("ragged matrix")
        self.ncols = widths.pop() if widths else 0

    @property
    def nrows(self):
        return len(self.rows)

    def _echelonize(self, rows):
        """In-place reduced row echelon form; returns pivot column list."""
        p = self.ctx.p
        pivots = []
        r = 0
        for c in range(self.ncols):
            pivot = next(
                (i for i in range(r, len(rows)) if rows[i][c]), None
            )
            if pivot is None:
                continue
            rows[r], rows[pivot] = rows[pivot], rows[r]
            inv = pow(rows[r][c], p - 2, p)
            rows[r] = [v * inv % p for v in rows[r]]
            for i in range(len(rows)):
                if i != r and rows[i][c]:
                    m = rows[i][c]
                    rows[i] = [
                        (a - m * b) % p for a, b in zip(rows[i], rows[r])
                    ]
            pivots.append(c)
            r += 1
            if r == len(rows):
                break
        return pivots

    def rank(self) -> int:
        rows = [list(r) for r in self.rows]
        return len(self._echelonize(rows))

    def solve(self, rhs) -> list:
        """One solution x with A x = rhs; RankDeficient if none exists
        or the columns are dependent."""
        if len(rhs) != self.nrows:
            raise DimensionMismatch("rhs length mismatch")
        aug_width = self.ncols
        rows = [
            list(r) + [self.ctx.normalize(b)] for r, b in zip(self.rows, rhs)
        ]
        saved_ncols = self.ncols
        self.ncols = aug_width + 1
        try:
            pivots = self._echelonize(rows)
        finally:
            self.ncols = saved_ncols
        if aug_width in pivots:
            raise RankDeficient("inconsistent linear system")
        if len(pivots) < aug_width:
            raise RankDeficient("matrix columns are linearly dependent")
        x = [0] * aug_width
        for i, c in enumerate(pivots):
            x[c] = rows[i][aug_width]
        return x

    def nullspace(self) -> list:
        """Basis of the right kernel, one vector per free column."""
        p = self.ctx.p
        rows = [list(r) for r in self.rows]
        pivots = self._echelonize(rows)
        pivot_set = set(pivots)
        basis = []
        for free in range(self.ncols):
            if free in pivot_set:
                continue
            v = [0] * self.ncols
            v[free] = 1
            for i, c in enumerate(pivots):
                v[c] = (-rows[i][free]) % p
            basis.append(v)
        return basis
