"""Random instance generation.

Four generators feed the dataset pipeline: random sparse polynomials,
random order ideals (recursive box splitting), border bases of vanishing
ideals of random point sets, and the ideal-preserving transform F = AG
that hides a known border basis behind a random generating set.
"""

from __future__ import annotations

import random
from collections import deque
from math import comb

from .algebra import Context, Polynomial
from .bba import BorderBasis, compute_border_basis
from .errors import (
    DegreeBudgetExceeded,
    DimensionMismatch,
    InvalidArity,
    RankDeficient,
    TooManyPoints,
)
from .linalg import MatrixFp
from .orderideal import OrderIdeal, universe

EQUAL = "equal"
DIFFERENT = "different"
UNDETERMINED = "undetermined"


def child_seed(master: int, i: int) -> int:
    """Derived per-sample seed, stable across runs."""
    return (master << 32) ^ i


def random_polynomial(
    ctx: Context, d_max: int, t_max: int, rng: random.Random
) -> Polynomial:
    """Degree and term count drawn uniformly first, then the support.

    The term count range includes 0, so the zero polynomial can occur.
    """
    if d_max < 0 or t_max < 1:
        raise ValueError("need d_max >= 0 and t_max >= 1")
    d = rng.randint(0, d_max)
    bound = min(t_max, comb(ctx.n + d, ctx.n))
    t = rng.randint(0, bound)
    if t == 0:
        return Polynomial.zero(ctx)
    pool = universe(ctx, d).terms
    terms = rng.sample(pool, t)
    coeffs = {s: rng.randrange(1, ctx.p) for s in terms}
    return Polynomial(ctx, coeffs)


def sample_order_ideal(
    ctx: Context, degree_caps, rng: random.Random, max_iterations: int = None
) -> OrderIdeal:
    """Random order ideal as a union of axis-aligned boxes.

    Starts from the box spanning [0, degree_caps]; each step pops a cell
    (l, u), samples a point p in it, keeps the box [l, p], and pushes one
    shrunken child cell per coordinate direction.  Degenerate children
    (fewer than two free coordinates, or too flat to split again) are
    dropped, which forces termination.
    """
    if ctx.n < 2:
        raise InvalidArity("order ideal sampling needs at least 2 variables")
    caps = tuple(int(d) for d in degree_caps)
    if len(caps) != ctx.n:
        raise DimensionMismatch(
            f"{len(caps)} degree caps for {ctx.n} variables"
        )
    if any(d < 0 for d in caps):
        raise ValueError("degree caps must be nonnegative")
    queue = deque()
    queue.append(((0,) * ctx.n, caps))
    boxes = []
    steps = 0
    while queue:
        steps += 1
        if max_iterations is not None and steps > max_iterations:
            break
        l, u = queue.popleft()
        p = tuple(rng.randint(lo, hi) for lo, hi in zip(l, u))
        boxes.append((l, p))
        for i in range(ctx.n):
            cl = l[:i] + (p[i],) + l[i + 1:]
            cu = p[:i] + (u[i],) + p[i + 1:]
            if (cl, cu) == (l, u):
                continue
            differing = sum(1 for a, b in zip(cl, cu) if a != b)
            if differing < 2:
                continue
            if max(b - a for a, b in zip(cl, cu)) < 2:
                continue
            queue.append((cl, cu))
    terms = set()
    for l, p in boxes:
        _fill_box(terms, l, p)
    return OrderIdeal(ctx, terms, check=False)


def _fill_box(out: set, l, u) -> None:
    """All integer points of the box [l, u], added to out."""
    ranges = [range(a, b + 1) for a, b in zip(l, u)]
    stack = [()]
    for r in ranges:
        stack = [t + (v,) for t in stack for v in r]
    out.update(stack)


def interval_order_ideal(ctx: Context, degree: int) -> OrderIdeal:
    """Single-variable order ideal {1, x, ..., x^degree}; test shortcut."""
    if ctx.n != 1:
        raise InvalidArity("interval order ideals are univariate")
    return OrderIdeal(ctx, [(d,) for d in range(degree + 1)], check=False)


def sample_points(ctx: Context, nu: int, rng: random.Random):
    """ν pairwise-distinct uniform points of F_p^n."""
    total = ctx.p ** ctx.n
    if nu > total:
        raise TooManyPoints(f"{nu} points requested from a space of {total}")
    encoded = rng.sample(range(total), nu)
    points = []
    for code in encoded:
        point = []
        for _ in range(ctx.n):
            point.append(code % ctx.p)
            code //= ctx.p
        points.append(tuple(point))
    return points


def evaluation_matrix(ctx: Context, terms, points) -> MatrixFp:
    rows = []
    for pt in points:
        row = []
        for t in terms:
            v = 1
            for x, e in zip(pt, t):
                if e:
                    v = v * pow(x, e, ctx.p) % ctx.p
            row.append(v)
        rows.append(row)
    return MatrixFp(ctx, rows)


def border_basis_from_points(ctx: Context, oi: OrderIdeal, points) -> BorderBasis:
    """Border basis of the vanishing ideal of the points.

    Solves O(P) c_i = b_i(P) for each border term b_i and returns the
    generators g_i = b_i - sum_j c_ij o_j.  Raises RankDeficient when the
    evaluation matrix of O is singular; callers resample the points.
    """
    if len(oi) != len(points):
        raise DimensionMismatch(
            f"|O| = {len(oi)} but |P| = {len(points)}"
        )
    if len(set(points)) != len(points):
        raise ValueError("points must be distinct")
    border = oi.border()
    omat = evaluation_matrix(ctx, oi.terms, points)
    bmat = evaluation_matrix(ctx, border, points)
    gens = []
    for i, b in enumerate(border):
        rhs = [row[i] for row in bmat.rows]
        coeffs = omat.solve(rhs)  # RankDeficient propagates to the caller
        poly = {b: 1}
        for o, c in zip(oi.terms, coeffs):
            if c:
                poly[o] = (-c) % ctx.p
        gens.append(Polynomial(ctx, poly))
    gens.sort(key=lambda g: ctx.term_key(g.leading_term), reverse=True)
    return BorderBasis(ctx, oi, tuple(gens))


def sample_border_basis(
    ctx: Context,
    degree_caps,
    rng: random.Random,
    point_retries: int = 50,
):
    """Order ideal plus a vanishing-ideal border basis on matching points.

    Returns (BorderBasis, points).  Singular point configurations are
    resampled; after ``point_retries`` failures a fresh order ideal is
    drawn.
    """
    while True:
        oi = sample_order_ideal(ctx, degree_caps, rng)
        if len(oi) > ctx.p ** ctx.n:
            continue
        for _ in range(point_retries):
            points = sample_points(ctx, len(oi), rng)
            try:
                return border_basis_from_points(ctx, oi, points), points
            except RankDeficient:
                continue


def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    out = Polynomial.zero(a.ctx)
    for t, c in a.items:
        out = out.axpy(-c % a.ctx.p, t, b)
    return out


def backward_transform(
    basis: BorderBasis,
    r: int,
    d_A: int,
    t_A: int,
    rng: random.Random,
    max_row_retries: int = 50,
):
    """F = AG for a random r x |G| polynomial matrix A; zero rows redrawn."""
    if r < 1:
        raise ValueError("need at least one output row")
    ctx = basis.ctx
    gens = basis.generators
    rows = []
    for _ in range(r):
        for _ in range(max_row_retries):
            f = Polynomial.zero(ctx)
            for g in gens:
                a = random_polynomial(ctx, d_A, t_A, rng)
                f = f.add(poly_mul(a, g))
            if not f.is_zero:
                rows.append(f)
                break
        else:
            raise RuntimeError("could not draw a nonzero transform row")
    return rows


def verify_ideal_equality(
    generators, basis: BorderBasis, max_degree: int = None
) -> str:
    """Tri-state check whether the generators span the basis's ideal.

    Both sides are recomputed to the engine's canonical form (the order
    ideal complementing the leading terms) and compared structurally; a
    sampled basis may live on a different order ideal of the same ideal,
    so comparing it directly would miss equal ideals.  A run that
    exceeds the degree cap gives "undetermined".
    """
    try:
        recomputed, _ = compute_border_basis(
            basis.ctx, generators, max_degree=max_degree
        )
        reference, _ = compute_border_basis(
            basis.ctx, list(basis.generators), max_degree=max_degree
        )
    except DegreeBudgetExceeded:
        return UNDETERMINED
    return EQUAL if recomputed == reference else DIFFERENT
