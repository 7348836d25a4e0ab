"""Fox-Neuwirth cochain complexes for symmetric groups.

Cells of the unlabeled complex are compositions ``[a1, ..., a_{n-1}]`` of
non-negative integers; cells of the labeled complex additionally carry a
permutation of the configuration points.  Both are equivalent to planar
level trees: consecutive leaves p and p+1 share exactly ``a_p`` levels of
edges.  The coboundary of a cell is assembled from edge quotients (raise
one entry by one) followed by vertex shuffles at the quotient vertex, with
signs determined by orientation comparisons.

Sign conventions.  The per-quotient prefix is ``(-1)**(i + alpha(i) + 1)``
with

    alpha(i) = sum_{j<i} min(a_j, a_i+1) + (a_i+1) + sum_{j>i} min(a_j, a_i),

and each shuffle contributes ``(-1)**kappa(sigma)`` where kappa counts,
over all inverted pairs of child subtrees, the vertex crossings at every
height from the quotient vertex up to the ambient dimension (taken even in
the limit).  This calibration reproduces the four reference integral
differentials exactly (see tests) and satisfies d*d = 0 in both complexes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

INTEGERS = "Z"
MOD2 = "F2"
INFINITE = float("inf")  # symbolic ambient dimension, never a large int

RINGS = (INTEGERS, MOD2)


class ComponentMismatchError(ValueError):
    """Raised when an operation mixes cells of different components."""


def _check_ring(ring):
    if ring not in RINGS:
        raise ValueError(f"unknown coefficient ring {ring!r}")


def _check_ambient(m):
    if m is INFINITE or m == INFINITE:
        return INFINITE
    if isinstance(m, int) and m >= 1:
        return m
    raise ValueError(f"ambient dimension must be a positive integer or INFINITE, got {m!r}")


# ---------------------------------------------------------------------------
# cells


@dataclass(frozen=True, order=True)
class Composition:
    """An unlabeled Fox-Neuwirth cell [a1, ..., a_{n-1}] on n points.

    ``n == 0`` encodes the empty configuration (the transfer/coproduct
    unit); it carries no entries and is inert under the differential.
    """

    entries: tuple[int, ...]
    n: int = field(default=-1)

    def __post_init__(self):
        entries = tuple(int(e) for e in self.entries)
        object.__setattr__(self, "entries", entries)
        n = self.n
        if n == -1:
            n = len(entries) + 1
        object.__setattr__(self, "n", int(n))
        if n < 0:
            raise ValueError("component must be non-negative")
        if n == 0:
            if entries:
                raise ValueError("the empty component has no entries")
        elif len(entries) != n - 1:
            raise ValueError(f"expected {n - 1} entries for n={n}, got {len(entries)}")
        if any(e < 0 for e in entries):
            raise ValueError("entries must be non-negative")

    @property
    def degree(self) -> int:
        return sum(self.entries)

    def valid_for(self, m) -> bool:
        m = _check_ambient(m)
        return m is INFINITE or all(e < m for e in self.entries)

    def raised(self, i: int) -> "Composition":
        """The cell a[i]: entry i (1-based) increased by one."""
        if not 1 <= i <= self.n - 1:
            raise IndexError(f"position {i} out of range for n={self.n}")
        e = list(self.entries)
        e[i - 1] += 1
        return Composition(tuple(e))

    def __str__(self):
        return "[" + ",".join(str(e) for e in self.entries) + "]"


EMPTY_UNIT = Composition((), 0)


@dataclass(frozen=True, order=True)
class DepthOrdering:
    """A labeled cell i1 <_{a1} i2 <_{a2} ... <_{a_{n-1}} i_n."""

    labels: tuple[int, ...]
    entries: tuple[int, ...]

    def __post_init__(self):
        labels = tuple(int(x) for x in self.labels)
        entries = tuple(int(e) for e in self.entries)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "entries", entries)
        n = len(labels)
        if n < 1:
            raise ValueError("a depth-ordering needs at least one point")
        if sorted(labels) != list(range(1, n + 1)):
            raise ValueError(f"labels must be a permutation of 1..{n}")
        if len(entries) != n - 1:
            raise ValueError("entry count must be one less than the label count")
        if any(e < 0 for e in entries):
            raise ValueError("entries must be non-negative")

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def degree(self) -> int:
        return sum(self.entries)

    def cell(self) -> Composition:
        """Forget the labels."""
        return Composition(self.entries)

    def __str__(self):
        if self.n == 1:
            return str(self.labels[0])
        parts = []
        for lab, e in zip(self.labels, self.entries):
            parts.append(f"{lab}<{e}")
        parts.append(str(self.labels[-1]))
        return " ".join(parts)


# ---------------------------------------------------------------------------
# level trees


@dataclass(frozen=True)
class LevelTree:
    """A planar level tree; the equivalent view of a (labeled) cell.

    The root sits at height 0 and every leaf at the ambient height, which
    is ``m`` when finite and ``max(entries) + 1`` for the canonical
    truncated view of the limit complex.
    """

    height: int
    children: tuple["LevelTree", ...] = ()
    label: int | None = None

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def leaves(self) -> list["LevelTree"]:
        if self.is_leaf:
            return [self]
        out = []
        for c in self.children:
            out.extend(c.leaves())
        return out

    @staticmethod
    def _build(h: int, top: int, gaps: tuple[int, ...], labels):
        if h == top:
            if len(labels) != 1:
                raise ValueError("leaf with more than one point")
            return LevelTree(h, (), labels[0])
        # children group the leaves sharing more than h levels
        pieces = _split_segments(gaps, h)
        kids = []
        pos = 0
        for seg in pieces:
            span = len(seg) + 1
            kids.append(LevelTree._build(h + 1, top, seg, labels[pos:pos + span]))
            pos += span
        return LevelTree(h, tuple(kids), None)

    @classmethod
    def from_composition(cls, a: Composition, m=INFINITE) -> "LevelTree":
        m = _check_ambient(m)
        if not a.valid_for(m):
            raise ValueError(f"cell {a} is empty in ambient dimension {m}")
        top = m if m is not INFINITE else max(a.entries, default=0) + 1
        return cls._build(0, top, a.entries, [None] * a.n)

    @classmethod
    def from_depth_ordering(cls, g: DepthOrdering, m=INFINITE) -> "LevelTree":
        m = _check_ambient(m)
        if not g.cell().valid_for(m):
            raise ValueError(f"cell {g} is empty in ambient dimension {m}")
        top = m if m is not INFINITE else max(g.entries, default=0) + 1
        return cls._build(0, top, g.entries, list(g.labels))

    def _gaps(self) -> list[int]:
        if self.is_leaf:
            return []
        gaps = []
        for idx, child in enumerate(self.children):
            gaps.extend(child._gaps())
            if idx + 1 < len(self.children):
                gaps.append(self.height)
        return gaps

    def to_composition(self) -> Composition:
        return Composition(tuple(self._gaps()))

    def to_depth_ordering(self) -> DepthOrdering:
        labels = tuple(leaf.label for leaf in self.leaves())
        if any(lab is None for lab in labels):
            raise ValueError("tree has unlabeled leaves")
        return DepthOrdering(labels, tuple(self._gaps()))


# ---------------------------------------------------------------------------
# cochains


class Cochain:
    """A sparse formal sum of cells with integer or mod-2 coefficients.

    Immutable by convention: construct once, never mutate.  Keys are
    Composition or DepthOrdering values, all of one component.
    """

    __slots__ = ("ring", "n", "_terms")

    def __init__(self, ring, n, terms=()):
        _check_ring(ring)
        data = {}
        items = terms.items() if hasattr(terms, "items") else terms
        for cell, coef in items:
            coef = int(coef)
            if ring == MOD2:
                coef %= 2
            if coef == 0:
                continue
            if cell.n != n:
                raise ComponentMismatchError(
                    f"cell {cell} has component {cell.n}, expected {n}")
            data[cell] = data.get(cell, 0) + coef
            if ring == MOD2:
                data[cell] %= 2
            if data[cell] == 0:
                del data[cell]
        self.ring = ring
        self.n = n
        self._terms = data

    @classmethod
    def zero(cls, ring, n):
        return cls(ring, n, ())

    @classmethod
    def single(cls, cell, ring=MOD2, coef=1):
        return cls(ring, cell.n, [(cell, coef)])

    def items(self):
        """Terms in canonical (lexicographic) cell order."""
        return [(c, self._terms[c]) for c in sorted(self._terms)]

    def coefficient(self, cell):
        return self._terms.get(cell, 0)

    def support(self):
        return sorted(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def degrees(self) -> set[int]:
        return {c.degree for c in self._terms}

    def __add__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        if other.ring != self.ring or other.n != self.n:
            raise ComponentMismatchError("cochain sum needs matching ring and component")
        data = dict(self._terms)
        for cell, coef in other._terms.items():
            data[cell] = data.get(cell, 0) + coef
        return Cochain(self.ring, self.n, data)

    def __sub__(self, other):
        return self + other.scaled(-1)

    def scaled(self, k: int):
        return Cochain(self.ring, self.n, [(c, k * v) for c, v in self._terms.items()])

    def mod2(self):
        return Cochain(MOD2, self.n, list(self._terms.items()))

    def map_cells(self, fn):
        return Cochain(self.ring, self.n, [(fn(c), v) for c, v in self._terms.items()])

    def __eq__(self, other):
        return (isinstance(other, Cochain) and self.ring == other.ring
                and self.n == other.n and self._terms == other._terms)

    def __hash__(self):
        return hash((self.ring, self.n, frozenset(self._terms.items())))

    def __len__(self):
        return len(self._terms)

    def __str__(self):
        if not self._terms:
            return "0"
        return " + ".join(f"{v}*{c}" for c, v in self.items())

    def __repr__(self):
        return f"Cochain({self.ring}, {self.n}, {self})"


# ---------------------------------------------------------------------------
# enumeration and block combinatorics


def enumerate_cells(n: int, degree: int, m=INFINITE) -> list[Composition]:
    """All cells of FN_n in the given degree, lexicographically ordered.

    Entries are capped below ``m`` when the ambient dimension is finite;
    impossible inputs yield the empty list.
    """
    m = _check_ambient(m)
    if n < 0 or degree < 0:
        return []
    if n == 0:
        return [EMPTY_UNIT] if degree == 0 else []
    if n == 1:
        return [Composition(())] if degree == 0 else []
    cap = degree if m is INFINITE else min(degree, m - 1)

    out = []

    def rec(prefix, remaining, slots):
        if slots == 0:
            if remaining == 0:
                out.append(Composition(tuple(prefix)))
            return
        if remaining > cap * slots:
            return
        for e in range(0, min(cap, remaining) + 1):
            prefix.append(e)
            rec(prefix, remaining - e, slots - 1)
            prefix.pop()

    rec([], degree, n - 1)
    return out


def enumerate_labeled_cells(n: int, degree: int, m=INFINITE) -> list[DepthOrdering]:
    """All cells of the labeled complex in the given degree."""
    cells = enumerate_cells(n, degree, m)
    out = []
    for perm in itertools.permutations(range(1, n + 1)):
        for a in cells:
            out.append(DepthOrdering(perm, a.entries))
    out.sort()
    return out


def blocks(a: Composition, level: int) -> tuple[tuple[int, ...], ...]:
    """The ordered l-blocks of a cell.

    Maximal runs of entries greater than ``level`` appear as themselves;
    every entry at or below ``level`` contributes an empty block at its
    position.  B_0([0,2,6,0,1]) = ((), (2,6), (), (1,)).
    """
    out = []
    run = []
    for e in a.entries:
        if e > level:
            run.append(e)
        else:
            if run:
                out.append(tuple(run))
                run = []
            out.append(())
    if run:
        out.append(tuple(run))
    return tuple(out)


def _split_segments(entries, level) -> tuple[tuple[int, ...], ...]:
    """Split a gap sequence at entries <= level; #segments = #delimiters + 1.

    Segments correspond to the groups of consecutive points joined above
    ``level``, i.e. to the child subtrees at height level+1.
    """
    segs = []
    cur = []
    for e in entries:
        if e > level:
            cur.append(e)
        else:
            segs.append(tuple(cur))
            cur = []
    segs.append(tuple(cur))
    return tuple(segs)


def zero_segments(a: Composition) -> tuple[tuple[int, ...], ...]:
    """The point-group decomposition of a cell at its zero entries.

    A cell on n >= 1 points has (#zeros + 1) segments; the empty component
    has none.  This is the decomposition shuffled by the transfer product.
    """
    if a.n == 0:
        return ()
    return _split_segments(a.entries, 0)


# ---------------------------------------------------------------------------
# block symmetrization


def _block_orbit(entries: tuple[int, ...]) -> frozenset[tuple[int, ...]]:
    if not entries:
        return frozenset({()})
    mn = min(entries)
    segs = _split_segments(entries, mn)
    if len(segs) == 1:
        # no delimiter at the minimum would mean mn > mn; all entries equal mn
        # is handled below since segments are then empty
        pass
    variant_sets = [sorted(_block_orbit(s)) for s in segs]
    out = set()
    for arrangement in set(itertools.permutations(range(len(segs)))):
        pools = [variant_sets[i] for i in arrangement]
        for choice in itertools.product(*pools):
            merged = []
            for idx, seg in enumerate(choice):
                if idx:
                    merged.append(mn)
                merged.extend(seg)
            out.add(tuple(merged))
    return frozenset(out)


def symm(a: Composition) -> Cochain:
    """Sum of all distinct block-permutations of a cell, mod 2.

    Block permutations rearrange the segments between minimal entries,
    recursively inside each segment, preserving the multiset of l-blocks
    for every l.
    """
    orbit = _block_orbit(a.entries)
    return Cochain(MOD2, a.n, [(Composition(e), 1) for e in orbit])


# ---------------------------------------------------------------------------
# shuffle machinery for the differential


@dataclass(frozen=True)
class ShuffleContext:
    """Everything attached to the i-th edge quotient of a cell.

    ``children`` are the gap sequences of the subtrees hanging under the
    quotient vertex (height q = a_i + 1), listed left to right; the first
    ``k`` of them come from the left merged edge.
    """

    i: int
    raised: Composition
    lo: int        # first position (1-based) of the block A_i inside raised
    hi: int        # last position of A_i
    q: int         # quotient vertex height
    children: tuple[tuple[int, ...], ...]
    k: int

    @property
    def leaf_spans(self) -> list[tuple[int, int]]:
        """Absolute 1-based leaf intervals covered by each child."""
        # a child whose gap sequence has length t spans t+1 leaves
        out = []
        start = self.lo
        for child in self.children:
            out.append((start, start + len(child)))
            start += len(child) + 1
        return out


def shuffle_context(a: Composition, i: int) -> ShuffleContext:
    raised = a.raised(i)
    e = raised.entries
    q = a.entries[i - 1] + 1
    lo = i
    while lo > 1 and e[lo - 2] >= q:
        lo -= 1
    hi = i
    while hi < len(e) and e[hi] >= q:
        hi += 1
    block = e[lo - 1:hi]
    children = _split_segments(block, q)
    # delimiters inside the block are the entries equal to q; position i is one
    delims = [p for p in range(lo, hi + 1) if e[p - 1] == q]
    k = delims.index(i) + 1
    return ShuffleContext(i, raised, lo, hi, q, children, k)


def shuffles(N: int, k: int) -> list[tuple[int, ...]]:
    """All (k, N-k)-shuffles as orderings of range(N)."""
    out = []
    for pos in itertools.combinations(range(N), k):
        order = [None] * N
        rest = iter(range(k, N))
        left = iter(range(k))
        posset = set(pos)
        for slot in range(N):
            order[slot] = next(left) if slot in posset else next(rest)
        out.append(tuple(order))
    return out


def shuffle_set(a: Composition, i: int) -> list[tuple[int, ...]]:
    """The shuffle permutations Sh(a, i) acting on the quotient-vertex subtrees."""
    ctx = shuffle_context(a, i)
    return shuffles(len(ctx.children), ctx.k)


def _subtree_count(gaps: tuple[int, ...], h: int) -> int:
    """Vertices at height h of the subtree with the given internal gaps."""
    return 1 + sum(1 for g in gaps if g < h)


def _pair_weight(gs: tuple[int, ...], gt: tuple[int, ...], q: int, m) -> int:
    """Crossing parity of two adjacent subtrees rooted at height q+1.

    Counts vertex transpositions at each height from q+1 up to the ambient
    dimension; in the limit the ambient dimension is taken even.
    """
    Ls, Lt = len(gs) + 1, len(gt) + 1
    H = max(q + 1, max(gs, default=0) + 1, max(gt, default=0) + 1)
    tot = 0
    for h in range(q + 1, H + 1):
        tot += _subtree_count(gs, h) * _subtree_count(gt, h)
    if m is INFINITE:
        tot += H * Ls * Lt          # (m - H) * Ls * Lt with m even
    else:
        tot += (m - H) * Ls * Lt
    return tot & 1


def _shuffle_sign_exponent(ctx: ShuffleContext, order: tuple[int, ...], m) -> int:
    position = {child: slot for slot, child in enumerate(order)}
    exp = 0
    N = len(order)
    for s in range(N):
        for t in range(s + 1, N):
            if position[t] < position[s]:
                exp += _pair_weight(ctx.children[s], ctx.children[t], ctx.q, m)
    return exp & 1


def _alpha(entries: tuple[int, ...], i: int) -> int:
    ai = entries[i - 1]
    tot = ai + 1
    for j in range(1, len(entries) + 1):
        if j < i:
            tot += min(entries[j - 1], ai + 1)
        elif j > i:
            tot += min(entries[j - 1], ai)
    return tot


def _shuffled_entries(ctx: ShuffleContext, order: tuple[int, ...]) -> tuple[int, ...]:
    e = ctx.raised.entries
    middle = []
    for idx, child in enumerate(order):
        if idx:
            middle.append(ctx.q)
        middle.extend(ctx.children[child])
    return e[:ctx.lo - 1] + tuple(middle) + e[ctx.hi:]


@lru_cache(maxsize=None)
def _delta_terms(entries: tuple[int, ...]) -> tuple[tuple[int, int, tuple[int, ...]], ...]:
    """Integral differential of a cell in the limit complex.

    Returns (i, coefficient-sign-exponent-resolved coefficient, entries)
    triples, one per shuffle, unreduced.
    """
    a = Composition(entries)
    out = []
    for i in range(1, a.n):
        ctx = shuffle_context(a, i)
        prefix = (i + _alpha(entries, i) + 1) & 1
        for order in shuffles(len(ctx.children), ctx.k):
            exp = (prefix + _shuffle_sign_exponent(ctx, order, INFINITE)) & 1
            coef = -1 if exp else 1
            out.append((i, coef, _shuffled_entries(ctx, order)))
    return tuple(out)


def delta_unlabeled(a: Composition, ring=INTEGERS, m=INFINITE) -> Cochain:
    """The coboundary of an unlabeled cell.

    For finite ambient dimension the limit differential is truncated: the
    i-th batch survives exactly when the raised entry a_i + 1 stays below
    m (the excluded cells span a subcomplex).
    """
    _check_ring(ring)
    m = _check_ambient(m)
    if a.n <= 1:
        return Cochain.zero(ring, a.n)
    if not a.valid_for(m):
        raise ValueError(f"cell {a} is empty in ambient dimension {m}")
    acc = {}
    for i, coef, entries in _delta_terms(a.entries):
        if m is not INFINITE and a.entries[i - 1] + 1 >= m:
            continue
        cell = Composition(entries)
        acc[cell] = acc.get(cell, 0) + coef
    return Cochain(ring, a.n, acc)


def delta_cochain(c: Cochain, m=INFINITE) -> Cochain:
    """Linear extension of the coboundary to cochains."""
    acc = Cochain.zero(c.ring, c.n)
    for cell, coef in c.items():
        if isinstance(cell, DepthOrdering):
            acc = acc + delta_labeled(cell, m=m, ring=c.ring).scaled(coef)
        else:
            acc = acc + delta_unlabeled(cell, c.ring, m).scaled(coef)
    return acc


def is_cocycle(c: Cochain, m=INFINITE) -> bool:
    return delta_cochain(c, m).is_zero


def _labeled_prefix_exponent(entries: tuple[int, ...], p: int, m) -> int:
    if m is INFINITE:
        return (p + _alpha(entries, p) + 1) & 1
    ap = entries[p - 1]
    tot = p + (m - (ap + 1)) + 1
    for k in range(1, len(entries) + 1):
        if k < p:
            tot += m - min(entries[k - 1], ap + 1)
        elif k > p:
            tot += m - min(entries[k - 1], ap)
    return tot & 1


def delta_labeled(g: DepthOrdering, m=INFINITE, ring=INTEGERS) -> Cochain:
    """The coboundary in the labeled complex.

    Each edge quotient contributes all vertex shuffles of the quotient
    tree, the labels transported along the shuffled subtrees; the sign is
    the quotient-vertex sign times the shuffle crossing parity.
    """
    _check_ring(ring)
    m = _check_ambient(m)
    if g.n <= 1:
        return Cochain.zero(ring, g.n)
    a = g.cell()
    if not a.valid_for(m):
        raise ValueError(f"cell {g} is empty in ambient dimension {m}")
    acc = {}
    for p in range(1, g.n):
        if m is not INFINITE and a.entries[p - 1] + 1 >= m:
            continue
        ctx = shuffle_context(a, p)
        prefix = _labeled_prefix_exponent(a.entries, p, m)
        spans = ctx.leaf_spans
        for order in shuffles(len(ctx.children), ctx.k):
            exp = (prefix + _shuffle_sign_exponent(ctx, order, m)) & 1
            coef = -1 if exp else 1
            labels = list(g.labels[:ctx.lo - 1])
            for child in order:
                lo, hi = spans[child]
                labels.extend(g.labels[lo - 1:hi])
            labels.extend(g.labels[ctx.hi + 1:])
            cell = DepthOrdering(tuple(labels), _shuffled_entries(ctx, order))
            acc[cell] = acc.get(cell, 0) + coef
    return Cochain(ring, g.n, acc)


# ---------------------------------------------------------------------------
# the chain homotopy on FN_4 and the block exchange


def in_S(a: Composition) -> bool:
    """Membership in the homotopy submodule S of FN_4.

    Cells with a zero entry, with the outer entries equal, or matching
    (x,x,y) with x <= y or (x,y,y) with y <= x are excluded; every member
    has a unique minimal entry.
    """
    if a.n != 4:
        return False
    x, y, z = a.entries
    if min(a.entries) == 0:
        return False
    if x == z:
        return False
    if x == y and x <= z:
        return False
    if y == z and y <= x:
        return False
    return True


def chi(a: Composition) -> Composition:
    """Exchange the two blocks flanking the unique minimal entry."""
    if not in_S(a):
        raise ValueError(f"{a} lies outside the homotopy submodule")
    e = a.entries
    mn = min(e)
    pos = e.index(mn)
    left, right = e[:pos], e[pos + 1:]
    return Composition(right + (mn,) + left)


def homotopy_P(a: Composition) -> Cochain:
    """The degree -1 homotopy: lower the minimal entry or kill the cell.

    Cells whose minimum sits last, or sits in the middle with the outer
    entries descending, map to zero; otherwise the minimum drops by one.
    """
    if not in_S(a):
        raise ValueError(f"{a} lies outside the homotopy submodule")
    x, y, z = a.entries
    mn = min(a.entries)
    if z == mn:
        return Cochain.zero(MOD2, 4)
    if y == mn:
        if x > z:
            return Cochain.zero(MOD2, 4)
        return Cochain.single(Composition((x, y - 1, z)))
    return Cochain.single(Composition((x - 1, y, z)))


def project_to_S(c: Cochain) -> Cochain:
    return Cochain(c.ring, c.n, [(cell, v) for cell, v in c.items() if in_S(cell)])


def homotopy_P_cochain(c: Cochain) -> Cochain:
    """Linear extension of the homotopy, composed with projection onto S."""
    acc = Cochain.zero(MOD2, 4)
    for cell, coef in project_to_S(c).items():
        acc = acc + homotopy_P(cell).scaled(coef)
    return acc
