"""The skyline (gathered monomial) basis and its Hopf-ring calculus.

A gathered block is a cup monomial in the generators sharing one column of
points; a skyline monomial is a transfer product of blocks with distinct
profiles together with one unit column.  These monomials form the canonical
additive basis of the mod-2 cohomology of the symmetric groups.

Products follow the diagram calculus: transfer places diagrams side by
side and merges equal-profile columns (binomial coefficients mod 2 via the
dyadic rule), the coproduct cuts along full-height vertical lines, and the
cup product matches columns through the comultiplication recursion, the
base case being two columns of equal width stacked.

Stable classes (the limit over components) are monomials whose unit column
has been discarded; ``unit = None`` marks them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .fncomplex import MOD2, INFINITE, Composition, Cochain, symm
from .util import binom_mod2, v2


@dataclass(frozen=True, order=True)
class GatheredBlock:
    """One column: ``points`` boxes wide, profile a set of (level, power)."""

    points: int
    profile: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prof = tuple(sorted(((int(l), int(d)) for l, d in self.profile), reverse=True))
        object.__setattr__(self, "profile", prof)
        if self.points < 1:
            raise ValueError("a block needs a positive number of points")
        if not prof:
            raise ValueError("a block needs a nonempty profile")
        levels = [l for l, _ in prof]
        if len(set(levels)) != len(levels):
            raise ValueError("profile levels must be distinct")
        for l, d in prof:
            if l < 1 or d < 1:
                raise ValueError("levels and powers must be positive")
            if self.points % (1 << l):
                raise ValueError(
                    f"2^{l} must divide the {self.points} points of the column")

    @property
    def level_max(self) -> int:
        return self.profile[0][0]

    @property
    def degree(self) -> int:
        return sum(d * (self.points - (self.points >> l)) for l, d in self.profile)

    @property
    def height(self) -> int:
        """Largest entry of the column's cochain representative: sum of powers."""
        return sum(d for _, d in self.profile)

    def entries(self) -> tuple[int, ...]:
        """Gap sequence of the column on its points."""
        out = []
        for j in range(1, self.points):
            out.append(sum(d for l, d in self.profile if j % (1 << l)))
        return tuple(out)

    def scaled_powers(self, factor: int) -> "GatheredBlock":
        return GatheredBlock(self.points, tuple((l, d * factor) for l, d in self.profile))

    def __str__(self):
        return "*".join(
            f"g({l},{self.points >> l})" + (f"^{d}" if d > 1 else "")
            for l, d in self.profile)


def gamma_block(level: int, n: int) -> GatheredBlock:
    """The column of the generator with the given level on n * 2^level points."""
    return GatheredBlock(n << level, ((level, 1),))


@dataclass(frozen=True)
class SkylineMonomial:
    """Columns with pairwise distinct profiles plus one unit column.

    ``unit`` is the unit-column width; ``None`` marks a stable class (the
    unit column is infinitely wide and ignored).
    """

    blocks: tuple[GatheredBlock, ...]
    unit: int | None = 0

    def __post_init__(self):
        blocks = tuple(sorted(self.blocks, reverse=True))
        object.__setattr__(self, "blocks", blocks)
        profiles = [b.profile for b in blocks]
        if len(set(profiles)) != len(profiles):
            raise ValueError("skyline monomial columns must have distinct profiles")
        if self.unit is not None and self.unit < 0:
            raise ValueError("unit width must be non-negative")

    @property
    def is_stable(self) -> bool:
        return self.unit is None

    @property
    def width(self) -> int:
        return sum(b.points for b in self.blocks)

    @property
    def component(self) -> int:
        if self.is_stable:
            raise ValueError("stable classes have no finite component")
        return self.width + self.unit

    @property
    def degree(self) -> int:
        return sum(b.degree for b in self.blocks)

    @property
    def is_unit(self) -> bool:
        return not self.blocks

    def sort_key(self):
        return (self.width, self.blocks, -1 if self.unit is None else self.unit)

    def stabilized(self) -> "SkylineMonomial":
        return SkylineMonomial(self.blocks, None)

    def with_unit(self, unit: int) -> "SkylineMonomial":
        return SkylineMonomial(self.blocks, unit)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        parts = [str(b) for b in self.blocks]
        if self.is_stable:
            parts.append("1_inf")
        elif self.unit or not parts:
            parts.append(f"1_{self.unit}")
        return " o ".join(parts)


def unit_monomial(width: int) -> SkylineMonomial:
    return SkylineMonomial((), width)


def gamma_monomial(level: int, n: int) -> SkylineMonomial:
    if n == 0:
        return unit_monomial(0)
    return SkylineMonomial((gamma_block(level, n),), 0)


class SkylineClass:
    """A mod-2 formal sum of skyline monomials."""

    __slots__ = ("_monos",)

    def __init__(self, monomials=()):
        acc = {}
        items = monomials.items() if hasattr(monomials, "items") else (
            (mono, 1) for mono in monomials)
        for mono, coef in items:
            if coef % 2 == 0:
                continue
            acc[mono] = acc.get(mono, 0) ^ 1
        self._monos = frozenset(m for m, c in acc.items() if c)

    @classmethod
    def of(cls, *monomials):
        return cls(monomials)

    @property
    def is_zero(self) -> bool:
        return not self._monos

    def monomials(self) -> list[SkylineMonomial]:
        return sorted(self._monos, key=lambda m: m.sort_key())

    def __add__(self, other):
        return SkylineClass(self._monos.symmetric_difference(other._monos))

    def __iter__(self):
        return iter(self.monomials())

    def __len__(self):
        return len(self._monos)

    def __contains__(self, mono):
        return mono in self._monos

    def __eq__(self, other):
        return isinstance(other, SkylineClass) and self._monos == other._monos

    def __hash__(self):
        return hash(self._monos)

    def components(self) -> set[int]:
        return {m.component for m in self._monos}

    def degrees(self) -> set[int]:
        return {m.degree for m in self._monos}

    def __str__(self):
        if not self._monos:
            return "0"
        return " + ".join(str(m) for m in self.monomials())

    def __repr__(self):
        return f"SkylineClass({self})"


ZERO = SkylineClass()


# ---------------------------------------------------------------------------
# normalization (column merging)


def _merge_blocks(blocks) -> tuple[int, tuple[GatheredBlock, ...]]:
    """Merge equal-profile columns; returns (coefficient mod 2, columns).

    Equal profiles merge by adding points; the coefficient is the binomial
    on the repeat counts at the top level, zero exactly when the counts
    share a binary digit.
    """
    by_profile: dict = {}
    for b in blocks:
        by_profile.setdefault(b.profile, []).append(b)
    coef = 1
    merged = []
    for profile, group in by_profile.items():
        lmax = profile[0][0]
        total_r = 0
        for b in group:
            r = b.points >> lmax
            coef &= binom_mod2(total_r + r, r)
            if not coef:
                return 0, ()
            total_r += r
        merged.append(GatheredBlock(total_r << lmax, profile))
    return coef, tuple(merged)


def normalize(blocks, unit: int | None) -> SkylineClass:
    """Assemble columns and a unit width into a basis class (0 or 1 monomial)."""
    coef, merged = _merge_blocks(blocks)
    if not coef:
        return ZERO
    return SkylineClass.of(SkylineMonomial(merged, unit))


# ---------------------------------------------------------------------------
# transfer product


def _transfer_monomials(a: SkylineMonomial, b: SkylineMonomial) -> SkylineClass:
    if a.is_stable or b.is_stable:
        raise ValueError("transfer products are computed at finite components")
    coef = binom_mod2(a.unit + b.unit, a.unit)
    if not coef:
        return ZERO
    return normalize(a.blocks + b.blocks, a.unit + b.unit)


def transfer_skyline(x, y) -> SkylineClass:
    """Place two diagrams side by side and merge columns (mod-2 dyadic rule)."""
    x = as_class(x)
    y = as_class(y)
    acc = ZERO
    for a in x:
        for b in y:
            acc = acc + _transfer_monomials(a, b)
    return acc


def as_class(x) -> SkylineClass:
    if isinstance(x, SkylineClass):
        return x
    if isinstance(x, SkylineMonomial):
        return SkylineClass.of(x)
    if isinstance(x, GatheredBlock):
        return SkylineClass.of(SkylineMonomial((x,), 0))
    raise TypeError(f"cannot interpret {x!r} as a skyline class")


# ---------------------------------------------------------------------------
# coproduct


def _block_splits(b: GatheredBlock):
    """Cuts of a column along its full-height lines: (left, right) options.

    Full-height verticals sit at multiples of 2^level_max, so each side
    keeps the profile with a multiple-of-2^level_max width; empty sides are
    None.
    """
    step = 1 << b.level_max
    out = []
    for left_pts in range(0, b.points + 1, step):
        left = GatheredBlock(left_pts, b.profile) if left_pts else None
        right_pts = b.points - left_pts
        right = GatheredBlock(right_pts, b.profile) if right_pts else None
        out.append((left, right))
    return out


def coproduct_skyline(mono: SkylineMonomial) -> dict[tuple[SkylineMonomial, SkylineMonomial], int]:
    """All two-part divisions of a diagram along full-height lines, mod 2."""
    if mono.is_stable:
        raise ValueError("coproduct is computed at finite components")
    options = [_block_splits(b) for b in mono.blocks]
    options.append([(u, mono.unit - u) for u in range(mono.unit + 1)])
    acc: dict = {}
    for choice in itertools.product(*options):
        left_blocks = [l for l, _ in choice[:-1] if l is not None]
        right_blocks = [r for _, r in choice[:-1] if r is not None]
        lu, ru = choice[-1]
        left = normalize(left_blocks, lu)
        right = normalize(right_blocks, ru)
        for lm in left:
            for rm in right:
                key = (lm, rm)
                acc[key] = acc.get(key, 0) ^ 1
    return {k: v for k, v in acc.items() if v}


def coproduct_component(x, i: int, j: int) -> list[tuple[SkylineMonomial, SkylineMonomial]]:
    """The (i, j)-component terms of the coproduct of a class."""
    acc: dict = {}
    for mono in as_class(x):
        for (l, r), v in coproduct_skyline(mono).items():
            if l.component == i and r.component == j:
                acc[(l, r)] = acc.get((l, r), 0) ^ v
    return sorted(k for k, v in acc.items() if v)


# ---------------------------------------------------------------------------
# cup product


def _stack(b: GatheredBlock, c: GatheredBlock) -> GatheredBlock:
    """Stack two columns of equal width: profiles merge, powers add."""
    if b.points != c.points:
        raise ValueError("only columns of equal width stack")
    prof = dict(b.profile)
    for l, d in c.profile:
        prof[l] = prof.get(l, 0) + d
    return GatheredBlock(b.points, tuple(prof.items()))


def _cup_block_mono(b: GatheredBlock, y: SkylineMonomial) -> SkylineClass:
    """Cup a single column against a monomial of the same component."""
    if y.is_unit:
        # cup with the unit class of the same component is the identity
        return SkylineClass.of(SkylineMonomial((b,), 0))
    c = y.blocks[0]
    rest = SkylineMonomial(y.blocks[1:], y.unit)
    step = 1 << b.level_max
    if c.points > b.points or c.points % step:
        return ZERO
    left = GatheredBlock(c.points, b.profile)
    stacked = _stack(left, c)
    leftover_pts = b.points - c.points
    if leftover_pts == 0:
        if rest.component != 0:
            return ZERO
        return SkylineClass.of(SkylineMonomial((stacked,), 0))
    leftover = GatheredBlock(leftover_pts, b.profile)
    tail = _cup_block_mono(leftover, rest)
    acc = ZERO
    for mono in tail:
        acc = acc + normalize(mono.blocks + (stacked,), mono.unit)
    return acc


def _cup_monomials(x: SkylineMonomial, y: SkylineMonomial) -> SkylineClass:
    if x.component != y.component:
        return ZERO
    if x.is_unit:
        return SkylineClass.of(y)
    if y.is_unit:
        return SkylineClass.of(x)
    b = x.blocks[0]
    rest = SkylineMonomial(x.blocks[1:], x.unit)
    acc = ZERO
    for mono in as_class(y):
        for (l, r), v in coproduct_skyline(mono).items():
            if l.component != b.points:
                continue
            head = _cup_block_mono(b, l)
            tail = _cup_monomials_class(rest, SkylineClass.of(r))
            for hm in head:
                for tm in tail:
                    acc = acc + _transfer_monomials(hm, tm)
    return acc


def _cup_monomials_class(x: SkylineMonomial, y: SkylineClass) -> SkylineClass:
    acc = ZERO
    for mono in y:
        acc = acc + _cup_monomials(x, mono)
    return acc


def cup_skyline(x, y) -> SkylineClass:
    """Cup product by the column-matching recursion, cross-component zero."""
    x = as_class(x)
    y = as_class(y)
    if any(m.is_stable for m in x) or any(m.is_stable for m in y):
        return cup_stable(x, y)
    acc = ZERO
    for a in x:
        acc = acc + _cup_monomials_class(a, y)
    return acc


def cup_power(x, k: int) -> SkylineClass:
    x = as_class(x)
    comps = x.components()
    if k == 0:
        if len(comps) != 1:
            raise ValueError("cup_power(x, 0) needs a single component")
        return SkylineClass.of(unit_monomial(comps.pop()))
    acc = x
    for _ in range(k - 1):
        acc = cup_skyline(acc, x)
    return acc


# ---------------------------------------------------------------------------
# stable classes


def stabilize(x) -> SkylineClass:
    """Forget unit columns: the image in the limit over components."""
    return SkylineClass.of(*(m.stabilized() for m in as_class(x)))


def restrict_component(mono: SkylineMonomial) -> SkylineClass:
    """The map one component down: remove an empty column, or zero."""
    if mono.is_stable:
        raise ValueError("already stable")
    if mono.unit == 0:
        return ZERO
    return SkylineClass.of(mono.with_unit(mono.unit - 1))


def cup_stable(x, y) -> SkylineClass:
    """Cup of stable classes: embed at a wide component, cup, re-stabilize."""
    x = as_class(x)
    y = as_class(y)
    if x.is_zero or y.is_zero:
        return ZERO
    if not all(m.is_stable for m in x) or not all(m.is_stable for m in y):
        raise ValueError("cup_stable needs stable classes on both sides")
    n = max(m.width for m in x) + max(m.width for m in y)
    xf = SkylineClass.of(*(m.with_unit(n - m.width) for m in x))
    yf = SkylineClass.of(*(m.with_unit(n - m.width) for m in y))
    return stabilize(cup_skyline(xf, yf))


# ---------------------------------------------------------------------------
# representatives


def to_cochain(x) -> Cochain:
    """The symmetrized cocycle representative of a monomial (or class).

    Column gap sequences are joined by single zeros, unit width w appends w
    empty point groups, and the whole composition is block-symmetrized.
    """
    if isinstance(x, SkylineClass):
        comps = x.components()
        if len(comps) != 1:
            raise ValueError("to_cochain needs a single component")
        n = comps.pop()
        acc = Cochain.zero(MOD2, n)
        for mono in x:
            acc = acc + to_cochain(mono)
        return acc
    mono = x if isinstance(x, SkylineMonomial) else SkylineMonomial((x,), 0)
    if mono.is_stable:
        raise ValueError("stable classes have no single representative")
    return symm(Composition(base_composition(mono), mono.component))


def base_composition(mono: SkylineMonomial) -> tuple[int, ...]:
    """The canonical unsymmetrized representative entries of a monomial."""
    segments = [b.entries() for b in mono.blocks] + [()] * mono.unit
    entries: list[int] = []
    for idx, seg in enumerate(segments):
        if idx:
            entries.append(0)
        entries.extend(seg)
    return tuple(entries)


# ---------------------------------------------------------------------------
# basis enumeration


def block_height_ok(b: GatheredBlock, height_bound) -> bool:
    return height_bound is INFINITE or b.height < height_bound


@lru_cache(maxsize=None)
def _blocks_with(points: int, degree: int, height_cap: int | None) -> tuple[GatheredBlock, ...]:
    """All blocks on exactly `points` points of exactly `degree`."""
    out = []
    levels = [l for l in range(1, points.bit_length()) if points % (1 << l) == 0]

    def rec(idx, profile, deg_left, height_left):
        if deg_left == 0:
            if profile:
                out.append(GatheredBlock(points, tuple(profile)))
            return
        if idx == len(levels):
            return
        l = levels[idx]
        box = points - (points >> l)
        rec(idx + 1, profile, deg_left, height_left)
        d = 1
        while d * box <= deg_left and (height_left is None or d <= height_left):
            profile.append((l, d))
            rec(idx + 1, profile, deg_left - d * box, None if height_left is None else height_left - d)
            profile.pop()
            d += 1

    rec(0, [], degree, height_cap)
    return tuple(sorted(out, reverse=True))


def enumerate_skyline_basis(n: int, degree: int, height_bound=INFINITE) -> list[SkylineMonomial]:
    """All basis monomials of one component and degree.

    A finite ``height_bound`` d drops monomials with a column of height at
    least d (the truncation onto configuration spaces in R^d).
    """
    if n < 0 or degree < 0:
        return []
    if degree == 0:
        return [unit_monomial(n)]
    height_cap = None if height_bound is INFINITE else max(height_bound - 1, 0)
    out = []

    def rec(max_key, pts_left, deg_left, chosen, profiles):
        if deg_left == 0:
            out.append(SkylineMonomial(tuple(chosen), pts_left))
            return
        if pts_left < 2:
            return
        for pts in range(2, pts_left + 1):
            for deg in range(1, deg_left + 1):
                for b in _blocks_with(pts, deg, height_cap):
                    key = (b.points, b.profile)
                    if max_key is not None and key >= max_key:
                        continue
                    if b.profile in profiles:
                        continue
                    chosen.append(b)
                    profiles.add(b.profile)
                    rec(key, pts_left - pts, deg_left - deg, chosen, profiles)
                    profiles.discard(b.profile)
                    chosen.pop()

    rec(None, n, degree, [], set())
    out.sort(key=lambda m: m.sort_key())
    return out


def enumerate_stable_monomials(max_degree: int, max_width: int) -> list[SkylineMonomial]:
    """All stable monomials with the given degree and width caps."""
    out = []

    def rec(max_key, pts_left, deg_left, chosen, profiles):
        out.append(SkylineMonomial(tuple(chosen), None))
        if pts_left < 2:
            return
        for pts in range(2, pts_left + 1):
            for deg in range(1, deg_left + 1):
                for b in _blocks_with(pts, deg, None):
                    key = (b.points, b.profile)
                    if max_key is not None and key >= max_key:
                        continue
                    if b.profile in profiles:
                        continue
                    chosen.append(b)
                    profiles.add(b.profile)
                    rec(key, pts_left - pts, deg_left - deg, chosen, profiles)
                    profiles.discard(b.profile)
                    chosen.pop()

    rec(None, max_width, max_degree, [], set())
    return [m for m in out if m.blocks]


def truncate_class(x, height_bound) -> SkylineClass:
    """Kill monomials containing a column of height >= the bound."""
    x = as_class(x)
    if height_bound is INFINITE:
        return x
    return SkylineClass.of(*(m for m in x
                             if all(block_height_ok(b, height_bound) for b in m.blocks)))


# ---------------------------------------------------------------------------
# two-roots and the stable polynomial structure


def is_odd_column(b: GatheredBlock) -> bool:
    """Odd iff some box type occurs an odd number of times."""
    return any(d % 2 for _, d in b.profile)


def two_root(b: GatheredBlock) -> tuple[GatheredBlock, int]:
    """The odd column R and exponent p with R^(2^p) equal to the column."""
    p = min(v2(d) for _, d in b.profile)
    root = GatheredBlock(b.points, tuple((l, d >> p) for l, d in b.profile))
    return root, p


def expand_generator_monomial(powers) -> SkylineClass:
    """Stable cup product of odd-column generators raised to exponents."""
    acc = None
    for root, e in powers:
        base = SkylineClass.of(SkylineMonomial((root,), None))
        for _ in range(e):
            acc = base if acc is None else cup_stable(acc, base)
    if acc is None:
        raise ValueError("empty generator monomial")
    return acc


def expand_nakaoka(expression) -> SkylineClass:
    """Evaluate a polynomial in the odd-column generators as a stable class."""
    acc = ZERO
    for powers in expression:
        acc = acc + expand_generator_monomial(powers)
    return acc


def nakaoka_decompose(x) -> frozenset:
    """Write a stable class as a polynomial in odd single-column generators.

    Iterated reduction along the width filtration: replace the widest
    monomial by the product of the two-roots of its columns and recurse on
    the remainder.  Returns a mod-2 set of generator monomials, each a
    sorted tuple of (odd column, exponent).
    """
    x = as_class(x)
    if any(not m.is_stable for m in x):
        raise ValueError("nakaoka_decompose needs a stable class")
    result = set()
    guard = None
    remaining = x
    while not remaining.is_zero:
        lead = max(remaining, key=lambda m: m.sort_key())
        if guard is not None and lead.sort_key() >= guard:
            raise RuntimeError("width filtration failed to decrease")
        guard = lead.sort_key()
        powers: dict = {}
        for col in lead.blocks:
            root, p = two_root(col)
            powers[root] = powers.get(root, 0) + (1 << p)
        monomial = tuple(sorted(powers.items()))
        result.symmetric_difference_update({monomial})
        remaining = remaining + expand_generator_monomial(monomial)
    return frozenset(result)
