"""Sparse exact linear algebra over the integers and the two-element field.

Integer elimination (Smith normal form) carries unimodular certificates
built from elementary operations and is certified by re-multiplication.
Mod-2 computations pack matrix rows into Python integers, one bit per
column, so elimination is a sequence of big-int XORs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .fncomplex import (
    INTEGERS,
    MOD2,
    INFINITE,
    Composition,
    Cochain,
    delta_unlabeled,
    delta_cochain,
    enumerate_cells,
)


@dataclass
class SparseMatrix:
    """A sparse exact matrix; entries maps (row, col) to a nonzero scalar."""

    ring: str
    nrows: int
    ncols: int
    entries: dict[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (r, c), v in self.entries.items():
            v = int(v) % 2 if self.ring == MOD2 else int(v)
            if v == 0:
                continue
            if not (0 <= r < self.nrows and 0 <= c < self.ncols):
                raise ValueError(f"entry ({r},{c}) outside {self.nrows}x{self.ncols}")
            clean[(r, c)] = v
        self.entries = clean

    def to_dense(self) -> list[list[int]]:
        M = [[0] * self.ncols for _ in range(self.nrows)]
        for (r, c), v in self.entries.items():
            M[r][c] = v
        return M

    def column_rows(self) -> list[int]:
        """Bit-packed rows (mod 2): bit c of row r set iff entry (r, c) odd."""
        rows = [0] * self.nrows
        for (r, c), v in self.entries.items():
            if v % 2:
                rows[r] ^= 1 << c
        return rows

    @property
    def is_zero(self) -> bool:
        return not self.entries


def coboundary_matrix(n: int, degree: int, ring=INTEGERS, m=INFINITE) -> SparseMatrix:
    """Matrix of the coboundary from the given degree to the next.

    Rows are indexed by the lexicographic cell list in degree+1, columns by
    the one in the given degree; column j holds the differential of cell j.
    """
    src = enumerate_cells(n, degree, m)
    dst = enumerate_cells(n, degree + 1, m)
    index = {cell: i for i, cell in enumerate(dst)}
    entries = {}
    for j, cell in enumerate(src):
        for out, coef in delta_unlabeled(cell, ring, m).items():
            entries[(index[out], j)] = coef
    return SparseMatrix(ring, len(dst), len(src), entries)


# ---------------------------------------------------------------------------
# bit-packed mod-2 elimination


def f2_rank(rows: list[int]) -> int:
    pivots = []
    for row in rows:
        for p in pivots:
            row = min(row, row ^ p)
        if row:
            pivots.append(row)
    return len(pivots)


def _f2_reduce(row: int, pivots: dict[int, int]) -> int:
    """Reduce a bit-row against an echelon dict {pivot bit position: row}."""
    while row:
        top = row.bit_length() - 1
        if top not in pivots:
            return row
        row ^= pivots[top]
    return 0


class F2Space:
    """An echelon basis of a mod-2 row space, supporting membership and solve."""

    def __init__(self):
        self.pivots: dict[int, int] = {}
        # companion combination bits for solve(): same keys
        self.combos: dict[int, int] = {}
        self.count = 0

    def add(self, row: int) -> bool:
        """Insert a row (tracking its index as a combination tag); True if new."""
        combo = 1 << self.count
        self.count += 1
        while row:
            top = row.bit_length() - 1
            if top not in self.pivots:
                self.pivots[top] = row
                self.combos[top] = combo
                return True
            row ^= self.pivots[top]
            combo ^= self.combos[top]
        return False

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: int) -> int:
        return _f2_reduce(row, self.pivots)

    def solve(self, target: int) -> int | None:
        """Combination bits expressing target over the inserted rows, or None."""
        combo = 0
        while target:
            top = target.bit_length() - 1
            if top not in self.pivots:
                return None
            target ^= self.pivots[top]
            combo ^= self.combos[top]
        return combo


def f2_nullspace(rows: list[int], ncols: int) -> list[int]:
    """Kernel basis of the linear map sending e_j to rows[j].

    Returns combination bit-vectors x (bit j <-> rows[j]) with xor of the
    selected rows zero.
    """
    space = F2Space()
    kernel = []
    for j, row in enumerate(rows):
        combo = 1 << j
        while row:
            top = row.bit_length() - 1
            if top not in space.pivots:
                space.pivots[top] = row
                space.combos[top] = combo
                break
            row ^= space.pivots[top]
            combo ^= space.combos[top]
        else:
            kernel.append(combo)
    return kernel


# ---------------------------------------------------------------------------
# integer Smith normal form with certificates


@dataclass
class SNFResult:
    """U * M * V == D with U, V unimodular and D diagonal, d1 | d2 | ..."""

    invariants: list[int]
    U: list[list[int]]
    V: list[list[int]]
    Uinv: list[list[int]]
    Vinv: list[list[int]]
    nrows: int
    ncols: int

    def diagonal_matrix(self) -> list[list[int]]:
        D = [[0] * self.ncols for _ in range(self.nrows)]
        for i, d in enumerate(self.invariants):
            D[i][i] = d
        return D


def _mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0]) if B else 0
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        Oi = out[i]
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                for j in range(m):
                    Oi[j] += a * Bt[j]
    return out


def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def det_bareiss(M: list[list[int]]) -> int:
    """Exact determinant by fraction-free elimination."""
    n = len(M)
    if n == 0:
        return 1
    M = [row[:] for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def smith_normal_form(M: SparseMatrix) -> SNFResult:
    """Diagonalize an integer matrix with unimodular row/column certificates.

    Pivots are chosen with smallest absolute value, ties broken by a
    Markowitz fill count, so coefficient growth stays manageable.
    """
    if M.ring != INTEGERS:
        raise ValueError("Smith normal form requires integer coefficients")
    nr, nc = M.nrows, M.ncols
    A = M.to_dense()
    U, Uinv = _identity(nr), _identity(nr)
    V, Vinv = _identity(nc), _identity(nc)

    def row_op(i, j, q):  # row_i -= q * row_j
        A[i] = [a - q * b for a, b in zip(A[i], A[j])]
        U[i] = [a - q * b for a, b in zip(U[i], U[j])]
        for r in range(nr):  # Uinv column op: col_j += q * col_i
            Uinv[r][j] += q * Uinv[r][i]

    def col_op(i, j, q):  # col_i -= q * col_j
        for r in range(nr):
            A[r][i] -= q * A[r][j]
        for r in range(nc):
            V[r][i] -= q * V[r][j]
        Vinv[j] = [a + q * b for a, b in zip(Vinv[j], Vinv[i])]

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]
        for r in range(nr):
            Uinv[r][i], Uinv[r][j] = Uinv[r][j], Uinv[r][i]

    def col_swap(i, j):
        for r in range(nr):
            A[r][i], A[r][j] = A[r][j], A[r][i]
        for r in range(nc):
            V[r][i], V[r][j] = V[r][j], V[r][i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def row_negate(i):
        A[i] = [-a for a in A[i]]
        U[i] = [-a for a in U[i]]
        for r in range(nr):
            Uinv[r][i] = -Uinv[r][i]

    t = 0
    while True:
        # pivot search in the trailing submatrix
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                a = A[i][j]
                if a == 0:
                    continue
                fill = (sum(1 for x in A[i][t:] if x) - 1) * (
                    sum(1 for r in range(t, nr) if A[r][j]) - 1)
                key = (abs(a), fill, i, j)
                if best is None or key < best[0]:
                    best = (key, i, j)
        if best is None:
            break
        _, pi, pj = best
        row_swap(t, pi)
        col_swap(t, pj)
        while True:
            # clear the pivot column
            changed = False
            for i in range(t + 1, nr):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    row_op(i, t, q)
                    if A[i][t]:
                        row_swap(t, i)
                    changed = True
            if any(A[i][t] for i in range(t + 1, nr)):
                continue
            # clear the pivot row
            for j in range(t + 1, nc):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    col_op(j, t, q)
                    if A[t][j]:
                        col_swap(t, j)
                    changed = True
            if any(A[t][j] for j in range(t + 1, nc)):
                continue
            if not changed:
                break
            if not any(A[i][t] for i in range(t + 1, nr)):
                break
        # enforce divisibility of the remaining submatrix by the pivot
        offender = None
        for i in range(t + 1, nr):
            for j in range(t + 1, nc):
                if A[i][j] % A[t][t]:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            row_op(t, offender, -1)  # add offending row to the pivot row
            continue
        if A[t][t] < 0:
            row_negate(t)
        t += 1

    invariants = [A[i][i] for i in range(min(nr, nc)) if A[i][i]]
    return SNFResult(invariants, U, V, Uinv, Vinv, nr, nc)


def snf_certified(M: SparseMatrix) -> SNFResult:
    """Smith normal form, verified by re-multiplication before returning."""
    res = smith_normal_form(M)
    prod = _mat_mul(_mat_mul(res.U, M.to_dense()), res.V)
    if prod != res.diagonal_matrix():
        raise AssertionError("SNF certificate failed re-multiplication")
    return res


def solve_integer(M: SparseMatrix, b: list[int]) -> list[int] | None:
    """An integer solution x of M x = b, or None."""
    res = smith_normal_form(M)
    Ub = [sum(res.U[i][r] * b[r] for r in range(M.nrows)) for i in range(M.nrows)]
    y = [0] * M.ncols
    for i in range(M.nrows):
        d = res.invariants[i] if i < len(res.invariants) else 0
        if d == 0:
            if Ub[i] != 0:
                return None
        else:
            if Ub[i] % d:
                return None
            if i < M.ncols:
                y[i] = Ub[i] // d
    return [sum(res.V[r][i] * y[i] for i in range(M.ncols)) for r in range(M.ncols)]


def integer_kernel(M: SparseMatrix) -> list[list[int]]:
    """A basis of the integer kernel (columns of V past the rank)."""
    res = smith_normal_form(M)
    r = len(res.invariants)
    return [[res.V[row][j] for row in range(M.ncols)] for j in range(r, M.ncols)]


# ---------------------------------------------------------------------------
# cohomology


class NotACocycleError(ValueError):
    pass


@dataclass
class CohomologyGroup:
    """One cohomology group with representative cocycles.

    Mod 2 the dimension is ``free_rank`` and ``torsion`` is empty; over the
    integers the group is Z^free_rank + sum Z/t for t in torsion.
    """

    ring: str
    n: int
    degree: int
    free_rank: int
    torsion: list[int]
    representatives: list[Cochain]

    @property
    def dimension(self) -> int:
        if self.ring != MOD2:
            raise ValueError("dimension is the mod-2 notion; use free_rank/torsion")
        return self.free_rank

    def describe(self) -> str:
        if self.ring == MOD2:
            return f"F2^{self.free_rank}"
        parts = ["Z"] * self.free_rank + [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def _cochain_bits(c: Cochain, index: dict) -> int:
    bits = 0
    for cell, coef in c.items():
        if coef % 2:
            if cell not in index:
                raise ValueError(f"cell {cell} outside the expected basis")
            bits |= 1 << index[cell]
    return bits


def _bits_cochain(bits: int, cells, n: int) -> Cochain:
    terms = []
    j = 0
    while bits:
        if bits & 1:
            terms.append((cells[j], 1))
        bits >>= 1
        j += 1
    return Cochain(MOD2, n, terms)


class CohomologyContext:
    """Cached bases and reduction data for one (n, degree, ring, m)."""

    def __init__(self, n, degree, ring=MOD2, m=INFINITE):
        self.n = n
        self.degree = degree
        self.ring = ring
        self.m = m
        self.cells = enumerate_cells(n, degree, m)
        self.index = {c: i for i, c in enumerate(self.cells)}
        self.prev_cells = enumerate_cells(n, degree - 1, m) if degree > 0 else []
        self._group = None

    # -- mod 2 route --------------------------------------------------------

    def _image_rows(self):
        rows = []
        for cell in self.prev_cells:
            d = delta_unlabeled(cell, MOD2, self.m)
            rows.append(_cochain_bits(d, self.index))
        return rows

    def _kernel_rows(self):
        kernel = []
        next_cells = enumerate_cells(self.n, self.degree + 1, self.m)
        next_index = {c: i for i, c in enumerate(next_cells)}
        rows = [_cochain_bits(delta_unlabeled(c, MOD2, self.m), next_index)
                for c in self.cells]
        for combo in f2_nullspace(rows, len(next_cells)):
            kernel.append(combo)
        return kernel

    def _compute_mod2(self):
        image = F2Space()
        for row in self._image_rows():
            image.add(row)
        reps = []
        quotient = F2Space()
        for row in image.pivots.values():
            quotient.add(row)
        for combo in self._kernel_rows():
            reduced = quotient.reduce(combo)
            if reduced:
                quotient.add(reduced)
                reps.append(reduced)
        # echelon-reduce representatives among themselves for canonical output
        reps.sort(reverse=True)
        cleaned = []
        for r in reps:
            for c in cleaned:
                r = min(r, r ^ c)
            cleaned.append(r)
        cleaned = [r for r in cleaned if r]
        cleaned.sort()
        rep_cochains = [_bits_cochain(r, self.cells, self.n) for r in cleaned]
        self._group = CohomologyGroup(MOD2, self.n, self.degree,
                                      len(rep_cochains), [], rep_cochains)
        self._image_space = image
        self._rep_bits = cleaned

    # -- integral route -----------------------------------------------------

    def _compute_integral(self):
        n, deg, m = self.n, self.degree, self.m
        B = coboundary_matrix(n, deg, INTEGERS, m)
        kernel = integer_kernel(B)  # vectors over self.cells
        K = SparseMatrix(INTEGERS, len(self.cells), len(kernel),
                         {(i, j): kernel[j][i] for j in range(len(kernel))
                          for i in range(len(self.cells)) if kernel[j][i]})
        if deg > 0:
            A = coboundary_matrix(n, deg - 1, INTEGERS, m)
        else:
            A = SparseMatrix(INTEGERS, len(self.cells), 0, {})
        # express image columns in the kernel basis
        coords = []
        dense_A = A.to_dense()
        for j in range(A.ncols):
            col = [dense_A[i][j] for i in range(A.nrows)]
            x = solve_integer(K, col)
            if x is None:
                raise AssertionError("image does not lie in the kernel")
            coords.append(x)
        C = SparseMatrix(INTEGERS, len(kernel), len(coords),
                         {(i, j): coords[j][i] for j in range(len(coords))
                          for i in range(len(kernel)) if coords[j][i]})
        res = smith_normal_form(C)
        free, torsion, reps = 0, [], []
        # generators of coker(C) are the kernel vectors recombined by Uinv
        for i in range(len(kernel)):
            d = res.invariants[i] if i < len(res.invariants) else 0
            if d == 1:
                continue
            gen = [sum(res.Uinv[r][i] * kernel[r][c]
                       for r in range(len(kernel)))
                   for c in range(len(self.cells))]
            coch = Cochain(INTEGERS, n,
                           [(self.cells[c], gen[c]) for c in range(len(self.cells))])
            if d == 0:
                free += 1
                reps.append(coch)
            else:
                torsion.append(d)
                reps.append(coch)
        order = sorted(range(len(torsion)), key=lambda t: torsion[t])
        self._group = CohomologyGroup(INTEGERS, n, deg, free,
                                      [torsion[i] for i in order], reps)

    def group(self) -> CohomologyGroup:
        if self._group is None:
            if self.ring == MOD2:
                self._compute_mod2()
            else:
                self._compute_integral()
        return self._group

    # -- reduction ----------------------------------------------------------

    def reduce(self, c: Cochain) -> list[int]:
        """Coordinates of a cocycle in the cohomology basis.

        Mod 2 only; raises on component or degree mismatch and on
        non-cocycles.  Subtracting the returned combination of basis
        representatives leaves a coboundary.
        """
        if self.ring != MOD2:
            return self._reduce_integral(c)
        if c.n != self.n:
            raise ValueError(f"component mismatch: {c.n} != {self.n}")
        if not c.is_zero and c.degrees() != {self.degree}:
            raise ValueError(f"degree mismatch: {c.degrees()} != {self.degree}")
        if not delta_cochain(c.mod2(), self.m).is_zero:
            raise NotACocycleError(f"{c} is not a cocycle")
        self.group()
        bits = _cochain_bits(c, self.index)
        space = F2Space()
        for rep in self._rep_bits:
            space.add(rep)
        for row in self._image_space.pivots.values():
            space.add(row)
        combo = space.solve(bits)
        if combo is None:
            raise AssertionError("cocycle not spanned by basis and coboundaries")
        return [(combo >> i) & 1 for i in range(len(self._rep_bits))]

    def _reduce_integral(self, c: Cochain) -> list[int]:
        if c.n != self.n:
            raise ValueError(f"component mismatch: {c.n} != {self.n}")
        if not c.is_zero and c.degrees() != {self.degree}:
            raise ValueError(f"degree mismatch: {c.degrees()} != {self.degree}")
        if not delta_cochain(c, self.m).is_zero:
            raise NotACocycleError(f"{c} is not a cocycle")
        group = self.group()
        reps = group.representatives
        ncells = len(self.cells)
        if self.degree > 0:
            A = coboundary_matrix(self.n, self.degree - 1, INTEGERS, self.m)
        else:
            A = SparseMatrix(INTEGERS, ncells, 0, {})
        ncols = len(reps) + A.ncols
        entries = {}
        for j, rep in enumerate(reps):
            for cell, coef in rep.items():
                entries[(self.index[cell], j)] = coef
        for (r, cc), v in A.entries.items():
            entries[(r, len(reps) + cc)] = v
        Mfull = SparseMatrix(INTEGERS, ncells, ncols, entries)
        b = [0] * ncells
        for cell, coef in c.items():
            b[self.index[cell]] = coef
        x = solve_integer(Mfull, b)
        if x is None:
            raise AssertionError("cocycle not spanned by basis and coboundaries")
        coords = x[:len(reps)]
        # normalize torsion coordinates
        k = group.free_rank
        for i, t in enumerate(group.torsion):
            coords[k + i] %= t
        return coords


_context_cache: dict = {}


def cohomology_context(n, degree, ring=MOD2, m=INFINITE) -> CohomologyContext:
    key = (n, degree, ring, m)
    if key not in _context_cache:
        _context_cache[key] = CohomologyContext(n, degree, ring, m)
    return _context_cache[key]


def cohomology(n, degree, ring=MOD2, m=INFINITE) -> CohomologyGroup:
    """Cohomology of the component-n complex in one degree."""
    return cohomology_context(n, degree, ring, m).group()


def reduce_cocycle(c: Cochain, n=None, degree=None, ring=None, m=INFINITE) -> list[int]:
    """Express a cocycle in the canonical cohomology basis modulo coboundaries."""
    n = c.n if n is None else n
    ring = c.ring if ring is None else ring
    if degree is None:
        degs = c.degrees()
        if len(degs) != 1:
            raise ValueError("degree needed for non-homogeneous input")
        degree = degs.pop()
    return cohomology_context(n, degree, ring, m).reduce(c)


def is_coboundary(c: Cochain, m=INFINITE) -> bool:
    """Whether a mod-2 cochain is a coboundary (zero cochains trivially are)."""
    if c.is_zero:
        return True
    if c.ring != MOD2:
        raise ValueError("coboundary solving implemented mod 2")
    degs = c.degrees()
    if len(degs) != 1:
        raise ValueError("need a homogeneous cochain")
    deg = degs.pop()
    if deg == 0:
        return False
    ctx = cohomology_context(c.n, deg, MOD2, m)
    target = _cochain_bits(c, ctx.index)
    space = F2Space()
    for row in ctx._image_rows():
        space.add(row)
    return space.reduce(target) == 0
