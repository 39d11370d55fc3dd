"""Exact integer linear algebra.

Matrices over the integers with Smith normal form, kernels, cokernels,
and presentations of finitely generated abelian groups together with
homomorphisms between them.  Everything is exact: entries are Python
integers, so there is no overflow at any size.
"""
from __future__ import annotations

import functools

from .errors import NotWellDefined


class IntMatrix:
    """Immutable integer matrix, row-major."""

    __slots__ = ("rows", "cols", "_r")

    def __init__(self, rows, cols, entries):
        entries = [int(x) for x in entries]
        if len(entries) != rows * cols:
            raise ValueError("entry count does not match shape")
        self.rows = rows
        self.cols = cols
        self._r = tuple(tuple(entries[i * cols:(i + 1) * cols]) for i in range(rows))

    @classmethod
    def from_rows(cls, rows_of_entries):
        rows = list(rows_of_entries)
        ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
        flat = [x for r in rows for x in r]
        return cls(len(rows), ncols, flat)

    @classmethod
    def zeros(cls, rows, cols):
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, n):
        return cls(n, n, [int(i == j) for i in range(n) for j in range(n)])

    @classmethod
    def diagonal(cls, diag, rows=None, cols=None):
        diag = list(diag)
        rows = len(diag) if rows is None else rows
        cols = len(diag) if cols is None else cols
        m = [[0] * cols for _ in range(rows)]
        for i, d in enumerate(diag):
            if i < rows and i < cols:
                m[i][i] = d
        return cls.from_rows(m)

    @classmethod
    def column(cls, entries):
        return cls(len(list(entries)), 1, list(entries))

    def entry(self, i, j):
        return self._r[i][j]

    def row(self, i):
        return list(self._r[i])

    def col(self, j):
        return [r[j] for r in self._r]

    def to_rows(self):
        return [list(r) for r in self._r]

    def transpose(self):
        return IntMatrix(self.cols, self.rows,
                         [self._r[i][j] for j in range(self.cols)
                          for i in range(self.rows)])

    def hstack(self, other):
        if self.rows != other.rows:
            raise ValueError("row mismatch")
        return IntMatrix.from_rows([list(a) + list(b) for a, b in zip(self._r, other._r)]) \
            if self.rows else IntMatrix.zeros(0, self.cols + other.cols)

    def vstack(self, other):
        if self.cols != other.cols:
            raise ValueError("col mismatch")
        return IntMatrix(self.rows + other.rows, self.cols,
                         [x for r in self._r for x in r] + [x for r in other._r for x in r])

    def submatrix(self, row_idx, col_idx):
        return IntMatrix.from_rows([[self._r[i][j] for j in col_idx] for i in row_idx]) \
            if row_idx else IntMatrix.zeros(0, len(col_idx))

    def select_columns(self, col_idx):
        return self.submatrix(range(self.rows), list(col_idx))

    def __mul__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError("shape mismatch in product")
        p = other.cols
        brows = other._r
        out = []
        for arow in self._r:
            acc = [0] * p
            for x, br in zip(arow, brows):
                if x == 0:
                    continue
                if x == 1:
                    acc = [a + b for a, b in zip(acc, br)]
                elif x == -1:
                    acc = [a - b for a, b in zip(acc, br)]
                else:
                    acc = [a + x * b for a, b in zip(acc, br)]
            out.extend(acc)
        return IntMatrix(self.rows, p, out)

    def apply(self, vec):
        """Matrix-vector product as a plain list."""
        vec = list(vec)
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        out = []
        for r in self._r:
            s = 0
            for x, v in zip(r, vec):
                if x:
                    s += x * v
            out.append(s)
        return out

    def scale(self, c):
        return IntMatrix(self.rows, self.cols, [c * x for r in self._r for x in r])

    def __add__(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")
        return IntMatrix(self.rows, self.cols,
                         [a + b for ra, rb in zip(self._r, other._r) for a, b in zip(ra, rb)])

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self._r == other._r \
            and self.rows == other.rows and self.cols == other.cols

    def __hash__(self):
        return hash((self.rows, self.cols, self._r))

    def is_zero(self):
        return all(x == 0 for r in self._r for x in r)

    def __repr__(self):
        return f"IntMatrix({self.rows}x{self.cols})"


class SnfResult:
    """Smith normal form U*A*V = D with unimodular U, V."""

    __slots__ = ("U", "D", "V", "invariant_factors", "Uinv", "Vinv")

    def __init__(self, U, D, V, invariant_factors, Uinv, Vinv):
        self.U = U
        self.D = D
        self.V = V
        self.invariant_factors = list(invariant_factors)
        self.Uinv = Uinv
        self.Vinv = Vinv

    @property
    def rank(self):
        return len(self.invariant_factors)


def _row_op(a, u, ui, i, j, q):
    """row_i -= q * row_j on a and u; inverse op tracked on columns of ui."""
    ai, aj = a[i], a[j]
    for k in range(len(ai)):
        ai[k] -= q * aj[k]
    uik, ujk = u[i], u[j]
    for k in range(len(uik)):
        uik[k] -= q * ujk[k]
    for row in ui:
        row[j] += q * row[i]


def _col_op(a, v, vi, i, j, q):
    """col_i -= q * col_j on a and v; inverse tracked on rows of vi."""
    for row in a:
        row[i] -= q * row[j]
    for row in v:
        row[i] -= q * row[j]
    vij, vii = vi[j], vi[i]
    for k in range(len(vij)):
        vij[k] += q * vii[k]


@functools.lru_cache(maxsize=128)
def snf(A: IntMatrix) -> SnfResult:
    """Smith normal form with deterministic pivoting.

    Pivot: smallest nonzero absolute value in the working submatrix, ties
    broken by lexicographically smallest (row, col).  Results are memoized;
    the same relation and cocycle matrices are decomposed many times over.
    """
    m, n = A.rows, A.cols
    a = A.to_rows()
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    ui = [[int(i == j) for j in range(m)] for i in range(m)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]
    vi = [[int(i == j) for j in range(n)] for i in range(n)]
    t = 0
    while t < m and t < n:
        best = None
        for i in range(t, m):
            ai = a[i]
            for j in range(t, n):
                x = ai[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        if pi != t:
            a[t], a[pi] = a[pi], a[t]
            u[t], u[pi] = u[pi], u[t]
            for row in ui:
                row[t], row[pi] = row[pi], row[t]
        if pj != t:
            for row in a:
                row[t], row[pj] = row[pj], row[t]
            for row in v:
                row[t], row[pj] = row[pj], row[t]
            vi[t], vi[pj] = vi[pj], vi[t]
        if a[t][t] < 0:
            for k in range(n):
                a[t][k] = -a[t][k]
            for k in range(m):
                u[t][k] = -u[t][k]
            for row in ui:
                row[t] = -row[t]
        d = a[t][t]
        dirty = False
        for i in range(t + 1, m):
            if a[i][t]:
                q = a[i][t] // d
                if q:
                    _row_op(a, u, ui, i, t, q)
                if a[i][t]:
                    dirty = True
        for j in range(t + 1, n):
            if a[t][j]:
                q = a[t][j] // d
                if q:
                    _col_op(a, v, vi, j, t, q)
                if a[t][j]:
                    dirty = True
        if dirty:
            continue
        # enforce divisibility of the remaining block by the pivot
        offender = None
        for i in range(t + 1, m):
            ai = a[i]
            for j in range(t + 1, n):
                if ai[j] % d:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            _row_op(a, u, ui, t, offender, -1)  # row_t += row_offender
            continue
        t += 1
    diag = [a[i][i] for i in range(min(m, n))]
    inv = [d for d in diag if d != 0]
    flat = lambda rows, c: [x for r in rows for x in r] if rows else []
    return SnfResult(IntMatrix(m, m, flat(u, m)), IntMatrix(m, n, flat(a, n)),
                     IntMatrix(n, n, flat(v, n)), inv,
                     IntMatrix(m, m, flat(ui, m)), IntMatrix(n, n, flat(vi, n)))


def rank(A: IntMatrix) -> int:
    return snf(A).rank


def kernel_basis(A: IntMatrix) -> IntMatrix:
    """Basis of the saturated integer kernel lattice, as columns."""
    s = snf(A)
    r = s.rank
    return s.V.select_columns(range(r, A.cols))


def lattice_basis(A: IntMatrix) -> IntMatrix:
    """Basis (columns) of the column lattice of A itself."""
    s = snf(A)
    cols = []
    for i in range(s.rank):
        d = s.D.entry(i, i)
        cols.append([d * x for x in s.Uinv.col(i)])
    return IntMatrix.from_rows([list(r) for r in zip(*cols)]) if cols \
        else IntMatrix.zeros(A.rows, 0)


def saturation_basis(A: IntMatrix) -> IntMatrix:
    """Basis (columns) of the saturation of the column lattice of A."""
    s = snf(A)
    return s.Uinv.select_columns(range(s.rank))


def solve(A: IntMatrix, b) -> list | None:
    """One integer solution x of A x = b, or None."""
    s = snf(A)
    y = s.U.apply(list(b))
    x = [0] * A.cols
    for i in range(A.rows):
        d = s.D.entry(i, i) if i < A.cols else 0
        if d == 0:
            if i >= A.cols or y[i] != 0:
                if y[i] != 0:
                    return None
        else:
            if y[i] % d:
                return None
            x[i] = y[i] // d
    for i in range(A.cols):
        if i >= A.rows and x[i] != 0:
            return None
    return s.V.apply(x)


def solve_matrix(A: IntMatrix, B: IntMatrix) -> IntMatrix | None:
    """X with A X = B, columnwise; None if any column is unsolvable."""
    cols = []
    s = snf(A)
    for j in range(B.cols):
        y = s.U.apply(B.col(j))
        x = [0] * A.cols
        ok = True
        for i in range(A.rows):
            d = s.D.entry(i, i) if i < A.cols else 0
            if d == 0:
                if y[i] != 0:
                    ok = False
                    break
            else:
                if y[i] % d:
                    ok = False
                    break
                x[i] = y[i] // d
        if not ok:
            return None
        cols.append(s.V.apply(x))
    return IntMatrix(A.cols, len(cols),
                     [c[i] for i in range(A.cols) for c in cols])


def lattice_contains(A: IntMatrix, vec) -> bool:
    """Is vec in the column lattice of A?"""
    return solve(A, vec) is not None


def lattice_subset(A: IntMatrix, B: IntMatrix) -> bool:
    """Is every column of A in the column lattice of B?"""
    return solve_matrix(B, A) is not None


def lattice_eq(A: IntMatrix, B: IntMatrix) -> bool:
    return lattice_subset(A, B) and lattice_subset(B, A)


def preimage_lattice(M: IntMatrix, L: IntMatrix) -> IntMatrix:
    """Generators (columns) of {x : M x in column-lattice(L)}."""
    if L.cols == 0:
        return kernel_basis(M)
    k = kernel_basis(M.hstack(L))
    return k.submatrix(range(M.cols), range(k.cols))


class FgAbGroup:
    """Finitely generated abelian group presented as Z^ngens / col(rel).

    Canonical coordinates are y = U x where U comes from the SNF of the
    relation matrix; coordinate i carries invariant d_i (d_i = 0 for a
    free coordinate).  `ambient_lift`, when present, sends presentation
    generators to vectors of an ambient cochain space.
    """

    __slots__ = ("ngens", "rel", "invariants", "U", "Uinv",
                 "free_rank", "torsion", "ambient_lift", "ambient_cob")

    def __init__(self, ngens, rel=None, ambient_lift=None, ambient_cob=None):
        self.ngens = ngens
        self.rel = rel if rel is not None else IntMatrix.zeros(ngens, 0)
        if self.rel.rows != ngens:
            raise ValueError("relation matrix has wrong height")
        s = snf(self.rel)
        inv = []
        for i in range(ngens):
            d = s.D.entry(i, i) if i < min(self.rel.rows, self.rel.cols) else 0
            inv.append(abs(d))
        self.invariants = inv
        self.U = s.U
        self.Uinv = s.Uinv
        self.free_rank = sum(1 for d in inv if d == 0)
        self.torsion = tuple(sorted(d for d in inv if d > 1))
        self.ambient_lift = ambient_lift
        # when the lift generators are only a generating set modulo a
        # coboundary lattice, that lattice is kept so elements can be
        # expressed as lift-combination + coboundary
        self.ambient_cob = ambient_cob

    @classmethod
    def trivial(cls):
        return cls(0)

    @classmethod
    def free(cls, n):
        return cls(n)

    def is_trivial(self):
        return self.free_rank == 0 and not self.torsion

    def signature(self):
        return (self.free_rank, self.torsion)

    def element_is_zero(self, x):
        return lattice_contains(self.rel, list(x))

    def reduce_element(self, x):
        """Canonical representative tuple of the class of x."""
        y = self.U.apply(list(x))
        out = []
        for yi, d in zip(y, self.invariants):
            if d == 1:
                out.append(0)
            elif d > 1:
                out.append(yi % d)
            else:
                out.append(yi)
        return tuple(out)

    def __repr__(self):
        return f"FgAbGroup(free_rank={self.free_rank}, torsion={list(self.torsion)})"


class GroupHom:
    """Homomorphism between presented groups, given on presentation generators."""

    __slots__ = ("domain", "codomain", "matrix")

    def __init__(self, domain: FgAbGroup, codomain: FgAbGroup, matrix: IntMatrix,
                 check=True):
        if matrix.rows != codomain.ngens or matrix.cols != domain.ngens:
            raise ValueError("hom matrix shape mismatch")
        self.domain = domain
        self.codomain = codomain
        self.matrix = matrix
        if check and domain.rel.cols:
            image_of_rel = matrix * domain.rel
            if solve_matrix(codomain.rel, image_of_rel) is None:
                raise NotWellDefined(
                    "matrix does not map relations into relations",
                    witness=image_of_rel)

    @classmethod
    def zero(cls, domain, codomain):
        return cls(domain, codomain, IntMatrix.zeros(codomain.ngens, domain.ngens),
                   check=False)

    @classmethod
    def identity(cls, group):
        return cls(group, group, IntMatrix.identity(group.ngens), check=False)

    def compose(self, other: "GroupHom") -> "GroupHom":
        """self after other."""
        if other.codomain is not self.domain and \
                other.codomain.signature() != self.domain.signature():
            raise ValueError("composition domain mismatch")
        return GroupHom(other.domain, self.codomain, self.matrix * other.matrix,
                        check=False)

    def equals(self, other: "GroupHom") -> bool:
        diff = self.matrix - other.matrix
        return solve_matrix(self.codomain.rel, diff) is not None

    def is_zero(self) -> bool:
        return solve_matrix(self.codomain.rel, self.matrix) is not None

    def kernel_gens(self) -> IntMatrix:
        """Generators (columns, in domain presentation coords) of the kernel."""
        pre = preimage_lattice(self.matrix, self.codomain.rel)
        return pre.hstack(self.domain.rel)

    def is_injective(self) -> bool:
        return lattice_subset(self.kernel_gens(), self.domain.rel)

    def is_surjective(self) -> bool:
        stacked = self.matrix.hstack(self.codomain.rel)
        s = snf(stacked)
        return len([d for d in s.invariant_factors if d != 0]) == self.codomain.ngens \
            and all(abs(d) == 1 for d in s.invariant_factors)


def induced_hom(f_matrix: IntMatrix, dom: FgAbGroup, cod: FgAbGroup) -> GroupHom:
    """Construct and verify the induced homomorphism on presentations."""
    return GroupHom(dom, cod, f_matrix, check=True)


def cokernel(A: IntMatrix) -> FgAbGroup:
    """Z^rows / column-lattice(A)."""
    return FgAbGroup(A.rows, A)
