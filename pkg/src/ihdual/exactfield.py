"""Exact field arithmetic and sparse linear algebra.

Two coefficient fields are supported: the rationals (backed by
:class:`fractions.Fraction`) and prime fields ``GF(p)``.  Vectors are sparse
dicts ``{index: value}`` with no stored zeros; matrices are
:class:`SparseMatrix` objects stored by column.
"""

from __future__ import annotations

import heapq
from collections import defaultdict
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

Vector = Dict[int, object]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


class GFElement:
    """A residue modulo a prime, always stored in ``[0, p)``."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, GFElement):
            if other.p != self.p:
                raise ValueError("mixing residues of different primes")
            return other.value
        if isinstance(other, int):
            return other % self.p
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GFElement(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GFElement(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GFElement(o - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GFElement(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return GFElement(-self.value, self.p)

    def __pos__(self):
        return self

    def inverse(self) -> "GFElement":
        if self.value == 0:
            raise ZeroDivisionError("zero has no inverse in GF(%d)" % self.p)
        return GFElement(pow(self.value, self.p - 2, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * GFElement(o, self.p).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GFElement(o, self.p) * self.inverse()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.value == o

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return "GF%d(%d)" % (self.p, self.value)

    def __str__(self):
        return str(self.value)


class Field:
    """Base class for the coefficient fields."""

    name = "field"
    characteristic = 0

    def __call__(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def sign(self, exponent: int):
        """``(-1) ** exponent`` as a field element."""
        return self(-1 if exponent % 2 else 1)

    def format(self, x) -> str:
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    def random(self, rng, bound: int = 5):
        """A uniformly chosen small element (possibly zero)."""
        return self(rng.randint(-bound, bound))

    def __eq__(self, other):
        return type(self) is type(other) and self.characteristic == other.characteristic

    def __hash__(self):
        return hash((type(self).__name__, self.characteristic))

    def __repr__(self):
        return self.name


class Rationals(Field):
    name = "Q"
    characteristic = 0

    def __call__(self, x):
        if isinstance(x, GFElement):
            raise TypeError("cannot coerce a residue into Q")
        return Fraction(x)

    def format(self, x) -> str:
        x = Fraction(x)
        return "%d/%d" % (x.numerator, x.denominator)

    def parse(self, text: str):
        return Fraction(text)


class PrimeField(Field):
    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError("%d is not prime" % p)
        self.characteristic = p
        self.name = "GF(%d)" % p

    def __call__(self, x):
        if isinstance(x, GFElement):
            if x.p != self.characteristic:
                raise ValueError("residue from a different prime field")
            return x
        if isinstance(x, Fraction):
            return GFElement(x.numerator, self.characteristic) / x.denominator
        return GFElement(int(x), self.characteristic)

    def format(self, x) -> str:
        return "%d/1" % int(self(x))

    def parse(self, text: str):
        return self(Fraction(text))


QQ = Rationals()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def parse_field(spec: str) -> Field:
    """Parse a field selector: ``q`` for the rationals or ``p:PRIME``."""
    spec = spec.strip().lower()
    if spec in ("q", "qq", "rationals"):
        return QQ
    if spec.startswith("p:"):
        return GF(int(spec[2:]))
    if spec.startswith("gf(") and spec.endswith(")"):
        return GF(int(spec[3:-1]))
    raise ValueError("unknown field selector %r (use 'q' or 'p:PRIME')" % spec)


# --------------------------------------------------------------------------
# sparse vectors


def vec_add(u: Mapping, v: Mapping, scale=1) -> dict:
    """Return ``u + scale * v`` without stored zeros."""
    out = dict(u)
    for k, x in v.items():
        y = out.get(k, 0) + scale * x
        if y:
            out[k] = y
        else:
            out.pop(k, None)
    return out


def vec_scale(v: Mapping, c) -> dict:
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}


def vec_dot(u: Mapping, v: Mapping):
    if len(u) > len(v):
        u, v = v, u
    total = 0
    for k, x in u.items():
        y = v.get(k)
        if y is not None:
            total = total + x * y
    return total


# --------------------------------------------------------------------------
# sparse matrices


class SparseMatrix:
    """Immutable sparse matrix over a field, stored as columns."""

    __slots__ = ("nrows", "ncols", "field", "_cols")

    def __init__(self, nrows: int, ncols: int, field: Field, cols=None):
        self.nrows = nrows
        self.ncols = ncols
        self.field = field
        store = {}
        for c, col in (cols or {}).items():
            if not 0 <= c < ncols:
                raise IndexError("column %d out of range" % c)
            clean = {}
            for r, x in col.items():
                if not 0 <= r < nrows:
                    raise IndexError("row %d out of range" % r)
                if x:
                    clean[r] = field(x)
            if clean:
                store[c] = clean
        self._cols = store

    @classmethod
    def from_entries(cls, nrows, ncols, field, entries: Mapping[Tuple[int, int], object]):
        cols: dict = defaultdict(dict)
        for (r, c), x in entries.items():
            cols[c][r] = x
        return cls(nrows, ncols, field, cols)

    @classmethod
    def from_columns(cls, nrows, field, columns: Sequence[Mapping]):
        return cls(nrows, len(columns), field, {c: col for c, col in enumerate(columns)})

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence], field: Field):
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        entries = {(r, c): x for r, row in enumerate(rows) for c, x in enumerate(row) if x}
        return cls.from_entries(nrows, ncols, field, entries)

    @classmethod
    def identity(cls, n, field):
        return cls(n, n, field, {k: {k: 1} for k in range(n)})

    @classmethod
    def zeros(cls, nrows, ncols, field):
        return cls(nrows, ncols, field)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def column(self, c: int) -> dict:
        return dict(self._cols.get(c, {}))

    def columns(self) -> List[dict]:
        return [self.column(c) for c in range(self.ncols)]

    def entries(self):
        for c in sorted(self._cols):
            col = self._cols[c]
            for r in sorted(col):
                yield (r, c), col[r]

    @property
    def nnz(self) -> int:
        return sum(len(col) for col in self._cols.values())

    def __getitem__(self, rc):
        r, c = rc
        return self._cols.get(c, {}).get(r, self.field.zero)

    def rows(self) -> List[dict]:
        out = [dict() for _ in range(self.nrows)]
        for c, col in self._cols.items():
            for r, x in col.items():
                out[r][c] = x
        return out

    @property
    def T(self) -> "SparseMatrix":
        return SparseMatrix(self.ncols, self.nrows, self.field, dict(enumerate(self.rows())))

    def apply(self, v: Mapping) -> dict:
        """Matrix-vector product with a sparse vector."""
        out: dict = {}
        for c, x in v.items():
            if not x:
                continue
            for r, y in self._cols.get(c, {}).items():
                z = out.get(r, 0) + y * x
                if z:
                    out[r] = z
                else:
                    out.pop(r, None)
        return out

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch %s @ %s" % (self.shape, other.shape))
        cols = {c: self.apply(col) for c, col in other._cols.items()}
        return SparseMatrix(self.nrows, other.ncols, self.field, cols)

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        cols = {c: dict(col) for c, col in self._cols.items()}
        for c, col in other._cols.items():
            cols[c] = vec_add(cols.get(c, {}), col)
        return SparseMatrix(self.nrows, self.ncols, self.field, cols)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "SparseMatrix":
        c = self.field(c)
        return SparseMatrix(self.nrows, self.ncols, self.field,
                            {k: vec_scale(col, c) for k, col in self._cols.items()})

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self._cols == other._cols

    def is_zero(self) -> bool:
        return not self._cols

    def to_dense(self) -> List[list]:
        out = [[self.field.zero] * self.ncols for _ in range(self.nrows)]
        for c, col in self._cols.items():
            for r, x in col.items():
                out[r][c] = x
        return out

    def select_columns(self, cols: Sequence[int]) -> "SparseMatrix":
        return SparseMatrix(self.nrows, len(cols), self.field,
                            {k: self._cols[c] for k, c in enumerate(cols) if c in self._cols})

    def hstack(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.nrows != other.nrows:
            raise ValueError("row mismatch")
        cols = dict(self._cols)
        cols.update({self.ncols + c: col for c, col in other._cols.items()})
        return SparseMatrix(self.nrows, self.ncols + other.ncols, self.field, cols)

    def vstack(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.ncols:
            raise ValueError("column mismatch")
        cols = {}
        for c in set(self._cols) | set(other._cols):
            col = dict(self._cols.get(c, {}))
            col.update({self.nrows + r: x for r, x in other._cols.get(c, {}).items()})
            cols[c] = col
        return SparseMatrix(self.nrows + other.nrows, self.ncols, self.field, cols)

    def __repr__(self):
        return "SparseMatrix(%dx%d, nnz=%d, %s)" % (self.nrows, self.ncols, self.nnz, self.field)


# --------------------------------------------------------------------------
# elimination


class _Reduction:
    """Gauss-Jordan reduction of a row set with Markowitz pivoting.

    Columns at index >= ``protect`` may never be chosen as pivots; they carry
    right-hand sides through the elimination.
    """

    def __init__(self, rows: List[dict], ncols: int, protect: Optional[int] = None):
        self.rows = rows
        self.ncols = ncols
        self.protect = ncols if protect is None else protect
        self.pivot_row: Dict[int, int] = {}
        self._run()

    def _run(self):
        rows = self.rows
        protect = self.protect
        col_rows: Dict[int, set] = defaultdict(set)
        for r, row in enumerate(rows):
            for c in row:
                col_rows[c].add(r)

        def eligible(row):
            return sum(1 for c in row if c < protect)

        heap = [(eligible(row), r) for r, row in enumerate(rows)]
        heapq.heapify(heap)
        used = set()
        while heap:
            size, r = heapq.heappop(heap)
            if r in used:
                continue
            row = rows[r]
            current = eligible(row)
            if current != size:
                heapq.heappush(heap, (current, r))
                continue
            if current == 0:
                used.add(r)
                continue
            pc = min((c for c in row if c < protect), key=lambda c: (len(col_rows[c]), c))
            inv = 1 / row[pc]
            for c in row:
                row[c] = row[c] * inv
            used.add(r)
            self.pivot_row[pc] = r
            for other in sorted(col_rows[pc] - {r}):
                orow = rows[other]
                factor = orow[pc]
                for c, x in row.items():
                    y = orow.get(c, 0) - factor * x
                    if y:
                        if c not in orow:
                            col_rows[c].add(other)
                        orow[c] = y
                    else:
                        if c in orow:
                            del orow[c]
                            col_rows[c].discard(other)
                if other not in used:
                    heapq.heappush(heap, (eligible(orow), other))
            col_rows[pc] = {r}

    @property
    def rank(self) -> int:
        return len(self.pivot_row)


def _rows_of(M: SparseMatrix) -> List[dict]:
    return M.rows()


def rank(M: SparseMatrix) -> int:
    """Exact rank over the matrix's field."""
    if M.nrows == 0 or M.ncols == 0:
        return 0
    return _Reduction(_rows_of(M), M.ncols).rank


def kernel_basis(M: SparseMatrix) -> List[dict]:
    """Basis of the right kernel, one sparse vector per free column.

    Each returned vector has a ``1`` at its own free column and ``0`` at every
    other free column, so coordinates of a kernel element in this basis are
    read off its free-column entries.
    """
    return kernel_with_free_columns(M)[0]


def kernel_with_free_columns(M: SparseMatrix) -> Tuple[List[dict], List[int]]:
    """Kernel basis together with the free column of each vector."""
    if M.ncols == 0:
        return [], []
    red = _Reduction(_rows_of(M), M.ncols)
    one = M.field.one
    pivot_cols = red.pivot_row
    free_in_rows: Dict[int, list] = defaultdict(list)
    for pc, r in pivot_cols.items():
        for c, x in red.rows[r].items():
            if c != pc:
                free_in_rows[c].append((pc, x))
    basis, free = [], []
    for f in range(M.ncols):
        if f in pivot_cols:
            continue
        v = {f: one}
        for pc, x in free_in_rows.get(f, ()):
            v[pc] = -x
        basis.append(v)
        free.append(f)
    return basis, free


def solve_many(M: SparseMatrix, rhs: Sequence[Mapping]) -> List[Optional[dict]]:
    """Solve ``M x = b`` for each ``b``; ``None`` where no solution exists."""
    k = len(rhs)
    for b in rhs:
        for r in b:
            if not 0 <= r < M.nrows:
                raise ValueError("right-hand side index %d outside %d rows" % (r, M.nrows))
    rows = _rows_of(M)
    for j, b in enumerate(rhs):
        for r, x in b.items():
            if x:
                rows[r][M.ncols + j] = M.field(x)
    red = _Reduction(rows, M.ncols + k, protect=M.ncols)
    ok = [True] * k
    pivot_rows = set(red.pivot_row.values())
    for r, row in enumerate(red.rows):
        if r in pivot_rows:
            continue
        for c in row:
            if c >= M.ncols:
                ok[c - M.ncols] = False
    out: List[Optional[dict]] = []
    for j in range(k):
        if not ok[j]:
            out.append(None)
            continue
        x = {}
        for pc, r in red.pivot_row.items():
            val = red.rows[r].get(M.ncols + j)
            if val:
                x[pc] = val
        out.append(x)
    return out


def solve(M: SparseMatrix, b: Mapping) -> Optional[dict]:
    """A solution of ``M x = b`` or ``None`` when ``b`` is not in the image."""
    if isinstance(b, (list, tuple)):
        if len(b) != M.nrows:
            raise ValueError("right-hand side has length %d, expected %d" % (len(b), M.nrows))
        b = {r: x for r, x in enumerate(b) if x}
    return solve_many(M, [b])[0]


def image_basis(vectors: Sequence[Mapping]) -> List[dict]:
    """An independent subset spanning the same space (first-come order)."""
    red = IncrementalBasis()
    return [dict(v) for v in vectors if red.add(v)]


class IncrementalBasis:
    """Greedy basis builder with pivot = largest index, tracking combinations.

    Vectors are offered in order; ``add`` reports whether the vector was
    independent of those already accepted.  ``express`` writes any vector of
    the span as a combination of the offered vectors.
    """

    def __init__(self):
        self._reduced: Dict[int, Tuple[dict, dict]] = {}
        self.count = 0
        self.accepted: List[int] = []

    def _reduce(self, v: Mapping):
        v = {k: x for k, x in v.items() if x}
        combo: dict = {}
        while v:
            p = max(v)
            hit = self._reduced.get(p)
            if hit is None:
                break
            rv, rcombo = hit
            factor = v[p] / rv[p]
            v = vec_add(v, rv, -factor)
            combo = vec_add(combo, rcombo, -factor)
        return v, combo

    def add(self, v: Mapping) -> bool:
        idx = self.count
        self.count += 1
        rem, combo = self._reduce(v)
        if not rem:
            return False
        combo = vec_add(combo, {idx: 1})
        self._reduced[max(rem)] = (rem, combo)
        self.accepted.append(idx)
        return True

    def contains(self, v: Mapping) -> bool:
        rem, _ = self._reduce(v)
        return not rem

    def express(self, v: Mapping) -> Optional[dict]:
        """Coefficients on offered vectors summing to ``v``, or None."""
        rem, combo = self._reduce(v)
        if rem:
            return None
        return {k: -x for k, x in combo.items() if x}

    @property
    def rank(self) -> int:
        return len(self._reduced)


def dense_rank(rows: Sequence[Sequence], field: Field) -> int:
    return rank(SparseMatrix.from_dense(rows, field))


def inverse(M: SparseMatrix) -> SparseMatrix:
    """Inverse of a square invertible matrix; raises ValueError otherwise."""
    if M.nrows != M.ncols:
        raise ValueError("only square matrices are invertible")
    n = M.nrows
    sols = solve_many(M, [{k: M.field.one} for k in range(n)])
    if any(s is None for s in sols):
        raise ValueError("matrix is singular")
    return SparseMatrix(n, n, M.field, dict(enumerate(sols)))


def determinant(M: SparseMatrix):
    """Exact determinant by Gaussian elimination (small matrices)."""
    if M.nrows != M.ncols:
        raise ValueError("determinant of a non-square matrix")
    a = [list(row) for row in M.to_dense()]
    n = M.nrows
    det = M.field.one
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return M.field.zero
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det = det * a[c][c]
        inv = 1 / a[c][c]
        for r in range(c + 1, n):
            if a[r][c]:
                f = a[r][c] * inv
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return det


def as_vector(values: Iterable) -> dict:
    return {k: x for k, x in enumerate(values) if x}
