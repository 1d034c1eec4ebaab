from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from sympy import isprime

log = logging.getLogger(__name__)

Scalar = Fraction | int


class LinalgError(RuntimeError):
    """Base exception for exact linear algebra failures."""


class FieldMismatch(LinalgError):
    """Raised when two matrices live over different fields."""


class ShapeMismatch(LinalgError):
    """Raised when matrix dimensions are incompatible."""


class NoFactorization(LinalgError):
    """Raised when a map does not factor through a kernel or cokernel."""


class NotInvertible(LinalgError):
    """Raised when a scalar or matrix has no inverse."""


@dataclass(frozen=True)
class Field:
    """The rationals (characteristic 0) or a prime field F_p."""

    characteristic: int = 0

    def __post_init__(self) -> None:
        p = self.characteristic
        if p != 0 and not isprime(p):
            raise ValueError(f"F_p needs a prime modulus, got {p}")

    @classmethod
    def rationals(cls) -> "Field":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "Field":
        return cls(int(p))

    @classmethod
    def from_label(cls, label: str) -> "Field":
        """Accepts `Q`, `FP:<p>` or `FP <p>`."""
        text = (label or "").strip().upper()
        if text == "Q":
            return cls.rationals()
        for sep in (":", " "):
            head, _, tail = text.partition(sep)
            if head == "FP" and tail.strip():
                try:
                    return cls.prime(int(tail.strip()))
                except ValueError as exc:
                    raise ValueError(f"bad field label {label!r}: {exc}") from exc
        raise ValueError(f"bad field label {label!r} (expected Q or FP:<p>)")

    @property
    def is_rational(self) -> bool:
        return self.characteristic == 0

    @property
    def label(self) -> str:
        return "Q" if self.is_rational else f"FP:{self.characteristic}"

    @property
    def zero(self) -> Scalar:
        return Fraction(0) if self.is_rational else 0

    @property
    def one(self) -> Scalar:
        return Fraction(1) if self.is_rational else 1

    def reduce(self, value: Scalar) -> Scalar:
        if self.is_rational:
            return value if type(value) is Fraction else Fraction(value)
        return value % self.characteristic

    def coerce(self, value: object) -> Scalar:
        if isinstance(value, str):
            return self.parse_scalar(value)
        if self.is_rational:
            return Fraction(value)  # type: ignore[arg-type]
        p = self.characteristic
        if isinstance(value, Fraction):
            den = value.denominator % p
            if den == 0:
                raise NotInvertible(f"denominator of {value} vanishes in F_{p}")
            return (value.numerator * pow(den, p - 2, p)) % p
        return int(value) % p  # type: ignore[call-overload]

    def inv(self, value: Scalar) -> Scalar:
        if not value:
            raise NotInvertible("zero has no inverse")
        if self.is_rational:
            return 1 / Fraction(value)
        p = self.characteristic
        return pow(int(value) % p, p - 2, p)

    def parse_scalar(self, text: str) -> Scalar:
        token = text.strip()
        if not token:
            raise ValueError("empty scalar")
        if self.is_rational:
            try:
                return Fraction(token)
            except (ValueError, ZeroDivisionError) as exc:
                raise ValueError(f"bad rational {token!r}") from exc
        num, slash, den = token.partition("/")
        try:
            value = Fraction(int(num), int(den)) if slash else Fraction(int(num))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad residue {token!r}") from exc
        return self.coerce(value)

    def format_scalar(self, value: Scalar) -> str:
        return str(self.reduce(value))

    def random_scalar(self, rng: random.Random, spread: int = 3) -> Scalar:
        if self.is_rational:
            return Fraction(rng.randint(-spread, spread))
        return rng.randrange(self.characteristic)

    def __str__(self) -> str:
        return "Q" if self.is_rational else f"F_{self.characteristic}"


@dataclass(frozen=True)
class Matrix:
    """Dense row-major matrix with exact entries. Zero rows/cols are legal."""

    field: Field
    rows: int
    cols: int
    entries: tuple[Scalar, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ShapeMismatch(f"negative shape {self.rows}x{self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise ShapeMismatch(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix"
            )

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, key: tuple[int, int]) -> Scalar:
        i, j = key
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"entry ({i}, {j}) outside {self.rows}x{self.cols}")
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Scalar, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> tuple[Scalar, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list[tuple[Scalar, ...]]:
        return [self.row(i) for i in range(self.rows)]

    def _check_field(self, other: "Matrix") -> None:
        if self.field != other.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check_field(other)
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot compose {self.shape} with {other.shape}")
        red = self.field.reduce
        n, ocols = self.cols, other.cols
        b = other.entries
        out: list[Scalar] = []
        for i in range(self.rows):
            nonzero = [(k, v) for k, v in enumerate(self.row(i)) if v]
            for j in range(ocols):
                acc: Scalar = 0
                for k, v in nonzero:
                    acc += v * b[k * ocols + j]
                out.append(red(acc))
        return Matrix(self.field, self.rows, ocols, tuple(out))

    def _zip(self, other: "Matrix", sign: int) -> "Matrix":
        self._check_field(other)
        if self.shape != other.shape:
            raise ShapeMismatch(f"cannot add {self.shape} and {other.shape}")
        red = self.field.reduce
        return Matrix(
            self.field,
            self.rows,
            self.cols,
            tuple(red(a + sign * b) for a, b in zip(self.entries, other.entries)),
        )

    def __add__(self, other: "Matrix") -> "Matrix":
        return self._zip(other, 1)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self._zip(other, -1)

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def scale(self, factor: Scalar) -> "Matrix":
        red = self.field.reduce
        c = self.field.coerce(factor)
        return Matrix(self.field, self.rows, self.cols, tuple(red(c * v) for v in self.entries))

    def transpose(self) -> "Matrix":
        return Matrix(
            self.field,
            self.cols,
            self.rows,
            tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)),
        )

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    def is_zero(self) -> bool:
        return not any(self.entries)

    def rank(self) -> int:
        return len(rref(self)[1])

    def select_columns(self, indices: Iterable[int]) -> "Matrix":
        idx = list(indices)
        return Matrix(
            self.field,
            self.rows,
            len(idx),
            tuple(self.entries[i * self.cols + j] for i in range(self.rows) for j in idx),
        )

    def select_rows(self, indices: Iterable[int]) -> "Matrix":
        idx = list(indices)
        return Matrix(
            self.field,
            len(idx),
            self.cols,
            tuple(v for i in idx for v in self.row(i)),
        )

    def with_entry(self, i: int, j: int, value: object) -> "Matrix":
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"entry ({i}, {j}) outside {self.rows}x{self.cols}")
        entries = list(self.entries)
        entries[i * self.cols + j] = self.field.coerce(value)
        return Matrix(self.field, self.rows, self.cols, tuple(entries))

    def first_difference(self, other: "Matrix") -> tuple[int, int] | None:
        """First (row, col) where the two matrices disagree, or None."""
        self._check_field(other)
        if self.shape != other.shape:
            raise ShapeMismatch(f"cannot compare {self.shape} with {other.shape}")
        for k, (a, b) in enumerate(zip(self.entries, other.entries)):
            if a != b:
                return divmod(k, self.cols)
        return None

    def __repr__(self) -> str:
        body = [[self.field.format_scalar(v) for v in row] for row in self.to_rows()]
        return f"Matrix({self.rows}x{self.cols} over {self.field}: {body})"


def zeros(field: Field, rows: int, cols: int) -> Matrix:
    return Matrix(field, rows, cols, (field.zero,) * (rows * cols))


def identity(field: Field, n: int) -> Matrix:
    one, zero = field.one, field.zero
    return Matrix(field, n, n, tuple(one if i == j else zero for i in range(n) for j in range(n)))


def from_rows(field: Field, rows: Sequence[Sequence[object]], cols: int | None = None) -> Matrix:
    width = len(rows[0]) if rows else (cols or 0)
    if cols is not None and rows and width != cols:
        raise ShapeMismatch(f"rows have {width} entries, expected {cols}")
    entries: list[Scalar] = []
    for row in rows:
        if len(row) != width:
            raise ShapeMismatch("ragged rows")
        entries.extend(field.coerce(v) for v in row)
    return Matrix(field, len(rows), width, tuple(entries))


def from_columns(field: Field, columns: Sequence[Sequence[object]], rows: int) -> Matrix:
    for col in columns:
        if len(col) != rows:
            raise ShapeMismatch(f"column of length {len(col)}, expected {rows}")
    return Matrix(
        field,
        rows,
        len(columns),
        tuple(field.coerce(columns[j][i]) for i in range(rows) for j in range(len(columns))),
    )


def column_vector(field: Field, values: Sequence[object]) -> Matrix:
    return from_columns(field, [values], len(values))


def row_vector(field: Field, values: Sequence[object]) -> Matrix:
    return from_rows(field, [values], len(values))


def hstack(field: Field, rows: int, *blocks: Matrix) -> Matrix:
    """Side-by-side concatenation; `rows` fixes the height when blocks is empty."""
    for b in blocks:
        if b.field != field:
            raise FieldMismatch(f"{b.field} vs {field}")
        if b.rows != rows:
            raise ShapeMismatch(f"hstack of a {b.rows}-row block into {rows} rows")
    entries: list[Scalar] = []
    for i in range(rows):
        for b in blocks:
            entries.extend(b.row(i))
    return Matrix(field, rows, sum(b.cols for b in blocks), tuple(entries))


def vstack(field: Field, cols: int, *blocks: Matrix) -> Matrix:
    for b in blocks:
        if b.field != field:
            raise FieldMismatch(f"{b.field} vs {field}")
        if b.cols != cols:
            raise ShapeMismatch(f"vstack of a {b.cols}-col block into {cols} cols")
    entries: list[Scalar] = []
    for b in blocks:
        entries.extend(b.entries)
    return Matrix(field, sum(b.rows for b in blocks), cols, tuple(entries))


def block_diagonal(field: Field, *blocks: Matrix) -> Matrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = [field.zero] * (rows * cols)
    r0 = c0 = 0
    for b in blocks:
        if b.field != field:
            raise FieldMismatch(f"{b.field} vs {field}")
        for i in range(b.rows):
            for j in range(b.cols):
                out[(r0 + i) * cols + c0 + j] = b.entries[i * b.cols + j]
        r0 += b.rows
        c0 += b.cols
    return Matrix(field, rows, cols, tuple(out))


def rref(matrix: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row-echelon form and the strictly increasing pivot columns."""
    field = matrix.field
    red = field.reduce
    work = [list(r) for r in matrix.to_rows()]
    pivots: list[int] = []
    r = 0
    for c in range(matrix.cols):
        if r == matrix.rows:
            break
        pivot = next((i for i in range(r, matrix.rows) if work[i][c]), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        inv = field.inv(work[r][c])
        work[r] = [red(v * inv) for v in work[r]]
        for i in range(matrix.rows):
            factor = work[i][c]
            if i != r and factor:
                work[i] = [red(a - factor * b) for a, b in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
    return Matrix(field, matrix.rows, matrix.cols, tuple(v for row in work for v in row)), pivots


def rank(matrix: Matrix) -> int:
    return matrix.rank()


def kernel_basis(matrix: Matrix) -> Matrix:
    """Columns form a basis of {v : Mv = 0}, one per free column of rref(M)."""
    field = matrix.field
    reduced, pivots = rref(matrix)
    pivot_set = set(pivots)
    columns: list[list[Scalar]] = []
    for free in range(matrix.cols):
        if free in pivot_set:
            continue
        v = [field.zero] * matrix.cols
        v[free] = field.one
        for r, p in enumerate(pivots):
            v[p] = field.reduce(-reduced[r, free])
        columns.append(v)
    return from_columns(field, columns, matrix.cols)


def _column_reduction(matrix: Matrix) -> tuple[Matrix, list[int], list[int]]:
    reduced, pivot_rows = rref(matrix.transpose())
    pivot_set = set(pivot_rows)
    complement = [i for i in range(matrix.rows) if i not in pivot_set]
    return reduced, pivot_rows, complement


def cokernel_projection(matrix: Matrix) -> Matrix:
    """Surjection Y -> Y/Im(M) whose basis is the codomain coordinates missed by
    the pivot rows of the column-reduced image."""
    field = matrix.field
    reduced, pivot_rows, complement = _column_reduction(matrix)
    m = matrix.rows
    out = [field.zero] * (len(complement) * m)
    for k, n in enumerate(complement):
        out[k * m + n] = field.one
        for i, p in enumerate(pivot_rows):
            out[k * m + p] = field.reduce(-reduced[i, n])
    return Matrix(field, len(complement), m, tuple(out))


def image_basis(matrix: Matrix) -> Matrix:
    reduced, pivot_rows, _ = _column_reduction(matrix)
    return reduced.select_rows(range(len(pivot_rows))).transpose()


def solve(a: Matrix, b: Matrix) -> Matrix:
    """A particular X with A X = B (free variables set to zero)."""
    if a.rows != b.rows:
        raise ShapeMismatch(f"solve needs equal row counts, got {a.shape} and {b.shape}")
    field = a.field
    reduced, pivots = rref(hstack(field, a.rows, a, b))
    out = [field.zero] * (a.cols * b.cols)
    for r, p in enumerate(pivots):
        if p >= a.cols:
            raise NoFactorization(f"column {p - a.cols} of the target is outside the span")
        for j in range(b.cols):
            out[p * b.cols + j] = reduced[r, a.cols + j]
    return Matrix(field, a.cols, b.cols, tuple(out))


def factor_through_kernel(kernel: Matrix, target: Matrix) -> Matrix:
    """Unique B with K B = A when K is injective."""
    if kernel.rows != target.rows:
        raise ShapeMismatch(f"kernel {kernel.shape} vs target {target.shape}")
    return solve(kernel, target)


def factor_through_cokernel(quotient: Matrix, target: Matrix) -> Matrix:
    """Unique B with B Q = A when Q is surjective."""
    if quotient.cols != target.cols:
        raise ShapeMismatch(f"quotient {quotient.shape} vs target {target.shape}")
    try:
        return solve(quotient.transpose(), target.transpose()).transpose()
    except NoFactorization as exc:
        raise NoFactorization(f"target does not vanish on the kernel of the quotient ({exc})") from exc


def kronecker(a: Matrix, b: Matrix) -> Matrix:
    if a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")
    red = a.field.reduce
    out: list[Scalar] = []
    for i in range(a.rows):
        for k in range(b.rows):
            brow = b.row(k)
            for j in range(a.cols):
                x = a.entries[i * a.cols + j]
                if x:
                    out.extend(red(x * y) for y in brow)
                else:
                    out.extend((a.field.zero,) * b.cols)
    return Matrix(a.field, a.rows * b.rows, a.cols * b.cols, tuple(out))


def direct_sum(a: Matrix, b: Matrix) -> Matrix:
    if a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")
    return block_diagonal(a.field, a, b)


@dataclass(frozen=True)
class Pushout:
    """P = (B ⊕ C) / Im(f, -g) with its two structure maps."""

    dim: int
    in_b: Matrix
    in_c: Matrix
    projection: Matrix


def pushout(f: Matrix, g: Matrix) -> Pushout:
    if f.field != g.field:
        raise FieldMismatch(f"{f.field} vs {g.field}")
    if f.cols != g.cols:
        raise ShapeMismatch(f"pushout legs have domains {f.cols} and {g.cols}")
    relations = vstack(f.field, f.cols, f, -g)
    q = cokernel_projection(relations)
    log.debug("pushout of %dx%d and %dx%d has dimension %d", f.rows, f.cols, g.rows, g.cols, q.rows)
    return Pushout(
        dim=q.rows,
        in_b=q.select_columns(range(f.rows)),
        in_c=q.select_columns(range(f.rows, f.rows + g.rows)),
        projection=q,
    )


def is_mono(matrix: Matrix) -> bool:
    return matrix.rank() == matrix.cols


def is_epi(matrix: Matrix) -> bool:
    return matrix.rank() == matrix.rows


def is_iso(matrix: Matrix) -> bool:
    return matrix.rows == matrix.cols and is_mono(matrix)


def inverse(matrix: Matrix) -> Matrix:
    if not is_iso(matrix):
        raise NotInvertible(f"{matrix.shape} matrix of rank {matrix.rank()} is not invertible")
    return solve(matrix, identity(matrix.field, matrix.rows))


def commutation_matrix(field: Field, m: int, n: int) -> Matrix:
    """The swap k^m ⊗ k^n -> k^n ⊗ k^m on Kronecker-ordered bases."""
    size = m * n
    out = [field.zero] * (size * size)
    for i in range(m):
        for j in range(n):
            out[(j * m + i) * size + (i * n + j)] = field.one
    return Matrix(field, size, size, tuple(out))


def normal_form_bases(matrix: Matrix) -> tuple[Matrix, Matrix]:
    """Invertible (S, T) with T^-1 M S = [[I_r, 0], [0, 0]]."""
    field = matrix.field
    _, pivots = rref(matrix)
    unit_columns = [
        [field.one if i == p else field.zero for i in range(matrix.cols)] for p in pivots
    ]
    domain = hstack(
        field,
        matrix.cols,
        from_columns(field, unit_columns, matrix.cols),
        kernel_basis(matrix),
    )
    _, _, complement = _column_reduction(matrix)
    complement_columns = [
        [field.one if i == n else field.zero for i in range(matrix.rows)] for n in complement
    ]
    codomain = hstack(
        field,
        matrix.rows,
        matrix.select_columns(pivots),
        from_columns(field, complement_columns, matrix.rows),
    )
    return domain, codomain


def random_matrix(
    rng: random.Random,
    field: Field,
    rows: int,
    cols: int,
    density: float = 0.6,
) -> Matrix:
    entries = tuple(
        field.random_scalar(rng) if rng.random() < density else field.zero
        for _ in range(rows * cols)
    )
    return Matrix(field, rows, cols, entries)
