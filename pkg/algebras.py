"""
Finite-dimensional (non-)unital and augmented algebras given by structure
constants, and the equivalence A |-> k ⊕ A, B |-> Ker(ε_B).
"""
from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence, Union

from exact_linalg import (
    Field,
    Matrix,
    NoFactorization,
    Scalar,
    column_vector,
    direct_sum,
    factor_through_kernel,
    from_columns,
    hstack,
    identity,
    inverse,
    is_iso,
    kernel_basis,
    kronecker,
    row_vector,
)
from reports import CheckRecord, check, fail, ok

log = logging.getLogger(__name__)

Vector = tuple[Scalar, ...]


class AlgebraError(RuntimeError):
    """Base exception for algebra constructions."""


class NotAssociative(AlgebraError):
    """Raised when an operation needs an associative multiplication."""


class InvalidAlgebra(AlgebraError):
    """Raised when unit, augmentation or ideal data are inconsistent."""


@dataclass(frozen=True)
class NonUnitalAlgebra:
    """
    e_i · e_j = Σ_k c[i][j][k] e_k.

    `constants` holds the nonzero (i, j, k, c) sorted by (i, j, k).
    """

    field: Field
    dim: int
    constants: tuple[tuple[int, int, int, Scalar], ...] = ()

    @classmethod
    def from_constants(
        cls,
        field: Field,
        dim: int,
        entries: Iterable[tuple[int, int, int, object]],
    ) -> "NonUnitalAlgebra":
        acc: dict[tuple[int, int, int], Scalar] = defaultdict(lambda: field.zero)
        for i, j, k, c in entries:
            for idx in (i, j, k):
                if not 0 <= idx < dim:
                    raise InvalidAlgebra(f"index {idx} outside a {dim}-dimensional algebra")
            acc[(i, j, k)] = field.reduce(acc[(i, j, k)] + field.coerce(c))
        constants = tuple((i, j, k, c) for (i, j, k), c in sorted(acc.items()) if c)
        return cls(field, dim, constants)

    @classmethod
    def from_mult_matrix(cls, mult: Matrix) -> "NonUnitalAlgebra":
        n = mult.rows
        if mult.cols != n * n:
            raise InvalidAlgebra(f"multiplication matrix {mult.shape} is not n x n^2")
        entries = [
            (col // n, col % n, k, mult[k, col])
            for col in range(n * n)
            for k in range(n)
            if mult[k, col]
        ]
        return cls.from_constants(mult.field, n, entries)

    @classmethod
    def zero(cls, field: Field, dim: int) -> "NonUnitalAlgebra":
        return cls(field, dim, ())

    @cached_property
    def _table(self) -> dict[tuple[int, int], tuple[tuple[int, Scalar], ...]]:
        table: dict[tuple[int, int], list[tuple[int, Scalar]]] = defaultdict(list)
        for i, j, k, c in self.constants:
            table[(i, j)].append((k, c))
        return {key: tuple(v) for key, v in table.items()}

    @cached_property
    def mult_matrix(self) -> Matrix:
        """n x n^2; column i*n + j is e_i · e_j."""
        n = self.dim
        out = [self.field.zero] * (n * n * n)
        for i, j, k, c in self.constants:
            out[k * n * n + i * n + j] = c
        return Matrix(self.field, n, n * n, tuple(out))

    def basis_vector(self, i: int) -> Vector:
        return tuple(self.field.one if t == i else self.field.zero for t in range(self.dim))

    def multiply(self, x: Sequence[Scalar], y: Sequence[Scalar]) -> Vector:
        k = self.field
        out = [k.zero] * self.dim
        for (i, j), terms in self._table.items():
            if not (x[i] and y[j]):
                continue
            xy = x[i] * y[j]
            for t, c in terms:
                out[t] += xy * c
        return tuple(k.reduce(v) for v in out)

    def product(self, i: int, j: int) -> Vector:
        k = self.field
        out = [k.zero] * self.dim
        for t, c in self._table.get((i, j), ()):
            out[t] = c
        return tuple(out)


@dataclass(frozen=True)
class UnitalAlgebra:
    base: NonUnitalAlgebra
    unit: Vector

    @property
    def field(self) -> Field:
        return self.base.field

    @property
    def dim(self) -> int:
        return self.base.dim


@dataclass(frozen=True)
class AugmentedAlgebra:
    alg: UnitalAlgebra
    eps: Vector

    @property
    def field(self) -> Field:
        return self.alg.field

    @property
    def dim(self) -> int:
        return self.alg.dim

    @property
    def base(self) -> NonUnitalAlgebra:
        return self.alg.base

    @property
    def unit(self) -> Vector:
        return self.alg.unit

    @property
    def mult_matrix(self) -> Matrix:
        return self.alg.base.mult_matrix

    def multiply(self, x: Sequence[Scalar], y: Sequence[Scalar]) -> Vector:
        return self.alg.base.multiply(x, y)


AnyAlgebra = Union[NonUnitalAlgebra, UnitalAlgebra, AugmentedAlgebra]


def make_unital(base: NonUnitalAlgebra, unit: Sequence[object]) -> UnitalAlgebra:
    return UnitalAlgebra(base, tuple(base.field.coerce(v) for v in unit))


def make_augmented(alg: UnitalAlgebra, eps: Sequence[object]) -> AugmentedAlgebra:
    return AugmentedAlgebra(alg, tuple(alg.field.coerce(v) for v in eps))


def underlying(algebra: AnyAlgebra) -> NonUnitalAlgebra:
    if isinstance(algebra, AugmentedAlgebra):
        return algebra.base
    if isinstance(algebra, UnitalAlgebra):
        return algebra.base
    return algebra


@dataclass(frozen=True)
class LawReport:
    law: str
    violations: tuple[tuple[int, ...], ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def record(self) -> CheckRecord:
        if self.ok:
            return ok(self.law)
        first = self.violations[0]
        return fail(self.law, f"basis {first} ({len(self.violations)} violation(s))")


def check_associativity(algebra: AnyAlgebra) -> LawReport:
    """(e_i e_j) e_l == e_i (e_j e_l) over all n^3 basis triples."""
    a = underlying(algebra)
    n = a.dim
    basis = [a.basis_vector(i) for i in range(n)]
    products = {(i, j): a.product(i, j) for i in range(n) for j in range(n)}
    bad = []
    for i in range(n):
        for j in range(n):
            for l in range(n):
                lhs = a.multiply(products[(i, j)], basis[l])
                rhs = a.multiply(basis[i], products[(j, l)])
                if lhs != rhs:
                    bad.append((i, j, l))
    return LawReport("associativity", tuple(bad))


def check_commutativity(algebra: AnyAlgebra) -> LawReport:
    a = underlying(algebra)
    bad = [
        (i, j)
        for i in range(a.dim)
        for j in range(i + 1, a.dim)
        if a.product(i, j) != a.product(j, i)
    ]
    return LawReport("commutativity", tuple(bad))


def check_unit(algebra: UnitalAlgebra) -> LawReport:
    a = algebra.base
    if len(algebra.unit) != a.dim:
        return LawReport("unit", ((-1,),))
    bad = []
    for x in range(a.dim):
        e = a.basis_vector(x)
        if a.multiply(algebra.unit, e) != e or a.multiply(e, algebra.unit) != e:
            bad.append((x,))
    return LawReport("unit", tuple(bad))


def check_augmentation(algebra: AugmentedAlgebra) -> LawReport:
    """ε(e_i e_j) = ε(e_i) ε(e_j); a violation (-1,) means ε(1) != 1."""
    k = algebra.field
    a = algebra.base
    eps = algebra.eps
    if len(eps) != a.dim:
        return LawReport("augmentation", ((-1,),))

    def ev(v: Sequence[Scalar]) -> Scalar:
        return k.reduce(sum((e * x for e, x in zip(eps, v)), k.zero))

    bad: list[tuple[int, ...]] = []
    if ev(algebra.unit) != k.one:
        bad.append((-1,))
    for i in range(a.dim):
        for j in range(a.dim):
            if ev(a.product(i, j)) != k.reduce(eps[i] * eps[j]):
                bad.append((i, j))
    return LawReport("augmentation", tuple(bad))


def validate(algebra: AnyAlgebra, commutative: bool = False) -> list[CheckRecord]:
    records = [check_associativity(algebra).record()]
    if commutative:
        records.append(check_commutativity(algebra).record())
    if isinstance(algebra, AugmentedAlgebra):
        records.append(check_unit(algebra.alg).record())
        records.append(check_augmentation(algebra).record())
    elif isinstance(algebra, UnitalAlgebra):
        records.append(check_unit(algebra).record())
    return records


def _require_associative(algebra: AnyAlgebra) -> None:
    report = check_associativity(algebra)
    if not report.ok:
        raise NotAssociative(f"(e_i e_j) e_l != e_i (e_j e_l) at {report.violations[0]}")


@dataclass(frozen=True)
class AlgebraMorphism:
    src: AnyAlgebra
    dst: AnyAlgebra
    matrix: Matrix

    def __post_init__(self) -> None:
        if self.matrix.shape != (underlying(self.dst).dim, underlying(self.src).dim):
            raise InvalidAlgebra(f"morphism matrix has shape {self.matrix.shape}")

    def apply(self, v: Sequence[Scalar]) -> Vector:
        k = self.matrix.field
        return (self.matrix @ column_vector(k, v)).entries

    def multiplicative_violations(self) -> tuple[tuple[int, int], ...]:
        a, b = underlying(self.src), underlying(self.dst)
        images = [self.apply(a.basis_vector(i)) for i in range(a.dim)]
        return tuple(
            (i, j)
            for i in range(a.dim)
            for j in range(a.dim)
            if self.apply(a.product(i, j)) != b.multiply(images[i], images[j])
        )

    def checks(self) -> list[CheckRecord]:
        bad = self.multiplicative_violations()
        records = [check("multiplicative", not bad, f"basis pair {bad[0]}" if bad else "")]
        src_unit = _unit_of(self.src)
        dst_unit = _unit_of(self.dst)
        if src_unit is not None and dst_unit is not None:
            records.append(check("unital", self.apply(src_unit) == dst_unit, "φ(1) != 1"))
        if isinstance(self.src, AugmentedAlgebra) and isinstance(self.dst, AugmentedAlgebra):
            k = self.matrix.field
            pulled = row_vector(k, self.dst.eps) @ self.matrix
            records.append(
                check("augmentation_preserving", pulled.entries == self.src.eps, "ε' ∘ φ != ε")
            )
        records.append(check("invertible", is_iso(self.matrix), f"rank {self.matrix.rank()}"))
        return records

    def is_isomorphism(self) -> bool:
        return all(r.passed for r in self.checks())


def _unit_of(algebra: AnyAlgebra) -> Vector | None:
    if isinstance(algebra, AugmentedAlgebra):
        return algebra.unit
    if isinstance(algebra, UnitalAlgebra):
        return algebra.unit
    return None


def unitalize(a: NonUnitalAlgebra) -> AugmentedAlgebra:
    """k ⊕ A with (m, a)(n, b) = (mn, na + mb + ab); e_0 is the unit."""
    _require_associative(a)
    k = a.field
    n = a.dim
    entries: list[tuple[int, int, int, object]] = [(0, 0, 0, k.one)]
    for x in range(1, n + 1):
        entries.append((0, x, x, k.one))
        entries.append((x, 0, x, k.one))
    entries.extend((i + 1, j + 1, t + 1, c) for i, j, t, c in a.constants)
    base = NonUnitalAlgebra.from_constants(k, n + 1, entries)
    first = tuple(k.one if i == 0 else k.zero for i in range(n + 1))
    log.debug("unitalized a %d-dimensional algebra over %s", n, k)
    return AugmentedAlgebra(UnitalAlgebra(base, first), first)


def augmentation_kernel(b: AugmentedAlgebra) -> tuple[NonUnitalAlgebra, AlgebraMorphism]:
    """Ker(ε) with the restricted multiplication, and its inclusion into B."""
    k = b.field
    incl = kernel_basis(row_vector(k, b.eps))
    m = incl.cols
    products = [
        b.multiply(incl.column(x), incl.column(y)) for x in range(m) for y in range(m)
    ]
    try:
        restricted = factor_through_kernel(incl, from_columns(k, products, b.dim))
    except NoFactorization as exc:
        raise InvalidAlgebra("Ker(ε) is not closed under multiplication") from exc
    kernel = NonUnitalAlgebra.from_mult_matrix(restricted)
    return kernel, AlgebraMorphism(kernel, b, incl)


def roundtrip_nu(a: NonUnitalAlgebra) -> AlgebraMorphism:
    """Identity-on-coordinates A -> Ker(ε) of k ⊕ A."""
    kernel, _ = augmentation_kernel(unitalize(a))
    return AlgebraMorphism(a, kernel, identity(a.field, a.dim))


def roundtrip_aug(b: AugmentedAlgebra) -> AlgebraMorphism:
    """k ⊕ Ker(ε) -> B, (m, a) |-> m·1 + a."""
    kernel, incl = augmentation_kernel(b)
    k = b.field
    matrix = hstack(k, b.dim, column_vector(k, b.unit), incl.matrix)
    return AlgebraMorphism(unitalize(kernel), b, matrix)


def unitalize_morphism(phi: AlgebraMorphism) -> AlgebraMorphism:
    k = phi.matrix.field
    return AlgebraMorphism(
        unitalize(underlying(phi.src)),
        unitalize(underlying(phi.dst)),
        direct_sum(identity(k, 1), phi.matrix),
    )


def augmentation_kernel_morphism(psi: AlgebraMorphism) -> AlgebraMorphism:
    if not (isinstance(psi.src, AugmentedAlgebra) and isinstance(psi.dst, AugmentedAlgebra)):
        raise InvalidAlgebra("the kernel functor acts on morphisms of augmented algebras")
    src_kernel, src_incl = augmentation_kernel(psi.src)
    dst_kernel, dst_incl = augmentation_kernel(psi.dst)
    try:
        restricted = factor_through_kernel(dst_incl.matrix, psi.matrix @ src_incl.matrix)
    except NoFactorization as exc:
        raise InvalidAlgebra("morphism does not preserve augmentation ideals") from exc
    return AlgebraMorphism(src_kernel, dst_kernel, restricted)


def change_basis(b: AugmentedAlgebra, p: Matrix) -> AugmentedAlgebra:
    """Transport B along the basis whose vectors are the columns of P."""
    k = b.field
    p_inv = inverse(p)
    mult = p_inv @ b.mult_matrix @ kronecker(p, p)
    base = NonUnitalAlgebra.from_mult_matrix(mult)
    unit = (p_inv @ column_vector(k, b.unit)).entries
    eps = (row_vector(k, b.eps) @ p).entries
    return AugmentedAlgebra(UnitalAlgebra(base, unit), eps)
