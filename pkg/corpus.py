"""
Named algebra families and seeded random instances.

Random associative algebras are never sampled from structure constants;
randomness enters through linear maps, complexes and change of basis.
"""
from __future__ import annotations

import logging
import random
from typing import Iterable, Optional

from algebras import (
    AugmentedAlgebra,
    NonUnitalAlgebra,
    UnitalAlgebra,
    augmentation_kernel,
    change_basis,
)
from arrow_category import ArrowObject
from chain_complexes import (
    ChainComplex,
    ChainMap,
    chain_map,
    chain_maps_basis,
    checked,
    concentrated,
)
from config import SEED_LIMIT
from dg_algebras import DGAlgebraNU, algebra_to_dg, mult_from_products, zero_dg_algebra
from exact_linalg import Field, Matrix, identity, kernel_basis, random_matrix

log = logging.getLogger(__name__)

Q = Field.rationals()
F5 = Field.prime(5)

DEFAULT_FIELDS = (Q, F5)


def _rng(seed: int) -> random.Random:
    if not 0 <= seed < SEED_LIMIT:
        raise ValueError(f"seed {seed} outside [0, 2^64)")
    return random.Random(seed)


def _augmented(
    field: Field, dim: int, entries: Iterable[tuple[int, int, int, object]], unit, eps
) -> AugmentedAlgebra:
    base = NonUnitalAlgebra.from_constants(field, dim, entries)
    return AugmentedAlgebra(
        UnitalAlgebra(base, tuple(field.coerce(v) for v in unit)),
        tuple(field.coerce(v) for v in eps),
    )


def _first(field: Field, n: int) -> list[object]:
    return [field.one] + [field.zero] * (n - 1)


def truncated_polynomial(field: Field, n: int) -> AugmentedAlgebra:
    """k[x]/(x^n) on 1, x, ..., x^{n-1}; ε(x) = 0."""
    if n < 1:
        raise ValueError("truncated_polynomial needs n >= 1")
    entries = [(i, j, i + j, 1) for i in range(n) for j in range(n) if i + j < n]
    first = _first(field, n)
    return _augmented(field, n, entries, first, first)


def upper_triangular(field: Field, n: int) -> AugmentedAlgebra:
    """T_n(k) on the matrix units E_ab (a <= b, lexicographic); ε = (0,0) entry."""
    if n < 1:
        raise ValueError("upper_triangular needs n >= 1")
    units = [(a, b) for a in range(n) for b in range(a, n)]
    index = {u: i for i, u in enumerate(units)}
    entries = [
        (index[(a, b)], index[(c, d)], index[(a, d)], 1)
        for (a, b) in units
        for (c, d) in units
        if b == c
    ]
    unit = [1 if a == b else 0 for a, b in units]
    eps = [1 if (a, b) == (0, 0) else 0 for a, b in units]
    return _augmented(field, len(units), entries, unit, eps)


def cyclic_group_algebra(field: Field, n: int) -> AugmentedAlgebra:
    """k[C_n] on g^0, ..., g^{n-1}; ε(g) = 1."""
    if n < 1:
        raise ValueError("cyclic_group_algebra needs n >= 1")
    entries = [(i, j, (i + j) % n, 1) for i in range(n) for j in range(n)]
    return _augmented(field, n, entries, _first(field, n), [1] * n)


def square_zero(field: Field, n: int) -> NonUnitalAlgebra:
    return NonUnitalAlgebra.zero(field, n)


def random_invertible(seed: int, n: int, field: Field = Q) -> Matrix:
    """L·U with unit diagonals, so always invertible."""
    rng = _rng(seed)
    lower = identity(field, n)
    upper = identity(field, n)
    for i in range(n):
        for j in range(n):
            if i > j:
                lower = lower.with_entry(i, j, field.random_scalar(rng))
            elif i < j:
                upper = upper.with_entry(i, j, field.random_scalar(rng))
    return lower @ upper


def change_of_basis_family(b: AugmentedAlgebra, seed: int) -> AugmentedAlgebra:
    return change_basis(b, random_invertible(seed, b.dim, b.field))


def random_arrow(seed: int, max_dim: int, field: Field = Q) -> ArrowObject:
    rng = _rng(seed)
    rows = rng.randint(0, max_dim)
    cols = rng.randint(0, max_dim)
    density = rng.choice((0.0, 0.3, 0.7, 1.0))
    return ArrowObject(random_matrix(rng, field, rows, cols, density))


def random_complex(
    seed: int, lo: int = 0, hi: int = 3, max_dim: int = 3, field: Field = Q
) -> ChainComplex:
    """d_n = (basis of ker d_{n-1}) · (random), so d∘d = 0 by construction."""
    rng = _rng(seed)
    dims = [rng.randint(0, max_dim) for _ in range(lo, hi + 1)]
    diffs: dict[int, Matrix] = {}
    for n in range(lo + 1, hi + 1):
        below = diffs.get(n - 1)
        if below is None:
            below = Matrix(field, 0, dims[n - 1 - lo], ())
        cycles = kernel_basis(below)
        coeffs = random_matrix(rng, field, cycles.cols, dims[n - lo], rng.choice((0.3, 0.7, 1.0)))
        diffs[n] = cycles @ coeffs
    return checked(ChainComplex.build(field, lo, dims, diffs))


def random_chain_map_between(seed: int, src: ChainComplex, dst: ChainComplex) -> ChainMap:
    rng = _rng(seed)
    k = src.field
    result = chain_map(src, dst, {})
    for basis_map in chain_maps_basis(src, dst):
        c = k.random_scalar(rng)
        if not c:
            continue
        result = chain_map(src, dst, {
            n: result.component(n) + basis_map.component(n).scale(c) for n in result.degrees
        })
    return result


def random_chain_map(
    seed: int, lo: int = 0, hi: int = 3, max_dim: int = 3, field: Field = Q
) -> ChainMap:
    rng = _rng(seed)
    src = random_complex(rng.getrandbits(64), lo, hi, max_dim, field)
    dst = random_complex(rng.getrandbits(64), lo, hi, max_dim, field)
    return random_chain_map_between(rng.getrandbits(64), src, dst)


def augmented_corpus(fields: Iterable[Field] = DEFAULT_FIELDS) -> list[tuple[str, AugmentedAlgebra]]:
    out: list[tuple[str, AugmentedAlgebra]] = []
    for k in fields:
        out += [(f"truncated_polynomial({k},{n})", truncated_polynomial(k, n)) for n in range(1, 5)]
        out += [(f"upper_triangular({k},{n})", upper_triangular(k, n)) for n in range(1, 4)]
        out += [(f"cyclic_group_algebra({k},{n})", cyclic_group_algebra(k, n)) for n in range(1, 5)]
    log.debug("augmented corpus has %d members", len(out))
    return out


def nonunital_corpus(fields: Iterable[Field] = DEFAULT_FIELDS) -> list[tuple[str, NonUnitalAlgebra]]:
    fields = tuple(fields)
    out = [(f"square_zero({k},{n})", square_zero(k, n)) for k in fields for n in range(3)]
    for name, b in augmented_corpus(fields):
        out.append((f"Ker({name})", augmentation_kernel(b)[0]))
    return out


def square_zero_dg(field: Field, degree: int, dim: int) -> DGAlgebraNU:
    return zero_dg_algebra(concentrated(field, dim, degree))


def contractible_pair_dg(field: Field) -> DGAlgebraNU:
    """x in degree 1, y in degree 0, dx = y, zero multiplication."""
    d = Matrix(field, 1, 1, (field.one,))
    return zero_dg_algebra(checked(ChainComplex.build(field, 0, [1, 1], {1: d})))


def odd_square_dg(field: Field) -> DGAlgebraNU:
    """x in degree 1 and x·x = y in degree 2, zero differential."""
    carrier = ChainComplex.build(field, 1, [1, 1])

    def product(p: int, a: int, q: int, b: int) -> Optional[list[object]]:
        return [field.one] if (p, q) == (1, 1) else None

    return DGAlgebraNU(carrier, mult_from_products(carrier, product))


def dg_corpus(field: Field = Q) -> list[tuple[str, DGAlgebraNU]]:
    out = [
        ("square_zero_dg(0,0)", square_zero_dg(field, 0, 0)),
        ("square_zero_dg(0,1)", square_zero_dg(field, 0, 1)),
        ("square_zero_dg(1,1)", square_zero_dg(field, 1, 1)),
        ("square_zero_dg(-1,2)", square_zero_dg(field, -1, 2)),
        ("contractible_pair", contractible_pair_dg(field)),
        ("odd_square", odd_square_dg(field)),
    ]
    for n in range(2, 5):
        kernel, _ = augmentation_kernel(truncated_polynomial(field, n))
        out.append((f"Ker(truncated_polynomial({field},{n}))", algebra_to_dg(kernel)))
    return out
