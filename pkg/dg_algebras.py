"""
Strict dg algebras over k[0]: non-unital ones, augmented ones, the
degreewise unitalization ⇄ augmentation-kernel equivalence, and the
homotopy check that non-unital algebras sit inside augmented ones.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from algebras import (
    AlgebraError,
    AugmentedAlgebra,
    NonUnitalAlgebra,
    NotAssociative,
)
from chain_complexes import (
    ChainComplex,
    ChainComplexError,
    ChainMap,
    DGSmithIdeal,
    chain_map,
    checked,
    checked_map,
    compose_maps,
    concentrated,
    cone,
    dg_smith_ideal,
    identity_map,
    is_quasi_iso,
    stable_counit_check,
    stable_unit_check,
    symmetry_map,
    tensor_blocks,
    tensor_complex,
    tensor_map,
    unit_complex,
    verify_dg_smith_ideal,
    associator,
)
from exact_linalg import (
    LinalgError,
    Matrix,
    NoFactorization,
    column_vector,
    factor_through_kernel,
    from_columns,
    hstack,
    identity,
    is_iso,
    kernel_basis,
    row_vector,
    vstack,
    zeros,
)
from reports import CheckRecord, all_passed, check, fail

log = logging.getLogger(__name__)

Product = Callable[[int, int, int, int], Optional[Sequence[object]]]


class DGAlgebraError(RuntimeError):
    """Raised when dg algebra data are inconsistent."""


def _map_record(name: str, lhs: ChainMap, rhs: ChainMap) -> CheckRecord:
    n = lhs.difference(rhs)
    if n is None:
        return check(name, True)
    at = lhs.component(n).first_difference(rhs.component(n))
    return fail(name, f"degree {n} entry {at}")


def _unitor(c: ChainComplex, left: bool) -> ChainMap:
    k0 = unit_complex(c.field)
    src = tensor_complex(k0, c) if left else tensor_complex(c, k0)
    return chain_map(src, c, {n: identity(c.field, c.dim(n)) for n in c.degrees})


@dataclass(frozen=True)
class DGAlgebraNU:
    carrier: ChainComplex
    mult: ChainMap

    @property
    def field(self):
        return self.carrier.field

    def checks(self, commutative: bool = False) -> list[CheckRecord]:
        c = self.carrier
        w = c.d_squared_witness()
        records = [check("d_squared", w is None, f"degree {w}")]
        if w is not None:
            return records
        shaped = self.mult.src == tensor_complex(c, c) and self.mult.dst == c
        records.append(check("mult_shape", shaped, "mult is not a map C⊗C -> C"))
        if not shaped:
            return records
        n = self.mult.chain_witness()
        records.append(check("leibniz", n is None, f"degree {n}"))
        records.append(_map_record("associativity", *_associativity_sides(self)))
        if commutative:
            records.append(
                _map_record("commutativity", compose_maps(self.mult, symmetry_map(c, c)), self.mult)
            )
        return records


def _associativity_sides(a: DGAlgebraNU) -> tuple[ChainMap, ChainMap]:
    c, m = a.carrier, a.mult
    ident = identity_map(c)
    lhs = compose_maps(m, tensor_map(m, ident))
    rhs = compose_maps(compose_maps(m, tensor_map(ident, m)), associator(c, c, c))
    return lhs, rhs


@dataclass(frozen=True)
class AugmentedDGAlgebra:
    carrier: ChainComplex
    mult: ChainMap
    unit: ChainMap
    eps: ChainMap

    @property
    def field(self):
        return self.carrier.field

    @property
    def nonunital(self) -> DGAlgebraNU:
        return DGAlgebraNU(self.carrier, self.mult)

    def checks(self, commutative: bool = False) -> list[CheckRecord]:
        records = self.nonunital.checks(commutative)
        if not all_passed(records):
            return records
        c = self.carrier
        k0 = unit_complex(self.field)
        shaped = (
            self.unit.src == k0 and self.unit.dst == c
            and self.eps.src == c and self.eps.dst == k0
        )
        records.append(check("unit_eps_shape", shaped, "unit or ε has the wrong source or target"))
        if not shaped:
            return records
        for name, f in (("unit_chain_map", self.unit), ("eps_chain_map", self.eps)):
            n = f.chain_witness()
            records.append(check(name, n is None, f"degree {n}"))
        ident = identity_map(c)
        records.append(
            _map_record("unit_left", compose_maps(self.mult, tensor_map(self.unit, ident)), _unitor(c, True))
        )
        records.append(
            _map_record("unit_right", compose_maps(self.mult, tensor_map(ident, self.unit)), _unitor(c, False))
        )
        k0_mult = _unitor(k0, True)
        records.append(
            _map_record(
                "eps_multiplicative",
                compose_maps(self.eps, self.mult),
                compose_maps(k0_mult, tensor_map(self.eps, self.eps)),
            )
        )
        records.append(_map_record("eps_splits_unit", compose_maps(self.eps, self.unit), identity_map(k0)))
        return records


def mult_from_products(carrier: ChainComplex, product: Product) -> ChainMap:
    """The multiplication whose value on basis pair (p, a) ⊗ (q, b) is
    product(p, a, q, b) in C_{p+q} (None meaning zero)."""
    k = carrier.field
    src = tensor_complex(carrier, carrier)
    comps: dict[int, Matrix] = {}
    for n in src.degrees:
        rows = carrier.dim(n)
        columns = []
        for p, q, _, _ in tensor_blocks(carrier, carrier, n):
            for a in range(carrier.dim(p)):
                for b in range(carrier.dim(q)):
                    v = product(p, a, q, b) if rows else None
                    columns.append(list(v) if v is not None else [k.zero] * rows)
        comps[n] = from_columns(k, columns, rows)
    return chain_map(src, carrier, comps)


def zero_dg_algebra(carrier: ChainComplex) -> DGAlgebraNU:
    return DGAlgebraNU(carrier, chain_map(tensor_complex(carrier, carrier), carrier, {}))


def algebra_to_dg(a: NonUnitalAlgebra) -> DGAlgebraNU:
    c = concentrated(a.field, a.dim, 0)
    return DGAlgebraNU(c, chain_map(tensor_complex(c, c), c, {0: a.mult_matrix}))


def augmented_to_dg(b: AugmentedAlgebra) -> AugmentedDGAlgebra:
    k = b.field
    c = concentrated(k, b.dim, 0)
    k0 = unit_complex(k)
    return AugmentedDGAlgebra(
        c,
        chain_map(tensor_complex(c, c), c, {0: b.mult_matrix}),
        chain_map(k0, c, {0: column_vector(k, b.unit)}),
        chain_map(c, k0, {0: row_vector(k, b.eps)}),
    )


def _require_valid(a: DGAlgebraNU) -> None:
    for record in a.checks():
        if record.passed:
            continue
        if record.name == "associativity":
            raise NotAssociative(f"associativity fails at {record.witness}")
        raise DGAlgebraError(f"{record.name} fails: {record.witness}")


def _embedding(a: ChainComplex, n: int) -> Matrix:
    """A_n -> (k[0] ⊕ A)_n; the unit coordinate comes first in degree 0."""
    k = a.field
    m = a.dim(n)
    if n == 0:
        return vstack(k, m, zeros(k, 1, m), identity(k, m))
    return identity(k, m)


def dg_unitalize(a: DGAlgebraNU) -> AugmentedDGAlgebra:
    """k[0] ⊕ A with (m, x)(n, y) = (mn, n·x + m·y + xy), degreewise."""
    _require_valid(a)
    k = a.field
    c = a.carrier
    lo, hi = min(c.lo, 0), max(c.hi, 0)
    dims = [c.dim(n) + (1 if n == 0 else 0) for n in range(lo, hi + 1)]
    diffs = {
        n: _embedding(c, n - 1) @ c.d(n) @ _embedding(c, n).T for n in range(lo + 1, hi + 1)
    }
    carrier = checked(ChainComplex.build(k, lo, dims, diffs))
    offsets = {
        n: {(p, q): off for p, q, off, _ in tensor_blocks(c, c, n)}
        for n in range(2 * c.lo, 2 * c.hi + 1)
    }

    def basis(n: int, i: int) -> list[object]:
        return [k.one if t == i else k.zero for t in range(carrier.dim(n))]

    def product(p: int, x: int, q: int, y: int) -> Optional[Sequence[object]]:
        if p == 0 and x == 0:
            return basis(q, y)
        if q == 0 and y == 0:
            return basis(p, x)
        xa = x - 1 if p == 0 else x
        ya = y - 1 if q == 0 else y
        n = p + q
        column = a.mult.component(n).column(offsets[n][(p, q)] + xa * c.dim(q) + ya)
        return (_embedding(c, n) @ column_vector(k, column)).entries

    mult = mult_from_products(carrier, product)
    k0 = unit_complex(k)
    first = [k.one] + [k.zero] * c.dim(0)
    unit = chain_map(k0, carrier, {0: column_vector(k, first)})
    eps = chain_map(carrier, k0, {0: row_vector(k, first)})
    log.debug("dg unitalization over degrees [%d, %d]", lo, hi)
    return AugmentedDGAlgebra(carrier, mult, unit, eps)


def dg_augmentation_kernel(b: AugmentedDGAlgebra) -> tuple[DGAlgebraNU, ChainMap]:
    k = b.field
    c = b.carrier
    incl = {n: kernel_basis(b.eps.component(n)) for n in c.degrees}
    dims = [incl[n].cols for n in c.degrees]
    try:
        diffs = {
            n: factor_through_kernel(incl[n - 1], c.d(n) @ incl[n])
            for n in range(c.lo + 1, c.hi + 1)
        }
        kernel = checked(ChainComplex.build(k, c.lo, dims, diffs))
        j = checked_map(chain_map(kernel, c, incl))
        restricted = compose_maps(b.mult, tensor_map(j, j))
        kk = tensor_complex(kernel, kernel)
        comps = {
            n: factor_through_kernel(j.component(n), restricted.component(n))
            for n in kk.degrees
        }
    except (NoFactorization, ChainComplexError) as exc:
        raise DGAlgebraError(f"Ker(ε) is not a dg ideal: {exc}") from exc
    return DGAlgebraNU(kernel, chain_map(kk, kernel, comps)), j


def check_dg_morphism(
    src: AugmentedDGAlgebra, dst: AugmentedDGAlgebra, phi: ChainMap
) -> list[CheckRecord]:
    n = phi.chain_witness()
    records = [check("chain_map", n is None, f"degree {n}")]
    bad = next((d for d in phi.degrees if not is_iso(phi.component(d))), None)
    records.append(check("invertible", bad is None, f"degree {bad}"))
    records.append(
        _map_record(
            "multiplicative",
            compose_maps(phi, src.mult),
            compose_maps(dst.mult, tensor_map(phi, phi)),
        )
    )
    records.append(_map_record("unital", compose_maps(phi, src.unit), dst.unit))
    records.append(_map_record("augmentation_preserving", compose_maps(dst.eps, phi), src.eps))
    return records


def dg_roundtrip_aug(b: AugmentedDGAlgebra) -> tuple[AugmentedDGAlgebra, ChainMap]:
    """k[0] ⊕ Ker(ε) and the map to B, (m, x) |-> m·1 + x."""
    k = b.field
    kernel, j = dg_augmentation_kernel(b)
    u = dg_unitalize(kernel)
    c = b.carrier
    comps = {
        n: hstack(k, c.dim(0), b.unit.component(0), j.component(0)) if n == 0 else j.component(n)
        for n in u.carrier.degrees
    }
    return u, chain_map(u.carrier, c, comps)


def dg_roundtrip_nu(a: DGAlgebraNU) -> list[CheckRecord]:
    kernel, _ = dg_augmentation_kernel(dg_unitalize(a))
    same_carrier = kernel.carrier == a.carrier
    records = [check("carrier_recovered", same_carrier, "Ker(ε) differs from A as a complex")]
    if same_carrier:
        n = kernel.mult.difference(a.mult)
        records.append(check("mult_recovered", n is None, f"degree {n}"))
    return records


def hocofib_augmentation(b: AugmentedDGAlgebra, j: ChainMap) -> tuple[ChainComplex, ChainMap, ChainMap]:
    """cone(j), its inclusion from B, and ε̄: cone(j) -> k[0]."""
    k = b.field
    z = cone(j)
    k0 = unit_complex(k)
    eps_bar = chain_map(z.complex, k0, {
        0: hstack(k, 1, zeros(k, 1, j.src.dim(-1)), b.eps.component(0)),
    })
    return z.complex, z.incl, eps_bar


def main_theorem_check(a: DGAlgebraNU) -> list[CheckRecord]:
    """Unit-cokernel and unit weak-equivalence checks for A ↪ k[0] ⊕ A."""
    try:
        b = dg_unitalize(a)
        kernel, j = dg_augmentation_kernel(b)
    except (AlgebraError, DGAlgebraError, ChainComplexError) as exc:
        return [fail("unitalize", str(exc))]

    records = [
        CheckRecord(f"augmented.{r.name}", r.passed, r.witness) for r in b.checks()
    ]
    records.append(check("kernel_recovers_input", kernel == a, "Ker(ε) differs from A"))

    _, incl, eps_bar = hocofib_augmentation(b, j)
    n = eps_bar.chain_witness()
    records.append(check("hocofib_chain_map", n is None, f"degree {n}"))
    if n is None:
        records.append(check("hocofib_weq_unit", is_quasi_iso(eps_bar), "cone(j) -> k[0] is not a quasi-isomorphism"))
        records.append(_map_record("hocofib_factors_augmentation", compose_maps(eps_bar, incl), b.eps))
    records.append(check("unit_comparison_weq", stable_unit_check(j), "j -> hofib(hocofib j) is not a weak equivalence"))
    records.append(check("counit_comparison_weq", stable_counit_check(b.eps), "hocofib(hofib ε) -> ε is not a weak equivalence"))

    try:
        smith = dg_smith_from_augmented(b)
    except (LinalgError, ChainComplexError) as exc:
        records.append(fail("smith.build", str(exc)))
    else:
        records += [
            CheckRecord(f"smith.{r.name}", r.passed, r.witness) for r in verify_dg_smith_ideal(smith)
        ]
    return records


def dg_smith_from_augmented(b: AugmentedDGAlgebra) -> DGSmithIdeal:
    _, j = dg_augmentation_kernel(b)
    return dg_smith_ideal(j, b.mult)
