"""
Smith ideals of vector spaces: monoids j: I -> R for the pushout product.

The constructions here go both ways between augmented algebras and
unit-cokernel Smith ideals; `verify_smith_ideal` checks the monoid axioms
exactly and names the failing basis element.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from typing import Optional

from algebras import (
    AugmentedAlgebra,
    NonUnitalAlgebra,
    UnitalAlgebra,
    unitalize,
)
from arrow_category import (
    CUBE_LABELS,
    ArrowError,
    ArrowMorphism,
    ArrowObject,
    box_braiding,
    box_left_unitor,
    box_morphism,
    box_right_unitor,
    compose,
    cube_injections_left,
    cube_injections_right,
    identity_morphism,
    is_im_local,
    morphism,
    morphism_difference,
    pushout_product,
    unit_box,
)
from exact_linalg import (
    LinalgError,
    Matrix,
    column_vector,
    cokernel_projection,
    factor_through_cokernel,
    factor_through_kernel,
    hstack,
    identity,
    kernel_basis,
    kronecker,
    row_vector,
    zeros,
)
from reports import CheckRecord, all_passed, check, fail

log = logging.getLogger(__name__)


class SmithIdealError(RuntimeError):
    """Raised when Smith ideal data cannot be built."""


class NotUnitCokernel(SmithIdealError):
    """Raised when Coker(j) is not an augmentation of R."""


@dataclass(frozen=True)
class SmithIdealVect:
    j: ArrowObject
    mu: ArrowMorphism
    eta: ArrowMorphism

    @property
    def ideal_dim(self) -> int:
        return self.j.dom_dim

    @property
    def ring_dim(self) -> int:
        return self.j.cod_dim


def multiplication_morphism(j: ArrowObject, mult: Matrix) -> ArrowMorphism:
    """μ: j □ j -> j from a multiplication R⊗R -> R that maps I⊗R and R⊗I into I."""
    k = j.field
    n = j.cod_dim
    box = pushout_product(j, j)
    left = factor_through_kernel(j.f, mult @ kronecker(j.f, identity(k, n)))
    right = factor_through_kernel(j.f, mult @ kronecker(identity(k, n), j.f))
    comp0 = factor_through_cokernel(
        box.pushout.projection, hstack(k, j.dom_dim, left, right)
    )
    return morphism(box.arrow, j, comp0, mult)


def unit_morphism(j: ArrowObject, unit: Matrix) -> ArrowMorphism:
    """η: (0 -> k) -> j with comp1 the unit column."""
    k = j.field
    return morphism(unit_box(k), j, zeros(k, j.dom_dim, 0), unit)


def smith_from_augmented(b: AugmentedAlgebra) -> SmithIdealVect:
    k = b.field
    n = b.dim
    eps = row_vector(k, b.eps)
    incl = kernel_basis(eps)
    mult = b.mult_matrix
    closed = (
        (eps @ mult @ kronecker(incl, identity(k, n))).is_zero()
        and (eps @ mult @ kronecker(identity(k, n), incl)).is_zero()
    )
    if not closed:
        raise SmithIdealError("Ker(ε) is not a two-sided ideal")
    j = ArrowObject(incl)
    mu = multiplication_morphism(j, mult)
    eta = unit_morphism(j, column_vector(k, b.unit))
    log.debug("Smith ideal %d -> %d built from augmented algebra", j.dom_dim, n)
    return SmithIdealVect(j, mu, eta)


def _tensor_coordinates(index: int, dims: tuple[int, ...]) -> tuple[int, ...]:
    out = []
    for d in reversed(dims):
        index, r = divmod(index, d)
        out.append(r)
    return tuple(reversed(out))


def _morphism_record(name: str, lhs: ArrowMorphism, rhs: ArrowMorphism) -> CheckRecord:
    diff = morphism_difference(lhs, rhs)
    return check(name, diff is None, diff or "")


def _guarded(name: str, build) -> list[CheckRecord]:
    try:
        return build()
    except (LinalgError, ArrowError) as exc:
        return [fail(name, str(exc))]


def verify_smith_ideal(s: SmithIdealVect, commutative: bool = False) -> list[CheckRecord]:
    j = s.j
    k = j.field
    records: list[CheckRecord] = []

    box = pushout_product(j, j)
    shapes_ok = s.mu.src == box.arrow and s.mu.dst == j
    records.append(check("mu_shape", shapes_ok, "μ is not a map j□j -> j"))
    records.append(
        check("eta_shape", s.eta.src == unit_box(k) and s.eta.dst == j, "η is not a map (0->k) -> j")
    )
    if not all_passed(records):
        return records

    w = s.mu.square_witness()
    records.append(check("mu_square", w is None, f"entry {w}"))
    w = s.eta.square_witness()
    records.append(check("eta_square", w is None, f"entry {w}"))

    ident = identity_morphism(j)
    records += _guarded(
        "unit_left",
        lambda: [
            _morphism_record(
                "unit_left", compose(s.mu, box_morphism(s.eta, ident)), box_left_unitor(j)
            )
        ],
    )
    records += _guarded(
        "unit_right",
        lambda: [
            _morphism_record(
                "unit_right", compose(s.mu, box_morphism(ident, s.eta)), box_right_unitor(j)
            )
        ],
    )
    records += _guarded("associativity", lambda: _associativity_records(s))
    if commutative:
        records += _guarded(
            "commutativity",
            lambda: [_morphism_record("commutativity", compose(s.mu, box_braiding(j, j)), s.mu)],
        )
    return records


def _associativity_records(s: SmithIdealVect) -> list[CheckRecord]:
    j = s.j
    ident = identity_morphism(j)
    i_dim, r_dim = j.dom_dim, j.cod_dim
    left = compose(s.mu, box_morphism(s.mu, ident))
    right = compose(s.mu, box_morphism(ident, s.mu))
    records: list[CheckRecord] = []

    c = left.comp1.first_difference(right.comp1)
    witness = ""
    if c is not None:
        witness = f"basis {_tensor_coordinates(c[1], (r_dim, r_dim, r_dim))} row {c[0]}"
    records.append(check("assoc_comp1", c is None, witness))

    inj_left = cube_injections_left(j, j, j)
    inj_right = cube_injections_right(j, j, j)
    records.append(check("assoc_cube_left_epi", inj_left.jointly_epimorphic(), "cube injections miss a direction"))
    records.append(check("assoc_cube_right_epi", inj_right.jointly_epimorphic(), "cube injections miss a direction"))

    corners = {
        "X0Y1Z1": (i_dim, r_dim, r_dim),
        "X1Y0Z1": (r_dim, i_dim, r_dim),
        "X1Y1Z0": (r_dim, r_dim, i_dim),
    }
    for label, a, b in zip(CUBE_LABELS, inj_left.maps, inj_right.maps):
        c = (left.comp0 @ a).first_difference(right.comp0 @ b)
        witness = ""
        if c is not None:
            witness = f"basis {_tensor_coordinates(c[1], corners[label])} row {c[0]}"
        records.append(check(f"assoc_comp0[{label}]", c is None, witness))
    return records


def unit_cokernel_augmentation(s: SmithIdealVect) -> Optional[Matrix]:
    """ε = cok(j) normalized so ε(1) = 1, when it is multiplicative; else None."""
    q = cokernel_projection(s.j.f)
    if q.rows != 1:
        return None
    k = s.j.field
    at_unit = (q @ s.eta.comp1)[0, 0]
    if not at_unit:
        return None
    eps = q.scale(k.inv(at_unit))
    if eps @ s.mu.comp1 != kronecker(eps, eps):
        return None
    return eps


def is_unit_cokernel(s: SmithIdealVect) -> bool:
    return unit_cokernel_augmentation(s) is not None


def cok_smith(s: SmithIdealVect) -> AugmentedAlgebra:
    eps = unit_cokernel_augmentation(s)
    if eps is None:
        raise NotUnitCokernel(
            f"Coker(j) has dimension {s.ring_dim - s.j.f.rank()} or is not multiplicative"
        )
    base = NonUnitalAlgebra.from_mult_matrix(s.mu.comp1)
    return AugmentedAlgebra(UnitalAlgebra(base, s.eta.comp1.entries), eps.entries)


def nu_algebra_as_smith(a: NonUnitalAlgebra) -> SmithIdealVect:
    s = smith_from_augmented(unitalize(a))
    if not is_im_local(s.j):
        raise SmithIdealError("j -> im(j) is not an isomorphism")
    return s


def is_nonunital_algebra_object(s: SmithIdealVect) -> list[CheckRecord]:
    """Monoid axioms, j -> im(j) invertible, and a unit cokernel."""
    records = verify_smith_ideal(s)
    records.append(check("im_local", is_im_local(s.j), "j is not a monomorphism"))
    records.append(check("unit_cokernel", is_unit_cokernel(s), "Coker(j) is not an augmentation"))
    return records


def smith_ideal_comparison(
    s: SmithIdealVect,
    t: SmithIdealVect,
    ring_map: Optional[Matrix] = None,
) -> ArrowMorphism:
    """The arrow map j_s -> j_t over `ring_map` (identity by default).

    Raises NoFactorization when the image of I_s is not inside I_t."""
    k = s.j.field
    comp1 = ring_map if ring_map is not None else identity(k, s.ring_dim)
    comp0 = factor_through_kernel(t.j.f, comp1 @ s.j.f)
    return morphism(s.j, t.j, comp0, comp1)


def check_smith_morphism(
    s: SmithIdealVect, t: SmithIdealVect, alpha: ArrowMorphism
) -> list[CheckRecord]:
    records = [
        check("square", alpha.commutes(), f"entry {alpha.square_witness()}"),
    ]
    records += _guarded(
        "preserves_mu",
        lambda: [
            _morphism_record(
                "preserves_mu", compose(alpha, s.mu), compose(t.mu, box_morphism(alpha, alpha))
            )
        ],
    )
    records += _guarded(
        "preserves_eta", lambda: [_morphism_record("preserves_eta", compose(alpha, s.eta), t.eta)]
    )
    records.append(check("iso", alpha.is_iso(), "components are not invertible"))
    return records


@dataclass(frozen=True)
class Mutation:
    smith: SmithIdealVect
    component: int
    entry: tuple[int, int]

    def describe(self) -> str:
        return f"μ comp{self.component} entry {self.entry}"


def mutate_smith_ideal(s: SmithIdealVect, seed: int) -> Mutation:
    """Alter one entry of μ by a nonzero amount."""
    rng = random.Random(seed)
    k = s.j.field
    mu = s.mu
    size0 = mu.comp0.rows * mu.comp0.cols
    size1 = mu.comp1.rows * mu.comp1.cols
    if size0 + size1 == 0:
        raise SmithIdealError("μ has no entries to alter")
    pick = rng.randrange(size0 + size1)
    component, target = (0, mu.comp0) if pick < size0 else (1, mu.comp1)
    offset = pick if component == 0 else pick - size0
    i, c = divmod(offset, target.cols)
    if k.is_rational:
        delta = k.coerce(rng.choice([-2, -1, 1, 2, 3]))
    else:
        delta = k.coerce(rng.randrange(1, k.characteristic))
    changed = target.with_entry(i, c, k.reduce(target[i, c] + delta))
    comp0, comp1 = (changed, mu.comp1) if component == 0 else (mu.comp0, changed)
    mutated = SmithIdealVect(s.j, ArrowMorphism(mu.src, mu.dst, comp0, comp1), s.eta)
    return Mutation(mutated, component, (i, c))
