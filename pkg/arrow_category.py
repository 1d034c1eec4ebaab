"""
The arrow category Ar(Vect_k) with its tensor and push-out product
structures, the cok ⊣ ker adjunction, and the image/coimage localizations.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

from exact_linalg import (
    Field,
    FieldMismatch,
    LinalgError,
    Matrix,
    Pushout,
    ShapeMismatch,
    cokernel_projection,
    commutation_matrix,
    factor_through_cokernel,
    factor_through_kernel,
    hstack,
    identity,
    inverse,
    is_iso,
    is_mono,
    kernel_basis,
    kronecker,
    normal_form_bases,
    pushout,
    zeros,
)
from reports import CheckRecord, check, fail, ok

log = logging.getLogger(__name__)


class ArrowError(RuntimeError):
    """Base exception for arrow-category constructions."""


class NotCommuting(ArrowError):
    """Raised when a morphism of arrows does not form a commuting square."""


class ComparisonNotIso(ArrowError):
    """Raised when a comparison map that must be invertible is not."""


@dataclass(frozen=True)
class ArrowObject:
    """A linear map f: X0 -> X1, stored as a cod_dim x dom_dim matrix."""

    f: Matrix

    @property
    def field(self) -> Field:
        return self.f.field

    @property
    def dom_dim(self) -> int:
        return self.f.cols

    @property
    def cod_dim(self) -> int:
        return self.f.rows


@dataclass(frozen=True)
class ArrowMorphism:
    """A square comp1 ∘ src.f = dst.f ∘ comp0. Commutation is not enforced here;
    use `morphism()` for a checked constructor."""

    src: ArrowObject
    dst: ArrowObject
    comp0: Matrix
    comp1: Matrix

    def __post_init__(self) -> None:
        if self.comp0.shape != (self.dst.dom_dim, self.src.dom_dim):
            raise ShapeMismatch(
                f"comp0 is {self.comp0.shape}, expected {(self.dst.dom_dim, self.src.dom_dim)}"
            )
        if self.comp1.shape != (self.dst.cod_dim, self.src.cod_dim):
            raise ShapeMismatch(
                f"comp1 is {self.comp1.shape}, expected {(self.dst.cod_dim, self.src.cod_dim)}"
            )

    def square_witness(self) -> tuple[int, int] | None:
        return (self.dst.f @ self.comp0).first_difference(self.comp1 @ self.src.f)

    def commutes(self) -> bool:
        return self.square_witness() is None

    def is_iso(self) -> bool:
        return is_iso(self.comp0) and is_iso(self.comp1)


def morphism(src: ArrowObject, dst: ArrowObject, comp0: Matrix, comp1: Matrix) -> ArrowMorphism:
    alpha = ArrowMorphism(src, dst, comp0, comp1)
    witness = alpha.square_witness()
    if witness is not None:
        raise NotCommuting(f"square fails at entry {witness}")
    return alpha


def identity_morphism(f: ArrowObject) -> ArrowMorphism:
    k = f.field
    return ArrowMorphism(f, f, identity(k, f.dom_dim), identity(k, f.cod_dim))


def compose(beta: ArrowMorphism, alpha: ArrowMorphism) -> ArrowMorphism:
    """beta ∘ alpha."""
    if alpha.dst != beta.src:
        raise ArrowError("cannot compose: target of the first is not the source of the second")
    return ArrowMorphism(alpha.src, beta.dst, beta.comp0 @ alpha.comp0, beta.comp1 @ alpha.comp1)


def morphism_difference(a: ArrowMorphism, b: ArrowMorphism) -> str | None:
    """Human-readable location of the first disagreement, or None."""
    for label, x, y in (("comp0", a.comp0, b.comp0), ("comp1", a.comp1, b.comp1)):
        if x.shape != y.shape:
            return f"{label} shapes {x.shape} vs {y.shape}"
        at = x.first_difference(y)
        if at is not None:
            return f"{label} entry {at}"
    return None


def _same_field(f: ArrowObject, g: ArrowObject) -> Field:
    if f.field != g.field:
        raise FieldMismatch(f"{f.field} vs {g.field}")
    return f.field


def unit_tensor(field: Field) -> ArrowObject:
    return ArrowObject(identity(field, 1))


def unit_box(field: Field) -> ArrowObject:
    return ArrowObject(zeros(field, 1, 0))


def tensor_arrow(f: ArrowObject, g: ArrowObject) -> ArrowObject:
    _same_field(f, g)
    return ArrowObject(kronecker(f.f, g.f))


def tensor_morphism(alpha: ArrowMorphism, beta: ArrowMorphism) -> ArrowMorphism:
    return ArrowMorphism(
        tensor_arrow(alpha.src, beta.src),
        tensor_arrow(alpha.dst, beta.dst),
        kronecker(alpha.comp0, beta.comp0),
        kronecker(alpha.comp1, beta.comp1),
    )


@dataclass(frozen=True)
class PushoutProduct:
    """
    f □ g with its presentation:

    - arrow: (X0⊗Y1) ⨿_{X0⊗Y0} (X1⊗Y0) -> X1⊗Y1
    - i01: X0⊗Y1 -> pushout
    - i10: X1⊗Y0 -> pushout
    """

    arrow: ArrowObject
    i01: Matrix
    i10: Matrix
    pushout: Pushout


def pushout_product(f: ArrowObject, g: ArrowObject) -> PushoutProduct:
    k = _same_field(f, g)
    x0, x1, y0, y1 = f.dom_dim, f.cod_dim, g.dom_dim, g.cod_dim
    po = pushout(kronecker(identity(k, x0), g.f), kronecker(f.f, identity(k, y0)))
    legs = hstack(
        k,
        x1 * y1,
        kronecker(f.f, identity(k, y1)),
        kronecker(identity(k, x1), g.f),
    )
    h = factor_through_cokernel(po.projection, legs)
    log.debug("pushout product of %s and %s: %s", f.f.shape, g.f.shape, h.shape)
    return PushoutProduct(arrow=ArrowObject(h), i01=po.in_b, i10=po.in_c, pushout=po)


def box_morphism(alpha: ArrowMorphism, beta: ArrowMorphism) -> ArrowMorphism:
    """alpha □ beta, induced on the pushouts. Raises NoFactorization when an
    input square does not commute."""
    src = pushout_product(alpha.src, beta.src)
    dst = pushout_product(alpha.dst, beta.dst)
    k = alpha.src.field
    legs = hstack(
        k,
        dst.pushout.dim,
        dst.i01 @ kronecker(alpha.comp0, beta.comp1),
        dst.i10 @ kronecker(alpha.comp1, beta.comp0),
    )
    comp0 = factor_through_cokernel(src.pushout.projection, legs)
    return ArrowMorphism(src.arrow, dst.arrow, comp0, kronecker(alpha.comp1, beta.comp1))


def box_left_unitor(f: ArrowObject) -> ArrowMorphism:
    """unit_box □ f -> f."""
    k = f.field
    box = pushout_product(unit_box(k), f)
    legs = hstack(k, f.dom_dim, zeros(k, f.dom_dim, 0), identity(k, f.dom_dim))
    comp0 = factor_through_cokernel(box.pushout.projection, legs)
    return morphism(box.arrow, f, comp0, identity(k, f.cod_dim))


def box_right_unitor(f: ArrowObject) -> ArrowMorphism:
    """f □ unit_box -> f."""
    k = f.field
    box = pushout_product(f, unit_box(k))
    legs = hstack(k, f.dom_dim, identity(k, f.dom_dim), zeros(k, f.dom_dim, 0))
    comp0 = factor_through_cokernel(box.pushout.projection, legs)
    return morphism(box.arrow, f, comp0, identity(k, f.cod_dim))


def box_braiding(f: ArrowObject, g: ArrowObject) -> ArrowMorphism:
    """The symmetry f □ g -> g □ f induced by swapping tensor factors."""
    k = _same_field(f, g)
    fg = pushout_product(f, g)
    gf = pushout_product(g, f)
    legs = hstack(
        k,
        gf.pushout.dim,
        gf.i10 @ commutation_matrix(k, f.dom_dim, g.cod_dim),
        gf.i01 @ commutation_matrix(k, f.cod_dim, g.dom_dim),
    )
    comp0 = factor_through_cokernel(fg.pushout.projection, legs)
    return morphism(fg.arrow, gf.arrow, comp0, commutation_matrix(k, f.cod_dim, g.cod_dim))


@dataclass(frozen=True)
class CubeInjections:
    """The three maps X0⊗Y1⊗Z1, X1⊗Y0⊗Z1, X1⊗Y1⊗Z0 into a triple □-product."""

    domain_dim: int
    maps: tuple[Matrix, Matrix, Matrix]

    def jointly_epimorphic(self) -> bool:
        if not self.maps:
            return self.domain_dim == 0
        k = self.maps[0].field
        return hstack(k, self.domain_dim, *self.maps).rank() == self.domain_dim


CUBE_LABELS = ("X0Y1Z1", "X1Y0Z1", "X1Y1Z0")


def cube_injections_left(f: ArrowObject, g: ArrowObject, h: ArrowObject) -> CubeInjections:
    """Injections into dom((f □ g) □ h)."""
    k = f.field
    fg = pushout_product(f, g)
    outer = pushout_product(fg.arrow, h)
    z1 = identity(k, h.cod_dim)
    return CubeInjections(
        domain_dim=outer.pushout.dim,
        maps=(
            outer.i01 @ kronecker(fg.i01, z1),
            outer.i01 @ kronecker(fg.i10, z1),
            outer.i10,
        ),
    )


def cube_injections_right(f: ArrowObject, g: ArrowObject, h: ArrowObject) -> CubeInjections:
    """Injections into dom(f □ (g □ h))."""
    k = f.field
    gh = pushout_product(g, h)
    outer = pushout_product(f, gh.arrow)
    x1 = identity(k, f.cod_dim)
    return CubeInjections(
        domain_dim=outer.pushout.dim,
        maps=(
            outer.i01,
            outer.i10 @ kronecker(x1, gh.i01),
            outer.i10 @ kronecker(x1, gh.i10),
        ),
    )


def cok(f: ArrowObject) -> ArrowObject:
    return ArrowObject(cokernel_projection(f.f))


def ker(f: ArrowObject) -> ArrowObject:
    return ArrowObject(kernel_basis(f.f))


def cok_morphism(alpha: ArrowMorphism) -> ArrowMorphism:
    src, dst = cok(alpha.src), cok(alpha.dst)
    comp1 = factor_through_cokernel(src.f, dst.f @ alpha.comp1)
    return ArrowMorphism(src, dst, alpha.comp1, comp1)


def ker_morphism(alpha: ArrowMorphism) -> ArrowMorphism:
    src, dst = ker(alpha.src), ker(alpha.dst)
    comp0 = factor_through_kernel(dst.f, alpha.comp0 @ src.f)
    return ArrowMorphism(src, dst, comp0, alpha.comp0)


def adjunction_unit(f: ArrowObject) -> ArrowMorphism:
    """f -> ker(cok(f)); comp1 is the identity on X1."""
    target = ker(cok(f))
    comp0 = factor_through_kernel(target.f, f.f)
    return morphism(f, target, comp0, identity(f.field, f.cod_dim))


def adjunction_counit(g: ArrowObject) -> ArrowMorphism:
    """cok(ker(g)) -> g; comp0 is the identity on Y0."""
    source = cok(ker(g))
    comp1 = factor_through_cokernel(source.f, g.f)
    return morphism(source, g, identity(g.field, g.dom_dim), comp1)


def adjoint_transpose_fwd(phi: ArrowMorphism, f: ArrowObject) -> ArrowMorphism:
    """(cok(f) -> g)  |->  (f -> ker(g))."""
    if phi.src != cok(f):
        raise ArrowError("transpose expects a morphism out of cok(f)")
    g = phi.dst
    target = ker(g)
    comp0 = factor_through_kernel(target.f, phi.comp0 @ f.f)
    return morphism(f, target, comp0, phi.comp0)


def adjoint_transpose_bwd(psi: ArrowMorphism, g: ArrowObject) -> ArrowMorphism:
    """(f -> ker(g))  |->  (cok(f) -> g)."""
    if psi.dst != ker(g):
        raise ArrowError("transpose expects a morphism into ker(g)")
    f = psi.src
    source = cok(f)
    comp1 = factor_through_cokernel(source.f, g.f @ psi.comp1)
    return morphism(source, g, psi.comp1, comp1)


def triangle_identities(f: ArrowObject, g: ArrowObject) -> list[CheckRecord]:
    """(ε·cok)∘(cok·η) = id_{cok f} and (ker·ε)∘(η·ker) = id_{ker g}."""
    records: list[CheckRecord] = []
    left = compose(adjunction_counit(cok(f)), cok_morphism(adjunction_unit(f)))
    diff = morphism_difference(left, identity_morphism(cok(f)))
    records.append(check("triangle_cok", diff is None, diff or ""))
    right = compose(ker_morphism(adjunction_counit(g)), adjunction_unit(ker(g)))
    diff = morphism_difference(right, identity_morphism(ker(g)))
    records.append(check("triangle_ker", diff is None, diff or ""))
    return records


def strong_monoidal_comparison(f: ArrowObject, g: ArrowObject) -> ArrowMorphism:
    """cok(f □ g) -> cok(f) ⊗ cok(g)."""
    k = _same_field(f, g)
    source = cok(pushout_product(f, g).arrow)
    target = tensor_arrow(cok(f), cok(g))
    comp1 = factor_through_cokernel(source.f, target.f)
    alpha = morphism(source, target, identity(k, source.dom_dim), comp1)
    if not alpha.is_iso():
        raise ComparisonNotIso(
            f"cok(f□g) has rank {source.cod_dim}, cok(f)⊗cok(g) has rank {target.cod_dim}"
        )
    return alpha


def lax_comparison(f: ArrowObject, g: ArrowObject) -> ArrowMorphism:
    """ker(f) □ ker(g) -> ker(f ⊗ g)."""
    k = _same_field(f, g)
    source = pushout_product(ker(f), ker(g)).arrow
    target = ker(tensor_arrow(f, g))
    comp0 = factor_through_kernel(target.f, source.f)
    return morphism(source, target, comp0, identity(k, f.dom_dim * g.dom_dim))


def im(f: ArrowObject) -> ArrowObject:
    return ker(cok(f))


def coim(f: ArrowObject) -> ArrowObject:
    return cok(ker(f))


def L_im(f: ArrowObject) -> tuple[ArrowObject, ArrowMorphism]:
    """im(f) with the localization unit f -> im(f)."""
    unit = adjunction_unit(f)
    return unit.dst, unit


def L_coim(g: ArrowObject) -> tuple[ArrowObject, ArrowMorphism]:
    """coim(g) with the counit coim(g) -> g."""
    counit = adjunction_counit(g)
    return counit.src, counit


def is_im_local(f: ArrowObject) -> bool:
    return L_im(f)[1].is_iso()


def is_coim_local(g: ArrowObject) -> bool:
    return L_coim(g)[1].is_iso()


def arrow_isomorphism(f: ArrowObject, g: ArrowObject) -> ArrowMorphism | None:
    """An explicit isomorphism f -> g, or None when none exists.

    Arrows of vector spaces are classified by (dom, cod, rank)."""
    _same_field(f, g)
    if f.f.shape != g.f.shape or f.f.rank() != g.f.rank():
        return None
    sf, tf = normal_form_bases(f.f)
    sg, tg = normal_form_bases(g.f)
    return morphism(f, g, sg @ inverse(sf), tg @ inverse(tf))


def cok_equivalence_check(f: ArrowObject) -> list[CheckRecord]:
    """On Ar^im, cok lands in Ar^coim and ker recovers f up to the unit."""
    if not is_im_local(f):
        return [fail("im_local", "unit f -> im(f) is not invertible (f is not mono)")]
    c = cok(f)
    records = [ok("im_local"), check("cok_is_coim_local", is_coim_local(c), "counit of cok(f) not invertible")]
    back = ker(c)
    try:
        unit = morphism(f, back, factor_through_kernel(back.f, f.f), identity(f.field, f.cod_dim))
    except LinalgError as exc:
        records.append(fail("ker_cok_recovers_f", str(exc)))
    else:
        records.append(check("ker_cok_recovers_f", unit.is_iso(), "comparison f -> ker(cok f) not invertible"))
    return records
