import random

import pytest

from arrow_category import (
    ArrowObject,
    L_coim,
    L_im,
    NotCommuting,
    adjoint_transpose_bwd,
    adjoint_transpose_fwd,
    adjunction_counit,
    adjunction_unit,
    arrow_isomorphism,
    box_braiding,
    box_left_unitor,
    box_morphism,
    box_right_unitor,
    cok,
    cok_equivalence_check,
    coim,
    compose,
    cube_injections_left,
    cube_injections_right,
    identity_morphism,
    im,
    is_coim_local,
    is_im_local,
    ker,
    lax_comparison,
    morphism,
    morphism_difference,
    pushout_product,
    strong_monoidal_comparison,
    tensor_arrow,
    tensor_morphism,
    triangle_identities,
    unit_box,
    unit_tensor,
)
from corpus import random_arrow
from exact_linalg import Field, from_rows, identity, is_epi, is_mono, random_matrix, zeros
from reports import all_passed

Q = Field.rationals()

SEEDS = range(100)


def arrow(rows):
    return ArrowObject(from_rows(Q, rows))


class TestMorphisms:
    def test_non_commuting_square_is_rejected(self):
        f = arrow([[1]])
        with pytest.raises(NotCommuting):
            morphism(f, f, from_rows(Q, [[1]]), from_rows(Q, [[2]]))

    def test_identity_composes(self):
        f = arrow([[1, 2]])
        ident = identity_morphism(f)
        assert morphism_difference(compose(ident, ident), ident) is None


class TestMonoidalUnits:
    def test_box_unit_right(self):
        f = arrow([[1, 0], [0, 0]])
        assert box_right_unitor(f).is_iso()

    def test_box_unit_left(self):
        f = arrow([[1, 0], [0, 0]])
        assert box_left_unitor(f).is_iso()

    def test_tensor_unit(self):
        f = arrow([[1, 2], [3, 4]])
        assert tensor_arrow(unit_tensor(Q), f) == f

    def test_box_unit_squared(self):
        u = unit_box(Q)
        assert pushout_product(u, u).arrow == u

    def test_pushout_product_of_isos_is_iso(self):
        f = ArrowObject(identity(Q, 2))
        box = pushout_product(f, f).arrow
        assert box.f.shape == (4, 4) and is_epi(box.f)

    @pytest.mark.parametrize("seed", range(20))
    def test_braiding_is_involutive(self, seed):
        f = random_arrow(seed, 3, Q)
        g = random_arrow(seed + 1000, 3, Q)
        twice = compose(box_braiding(g, f), box_braiding(f, g))
        assert morphism_difference(twice, identity_morphism(twice.src)) is None

    @pytest.mark.parametrize("seed", range(30))
    def test_box_domain_of_monos(self, seed):
        f = im(random_arrow(seed, 4, Q))
        g = im(random_arrow(seed + 2000, 4, Q))
        assert is_mono(f.f) and is_mono(g.f)
        x0, x1, y0, y1 = f.dom_dim, f.cod_dim, g.dom_dim, g.cod_dim
        box = pushout_product(f, g)
        assert box.pushout.dim == x0 * y1 + x1 * y0 - x0 * y0
        assert box.arrow.dom_dim == box.pushout.dim

    @pytest.mark.parametrize("seed", range(20))
    def test_products_preserve_identities(self, seed):
        f = random_arrow(seed, 3, Q)
        g = random_arrow(seed + 3000, 3, Q)
        ident_f, ident_g = identity_morphism(f), identity_morphism(g)
        tensor = tensor_morphism(ident_f, ident_g)
        assert morphism_difference(tensor, identity_morphism(tensor_arrow(f, g))) is None
        box = box_morphism(ident_f, ident_g)
        assert morphism_difference(box, identity_morphism(pushout_product(f, g).arrow)) is None

    @pytest.mark.parametrize("seed", range(20))
    def test_tensor_of_squares_commutes(self, seed):
        f = random_arrow(seed, 3, Q)
        g = random_arrow(seed + 4000, 3, Q)
        square = tensor_morphism(adjunction_unit(f), adjunction_unit(g))
        assert square.commutes()
        assert square.src == tensor_arrow(f, g)

    @pytest.mark.parametrize("seed", range(10))
    def test_cube_injections_jointly_epi(self, seed):
        f, g, h = (random_arrow(seed * 3 + i, 2, Q) for i in range(3))
        assert cube_injections_left(f, g, h).jointly_epimorphic()
        assert cube_injections_right(f, g, h).jointly_epimorphic()


class TestKernelCokernel:
    def test_cok_of_identity(self):
        assert cok(ArrowObject(identity(Q, 2))).f.shape == (0, 2)

    def test_cok_of_zero_domain(self):
        assert cok(ArrowObject(zeros(Q, 2, 0))).f == identity(Q, 2)

    def test_cok_of_first_inclusion(self):
        assert cok(arrow([[1], [0]])).f == from_rows(Q, [[0, 1]])

    def test_ker_of_identity(self):
        assert ker(ArrowObject(identity(Q, 2))).f.shape == (2, 0)

    def test_ker_of_zero_codomain(self):
        assert ker(ArrowObject(zeros(Q, 0, 2))).f == identity(Q, 2)

    def test_ker_of_sum(self):
        assert ker(arrow([[1, 1]])).f == from_rows(Q, [[-1], [1]])


class TestAdjunction:
    def test_unit_iso_for_mono(self):
        assert adjunction_unit(arrow([[1], [2]])).is_iso()

    def test_unit_of_zero_map(self):
        unit = adjunction_unit(arrow([[0]]))
        assert unit.dst.f.shape == (1, 0)
        assert not unit.is_iso()

    def test_counit_iso_for_epi(self):
        assert adjunction_counit(arrow([[1, 2]])).is_iso()
        assert adjunction_counit(ArrowObject(identity(Q, 2))).is_iso()

    def test_counit_of_zero_map(self):
        counit = adjunction_counit(arrow([[0]]))
        assert counit.src.f.shape == (0, 1)
        assert not counit.is_iso()

    @pytest.mark.parametrize("seed", SEEDS)
    def test_triangle_identities(self, seed):
        f = random_arrow(seed, 5, Q)
        g = random_arrow(seed + 10_000, 5, Q)
        assert all_passed(triangle_identities(f, g))

    def test_transpose_of_identity_is_unit(self):
        f = arrow([[1, 2], [2, 4]])
        fwd = adjoint_transpose_fwd(identity_morphism(cok(f)), f)
        assert morphism_difference(fwd, adjunction_unit(f)) is None

    @pytest.mark.parametrize("seed", range(20))
    def test_transpose_roundtrip(self, seed):
        rng = random.Random(seed)
        f = random_arrow(rng.getrandbits(64), 3, Q)
        g = random_arrow(rng.getrandbits(64), 3, Q)
        kg = ker(g)
        r = random_matrix(rng, Q, kg.dom_dim, f.cod_dim, 0.7)
        psi = morphism(f, kg, r @ f.f, kg.f @ r)
        back = adjoint_transpose_fwd(adjoint_transpose_bwd(psi, g), f)
        assert morphism_difference(back, psi) is None

    def test_zero_morphism_transposes_to_zero(self):
        f = arrow([[1], [0]])
        g = arrow([[0, 0]])
        target = ker(g)
        psi = morphism(f, target, zeros(Q, target.dom_dim, 1), zeros(Q, 2, 2))
        phi = adjoint_transpose_bwd(psi, g)
        assert phi.comp0.is_zero() and phi.comp1.is_zero()


class TestComparisons:
    @pytest.mark.parametrize("seed", SEEDS)
    def test_strong_comparison_is_iso(self, seed):
        f = random_arrow(seed, 5, Q)
        g = random_arrow(seed + 20_000, 5, Q)
        assert strong_monoidal_comparison(f, g).is_iso()

    def test_strong_comparison_for_zero_domains(self):
        f = ArrowObject(zeros(Q, 1, 0))
        alpha = strong_monoidal_comparison(f, f)
        assert alpha.comp1 == identity(Q, 1)

    def test_strong_comparison_for_identities(self):
        f = ArrowObject(identity(Q, 1))
        assert strong_monoidal_comparison(f, f).is_iso()

    def test_strong_comparison_over_f5(self, F5):
        f = random_arrow(3, 4, F5)
        g = random_arrow(4, 4, F5)
        assert strong_monoidal_comparison(f, g).is_iso()

    def test_lax_comparison_is_well_formed(self):
        f = arrow([[0]])
        lax = lax_comparison(f, f)
        assert lax.commutes()

    def test_lax_comparison_for_identities_is_zero(self):
        f = ArrowObject(identity(Q, 2))
        lax = lax_comparison(f, f)
        assert lax.comp0.shape == (0, 0)


class TestLocalizations:
    @pytest.mark.parametrize("seed", SEEDS)
    def test_unit_iso_iff_mono(self, seed):
        f = random_arrow(seed, 4, Q)
        assert is_im_local(f) == is_mono(f.f)
        assert is_coim_local(f) == is_epi(f.f)

    @pytest.mark.parametrize("seed", SEEDS)
    def test_im_idempotent(self, seed):
        f = random_arrow(seed, 4, Q)
        assert im(im(f)) == im(f)

    @pytest.mark.parametrize("seed", range(30))
    def test_im_localization(self, seed):
        f = random_arrow(seed, 4, Q)
        target, unit = L_im(f)
        assert unit.src == f and unit.dst == target == im(f)
        assert unit.commutes()
        assert unit.is_iso() == is_im_local(f) == is_mono(f.f)
        again, second = L_im(target)
        assert second.is_iso()
        assert arrow_isomorphism(again, target) is not None

    @pytest.mark.parametrize("seed", range(30))
    def test_coim_localization(self, seed):
        g = random_arrow(seed + 500, 4, Q)
        source, counit = L_coim(g)
        assert counit.dst == g and counit.src == source == coim(g)
        assert counit.commutes()
        assert counit.is_iso() == is_coim_local(g) == is_epi(g.f)
        again, second = L_coim(source)
        assert second.is_iso()
        assert arrow_isomorphism(again, source) is not None

    def test_im_localization_of_zero_map(self):
        target, unit = L_im(arrow([[0]]))
        assert target.f.shape == (1, 0)
        assert not unit.is_iso()

    def test_im_of_zero_map(self):
        assert im(arrow([[0]])).f.shape == (1, 0)

    def test_im_of_rank_one(self):
        assert im(arrow([[1, 2], [2, 4]])).f.shape == (2, 1)

    def test_im_of_mono_is_isomorphic(self):
        f = arrow([[1], [2]])
        assert arrow_isomorphism(f, im(f)) is not None

    def test_arrow_isomorphism_needs_equal_rank(self):
        assert arrow_isomorphism(arrow([[1]]), arrow([[0]])) is None

    @pytest.mark.parametrize("seed", range(30))
    def test_arrow_isomorphism_commutes(self, seed):
        f = random_arrow(seed, 3, Q)
        iso = arrow_isomorphism(f, f)
        assert iso is not None and iso.is_iso()

    def test_cok_equivalence_on_mono(self):
        assert all_passed(cok_equivalence_check(arrow([[1], [1]])))

    def test_cok_equivalence_rejects_non_mono(self):
        assert not all_passed(cok_equivalence_check(arrow([[1, 1]])))
