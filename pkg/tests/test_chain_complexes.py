import pytest

from arrow_category import ArrowObject, pushout_product
from chain_complexes import (
    ChainArrowMorphism,
    ChainComplex,
    ChainComplexError,
    associator,
    chain_cokernel,
    chain_map,
    chain_maps_basis,
    checked,
    checked_map,
    componentwise_cof,
    componentwise_fib,
    compose_maps,
    concentrated,
    cone,
    direct_sum_complex,
    fiber,
    homology,
    identity_map,
    induces_homology_iso,
    is_acyclic,
    is_quasi_iso,
    pushout_product_chain,
    shift,
    stable_counit_check,
    stable_counit_comparison,
    stable_unit_check,
    stable_unit_comparison,
    symmetry_map,
    tensor_complex,
    tensor_map,
    unit_complex,
    zero_complex,
    zero_map,
)
from corpus import random_arrow, random_chain_map, random_complex
from exact_linalg import Field, from_rows, identity, is_mono, zeros

Q = Field.rationals()


def contractible() -> ChainComplex:
    """k in degree 1 mapping identically onto k in degree 0."""
    return ChainComplex.build(Q, 0, [1, 1], {1: from_rows(Q, [[1]])})


def two_lines() -> ChainComplex:
    return ChainComplex.build(Q, 0, [1, 1])


def degree_zero(m):
    return chain_map(concentrated(m.field, m.cols), concentrated(m.field, m.rows), {0: m})


class TestComplexes:
    def test_shape_mismatch(self):
        with pytest.raises(ChainComplexError):
            ChainComplex.build(Q, 0, [1, 2], {1: from_rows(Q, [[1]])})

    def test_d_squared_is_checked(self):
        c = ChainComplex.build(Q, 0, [1, 1, 1], {1: from_rows(Q, [[1]]), 2: from_rows(Q, [[1]])})
        assert c.d_squared_witness() == 2
        with pytest.raises(ChainComplexError):
            checked(c)

    def test_padding_is_ignored_by_equality(self):
        padded = ChainComplex.build(Q, -1, [0, 1, 0])
        assert padded == unit_complex(Q)
        assert hash(padded) == hash(unit_complex(Q))

    def test_shift_roundtrip(self):
        c = random_complex(5, 0, 3, 3, Q)
        assert shift(shift(c, 1), -1) == c
        assert shift(c, 2).lo == c.lo + 2

    def test_direct_sum_homology_adds(self):
        c = direct_sum_complex(contractible(), two_lines())
        assert dict(homology(c)) == {0: 1, 1: 1}


class TestHomology:
    def test_unit_complex(self):
        assert homology(unit_complex(Q)) == [(0, 1)]

    def test_identity_complex_is_acyclic(self):
        assert is_acyclic(contractible())

    def test_zero_differential(self):
        assert dict(homology(two_lines())) == {0: 1, 1: 1}

    def test_zero_complex(self):
        assert is_acyclic(zero_complex(Q))


class TestTensor:
    def test_unit_is_neutral(self):
        c = random_complex(11, 0, 3, 3, Q)
        assert tensor_complex(c, unit_complex(Q)) == c

    def test_contractible_squared_is_acyclic(self):
        assert is_acyclic(tensor_complex(contractible(), contractible()))

    def test_koszul_sign(self):
        square = tensor_complex(contractible(), contractible())
        assert square.d(2) == from_rows(Q, [[1], [-1]])

    @pytest.mark.parametrize("seed", range(10))
    def test_symmetry_is_an_involutive_chain_map(self, seed):
        c = random_complex(seed, 0, 2, 2, Q)
        d = random_complex(seed + 100, -1, 1, 2, Q)
        s = checked_map(symmetry_map(c, d))
        back = symmetry_map(d, c)
        assert compose_maps(back, s) == identity_map(tensor_complex(c, d))

    @pytest.mark.parametrize("seed", range(5))
    def test_associator_is_a_chain_iso(self, seed):
        c, d, e = (random_complex(seed * 3 + i, 0, 1, 2, Q) for i in range(3))
        a = checked_map(associator(c, d, e))
        assert induces_homology_iso(a)
        assert all(a.component(n).rank() == a.src.dim(n) for n in a.src.degrees)

    def test_tensor_of_identities(self):
        c = random_complex(3, 0, 2, 2, Q)
        d = random_complex(4, 0, 2, 2, Q)
        assert tensor_map(identity_map(c), identity_map(d)) == identity_map(tensor_complex(c, d))


class TestConeAndFiber:
    def test_cone_of_identity_is_acyclic(self):
        c = random_complex(2, 0, 3, 3, Q)
        assert is_acyclic(cone(identity_map(c)).complex)

    def test_cone_of_map_from_zero(self):
        c = random_complex(8, 0, 3, 3, Q)
        assert cone(zero_map(zero_complex(Q), c)).complex == c

    def test_cone_of_zero_endomorphism(self):
        k0 = unit_complex(Q)
        assert dict(homology(cone(zero_map(k0, k0)).complex)) == {0: 1, 1: 1}

    def test_fiber_of_identity_is_acyclic(self):
        c = random_complex(9, 0, 3, 3, Q)
        assert is_acyclic(fiber(identity_map(c)).complex)

    def test_fiber_of_map_to_zero(self):
        c = random_complex(10, 0, 3, 3, Q)
        assert fiber(zero_map(c, zero_complex(Q))).complex == c

    def test_fiber_of_zero_endomorphism(self):
        k0 = unit_complex(Q)
        h = dict(homology(fiber(zero_map(k0, k0)).complex))
        assert h.get(0) == 1 and h.get(-1) == 1

    def test_cone_maps_are_chain_maps(self):
        f = random_chain_map(12, 0, 3, 3, Q)
        c = cone(f)
        assert c.incl.is_chain_map() and c.proj.is_chain_map()


class TestQuasiIsomorphisms:
    def test_identity(self):
        assert is_quasi_iso(identity_map(contractible()))

    def test_inclusion_into_acyclic(self):
        f = chain_map(unit_complex(Q), contractible(), {0: from_rows(Q, [[1]])})
        assert f.is_chain_map()
        assert not is_quasi_iso(f)
        assert not induces_homology_iso(f)

    @pytest.mark.parametrize("seed", range(50))
    def test_cone_agrees_with_homology(self, seed):
        f = random_chain_map(seed, 0, 3, 3, Q)
        assert is_quasi_iso(f) == induces_homology_iso(f)

    def test_componentwise_predicates(self):
        c = random_complex(1, 0, 2, 3, Q)
        ident = identity_map(c)
        alpha = ChainArrowMorphism(ident, ident, ident, ident)
        assert componentwise_cof(alpha) and componentwise_fib(alpha)

    def test_zero_map_is_not_a_fibration(self):
        k0 = unit_complex(Q)
        z = zero_map(k0, k0)
        alpha = ChainArrowMorphism(identity_map(k0), identity_map(k0), z, z)
        assert not componentwise_fib(alpha)


class TestStability:
    @pytest.mark.parametrize("seed", range(50))
    def test_unit_comparison(self, seed):
        assert stable_unit_check(random_chain_map(seed, 0, 3, 3, Q))

    @pytest.mark.parametrize("seed", range(50))
    def test_counit_comparison(self, seed):
        assert stable_counit_check(random_chain_map(seed + 1000, 0, 3, 3, Q))

    def test_unit_for_zero_source(self):
        c = random_complex(6, 0, 3, 3, Q)
        assert stable_unit_check(zero_map(zero_complex(Q), c))

    def test_unit_for_identity(self):
        assert stable_unit_check(identity_map(contractible()))

    def test_comparisons_commute_over_f5(self, F5):
        f = random_chain_map(4, 0, 3, 3, F5)
        assert stable_unit_comparison(f).commutes()
        assert stable_counit_comparison(f).commutes()


class TestChainMapSpace:
    def test_dimension_between_concentrated(self):
        basis = chain_maps_basis(concentrated(Q, 2), concentrated(Q, 3))
        assert len(basis) == 6

    def test_maps_into_contractible(self):
        # chain maps k[0] -> (k -> k) are determined by the degree-0 component
        assert len(chain_maps_basis(unit_complex(Q), contractible())) == 1

    @pytest.mark.parametrize("seed", range(10))
    def test_every_basis_element_is_a_chain_map(self, seed):
        x = random_complex(seed, 0, 2, 2, Q)
        y = random_complex(seed + 50, 0, 2, 2, Q)
        for f in chain_maps_basis(x, y):
            assert f.is_chain_map()

    def test_cokernel(self):
        f = random_chain_map(21, 0, 3, 3, Q)
        q, proj = chain_cokernel(f)
        assert checked(q) is q
        assert proj.is_chain_map()
        assert compose_maps(proj, f) == zero_map(f.src, q)


class TestPushoutProduct:
    @pytest.mark.parametrize("seed", range(10))
    def test_degree_zero_agrees_with_vector_spaces(self, seed):
        f = random_arrow(seed, 3, Q)
        g = random_arrow(seed + 500, 3, Q)
        box = pushout_product_chain(degree_zero(f.f), degree_zero(g.f))
        flat = pushout_product(f, g)
        assert box.pushout.dim(0) == flat.pushout.dim
        assert box.arrow.component(0) == flat.arrow.f

    @pytest.mark.parametrize("seed", range(15))
    def test_dimension_formula_for_degreewise_monos(self, seed):
        f = cone(identity_map(random_complex(seed, 0, 2, 2, Q))).incl
        g = cone(identity_map(random_complex(seed + 70, -1, 1, 2, Q))).incl
        x0, x1, y0, y1 = f.src, f.dst, g.src, g.dst
        assert all(is_mono(f.component(n)) for n in f.degrees)
        assert all(is_mono(g.component(n)) for n in g.degrees)
        box = pushout_product_chain(f, g)
        for n in tensor_complex(x1, y1).degrees:
            expected = (
                tensor_complex(x0, y1).dim(n)
                + tensor_complex(x1, y0).dim(n)
                - tensor_complex(x0, y0).dim(n)
            )
            assert box.pushout.dim(n) == expected, n

    def test_identity_box_identity(self):
        ident = identity_map(contractible())
        box = pushout_product_chain(ident, ident)
        assert box.arrow.is_chain_map()
        assert is_quasi_iso(box.arrow)

    def test_zero_map_identity(self):
        f = degree_zero(zeros(Q, 1, 0))
        box = pushout_product_chain(f, f)
        assert box.arrow.component(0) == zeros(Q, 1, 0)

    def test_identity_degree_zero(self):
        f = degree_zero(identity(Q, 2))
        assert pushout_product_chain(f, f).arrow.component(0).rank() == 4
