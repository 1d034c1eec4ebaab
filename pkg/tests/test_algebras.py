from fractions import Fraction

import pytest

from algebras import (
    AlgebraMorphism,
    AugmentedAlgebra,
    InvalidAlgebra,
    NonUnitalAlgebra,
    NotAssociative,
    UnitalAlgebra,
    augmentation_kernel,
    augmentation_kernel_morphism,
    change_basis,
    check_associativity,
    check_augmentation,
    check_commutativity,
    check_unit,
    make_augmented,
    make_unital,
    roundtrip_aug,
    roundtrip_nu,
    unitalize,
    unitalize_morphism,
    validate,
)
from corpus import (
    augmented_corpus,
    change_of_basis_family,
    cyclic_group_algebra,
    nonunital_corpus,
    truncated_polynomial,
    upper_triangular,
)
from exact_linalg import Field, from_rows, identity
from reports import all_passed

Q = Field.rationals()


def product_algebra(field: Field) -> AugmentedAlgebra:
    """k × k on the idempotents (1,0), (0,1); ε is the first projection."""
    base = NonUnitalAlgebra.from_constants(field, 2, [(0, 0, 0, 1), (1, 1, 1, 1)])
    return make_augmented(make_unital(base, [1, 1]), [1, 0])


@pytest.fixture(scope="module")
def augmented():
    return augmented_corpus()


@pytest.fixture(scope="module")
def nonunital():
    return nonunital_corpus()


class TestStructureConstants:
    def test_duplicates_are_summed(self):
        a = NonUnitalAlgebra.from_constants(Q, 1, [(0, 0, 0, 1), (0, 0, 0, 2)])
        assert a.constants == ((0, 0, 0, Fraction(3)),)

    def test_cancelling_duplicates_vanish(self):
        a = NonUnitalAlgebra.from_constants(Q, 1, [(0, 0, 0, 1), (0, 0, 0, -1)])
        assert a.constants == ()

    def test_index_out_of_range(self):
        with pytest.raises(InvalidAlgebra):
            NonUnitalAlgebra.from_constants(Q, 2, [(0, 2, 0, 1)])

    def test_mult_matrix_columns(self):
        a = truncated_polynomial(Q, 2).base
        assert a.mult_matrix == from_rows(Q, [[1, 0, 0, 0], [0, 1, 1, 0]])
        assert NonUnitalAlgebra.from_mult_matrix(a.mult_matrix) == a

    def test_multiply(self):
        a = truncated_polynomial(Q, 3).base
        x = (0, 1, 0)
        assert a.multiply(x, x) == (0, 0, 1)
        assert a.multiply((0, 0, 1), x) == (0, 0, 0)


class TestLaws:
    def test_zero_multiplication_is_associative(self):
        assert check_associativity(NonUnitalAlgebra.zero(Q, 3)).ok

    def test_truncated_polynomial_laws(self, field):
        b = truncated_polynomial(field, 3)
        assert all_passed(validate(b, commutative=True))

    def test_corrupted_table_reports_triple(self):
        a = NonUnitalAlgebra.from_constants(Q, 2, [(0, 0, 1, 1), (1, 0, 0, 1)])
        report = check_associativity(a)
        assert not report.ok
        assert report.violations[0] == (0, 0, 0)
        record = report.record()
        assert not record.passed and "(0, 0, 0)" in record.witness

    def test_upper_triangular_is_not_commutative(self):
        report = check_commutativity(upper_triangular(Q, 2))
        assert not report.ok

    def test_wrong_unit(self):
        b = truncated_polynomial(Q, 2)
        assert not check_unit(UnitalAlgebra(b.base, (Fraction(0), Fraction(1)))).ok

    def test_augmentation_must_send_unit_to_one(self):
        b = truncated_polynomial(Q, 2)
        bad = AugmentedAlgebra(b.alg, (Fraction(2), Fraction(0)))
        assert (-1,) in check_augmentation(bad).violations

    def test_augmentation_must_be_multiplicative(self):
        b = truncated_polynomial(Q, 2)
        bad = AugmentedAlgebra(b.alg, (Fraction(1), Fraction(1)))
        assert (1, 1) in check_augmentation(bad).violations

    def test_corpus_is_valid(self, augmented):
        for name, b in augmented:
            assert all_passed(validate(b)), name


class TestUnitalization:
    def test_unit_comes_first(self):
        b = unitalize(NonUnitalAlgebra.zero(Q, 2))
        assert b.unit == (1, 0, 0)
        assert b.eps == (1, 0, 0)
        assert all_passed(validate(b))

    def test_empty_algebra_gives_base_field(self):
        b = unitalize(NonUnitalAlgebra.zero(Q, 0))
        assert b.dim == 1
        assert b.base.constants == ((0, 0, 0, Fraction(1)),)

    def test_non_associative_input(self):
        a = NonUnitalAlgebra.from_constants(Q, 2, [(0, 0, 1, 1), (1, 0, 0, 1)])
        with pytest.raises(NotAssociative):
            unitalize(a)

    def test_kernel_of_unitalization_is_the_input(self, nonunital):
        for name, a in nonunital:
            kernel, _ = augmentation_kernel(unitalize(a))
            assert kernel == a, name


class TestAugmentationKernel:
    def test_dual_numbers(self):
        kernel, incl = augmentation_kernel(truncated_polynomial(Q, 2))
        assert kernel == NonUnitalAlgebra.zero(Q, 1)
        assert incl.matrix == from_rows(Q, [[0], [1]])

    def test_product_algebra_gives_idempotent(self):
        kernel, incl = augmentation_kernel(product_algebra(Q))
        assert kernel.constants == ((0, 0, 0, Fraction(1)),)
        assert incl.matrix == from_rows(Q, [[0], [1]])

    def test_group_algebra_kernel(self):
        kernel, _ = augmentation_kernel(cyclic_group_algebra(Q, 2))
        assert kernel.constants == ((0, 0, 0, Fraction(-2)),)

    def test_truncated_cube(self):
        kernel, _ = augmentation_kernel(truncated_polynomial(Q, 3))
        assert kernel.constants == ((0, 0, 1, Fraction(1)),)

    def test_upper_triangular_kernel_dimension(self):
        kernel, _ = augmentation_kernel(upper_triangular(Q, 2))
        assert kernel.dim == 2

    def test_inclusion_is_multiplicative(self, augmented):
        for name, b in augmented:
            _, incl = augmentation_kernel(b)
            assert not incl.multiplicative_violations(), name


class TestRoundtrips:
    def test_square_zero_roundtrip_is_identity(self):
        a = NonUnitalAlgebra.zero(Q, 2)
        phi = roundtrip_nu(a)
        assert phi.matrix == identity(Q, 2)
        assert phi.is_isomorphism()

    def test_product_algebra_change_of_basis(self):
        phi = roundtrip_aug(product_algebra(Q))
        assert phi.matrix == from_rows(Q, [[1, 0], [1, 1]])
        assert phi.is_isomorphism()

    def test_upper_triangular_roundtrip(self):
        phi = roundtrip_aug(upper_triangular(Q, 2))
        assert phi.matrix.shape == (3, 3)
        assert phi.is_isomorphism()

    def test_corpus_roundtrips(self, augmented, nonunital):
        for name, b in augmented:
            assert all_passed(roundtrip_aug(b).checks()), name
        for name, a in nonunital:
            assert all_passed(roundtrip_nu(a).checks()), name

    @pytest.mark.parametrize("seed", range(10))
    def test_roundtrip_after_change_of_basis(self, seed):
        b = change_of_basis_family(upper_triangular(Q, 2), seed)
        assert all_passed(validate(b))
        assert roundtrip_aug(b).is_isomorphism()


class TestFunctoriality:
    def test_unitalize_morphism_of_identity(self):
        a = truncated_polynomial(Q, 3)
        kernel, _ = augmentation_kernel(a)
        ident = AlgebraMorphism(kernel, kernel, identity(Q, kernel.dim))
        lifted = unitalize_morphism(ident)
        assert lifted.matrix == identity(Q, kernel.dim + 1)
        assert all_passed(lifted.checks())

    def test_kernel_morphism_of_quotient_map(self):
        # k[x]/(x^3) -> k[x]/(x^2)
        src = truncated_polynomial(Q, 3)
        dst = truncated_polynomial(Q, 2)
        psi = AlgebraMorphism(src, dst, from_rows(Q, [[1, 0, 0], [0, 1, 0]]))
        assert all_passed(psi.checks()[:-1])
        restricted = augmentation_kernel_morphism(psi)
        assert restricted.matrix == from_rows(Q, [[1, 0]])
        assert not restricted.multiplicative_violations()

    def test_kernel_morphism_needs_augmentations(self):
        a = NonUnitalAlgebra.zero(Q, 1)
        with pytest.raises(InvalidAlgebra):
            augmentation_kernel_morphism(AlgebraMorphism(a, a, identity(Q, 1)))

    def test_change_basis_by_identity(self):
        b = cyclic_group_algebra(Q, 3)
        assert change_basis(b, identity(Q, 3)) == b
