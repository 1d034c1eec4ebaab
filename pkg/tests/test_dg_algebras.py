from fractions import Fraction

import pytest

from algebras import AugmentedAlgebra, NonUnitalAlgebra, NotAssociative, augmentation_kernel, unitalize
from chain_complexes import homology, is_quasi_iso, unit_complex, verify_dg_smith_ideal
from corpus import (
    augmented_corpus,
    contractible_pair_dg,
    dg_corpus,
    nonunital_corpus,
    odd_square_dg,
    square_zero_dg,
    truncated_polynomial,
)
from dg_algebras import (
    DGAlgebraError,
    algebra_to_dg,
    augmented_to_dg,
    check_dg_morphism,
    dg_augmentation_kernel,
    dg_roundtrip_aug,
    dg_roundtrip_nu,
    dg_smith_from_augmented,
    dg_unitalize,
    hocofib_augmentation,
    main_theorem_check,
)
from exact_linalg import Field
from reports import all_passed, first_failure

Q = Field.rationals()


@pytest.fixture(scope="module")
def corpus():
    return dg_corpus(Q)


class TestStructure:
    def test_corpus_is_valid(self, corpus):
        for name, a in corpus:
            assert all_passed(a.checks()), name

    def test_odd_square_is_not_graded_commutative(self):
        records = odd_square_dg(Q).checks(commutative=True)
        failure = first_failure(records)
        assert failure is not None and failure.name == "commutativity"

    def test_square_zero_is_graded_commutative(self):
        assert all_passed(square_zero_dg(Q, 1, 2).checks(commutative=True))

    def test_degree_zero_algebra(self):
        kernel, _ = augmentation_kernel(truncated_polynomial(Q, 3))
        assert all_passed(algebra_to_dg(kernel).checks(commutative=True))

    def test_augmented_corpus_as_dg(self):
        for name, b in augmented_corpus((Q,)):
            assert all_passed(augmented_to_dg(b).checks()), name


class TestUnitalization:
    def test_zero_algebra_gives_base_field(self):
        b = dg_unitalize(square_zero_dg(Q, 0, 0))
        assert b.carrier == unit_complex(Q)
        assert all_passed(b.checks())

    def test_odd_generator(self):
        b = dg_unitalize(square_zero_dg(Q, 1, 1))
        assert [(n, b.carrier.dim(n)) for n in b.carrier.degrees] == [(0, 1), (1, 1)]
        assert all_passed(b.checks(commutative=True))

    def test_negative_degrees(self):
        b = dg_unitalize(square_zero_dg(Q, -1, 2))
        assert b.carrier.lo == -1 and b.carrier.dim(0) == 1
        assert all_passed(b.checks())

    def test_agrees_with_vector_space_unitalization(self):
        for n in range(1, 5):
            kernel, _ = augmentation_kernel(truncated_polynomial(Q, n))
            dg = dg_unitalize(algebra_to_dg(kernel))
            flat = augmented_to_dg(unitalize(kernel))
            assert dg.carrier == flat.carrier
            assert dg.mult == flat.mult
            assert dg.unit == flat.unit
            assert dg.eps == flat.eps

    def test_non_associative_input(self):
        a = NonUnitalAlgebra.from_constants(Q, 2, [(0, 0, 1, 1), (1, 0, 0, 1)])
        with pytest.raises(NotAssociative):
            dg_unitalize(algebra_to_dg(a))

    def test_unitalize_over_f5(self, F5):
        b = dg_unitalize(contractible_pair_dg(F5))
        assert all_passed(b.checks())


class TestAugmentationKernel:
    def test_kernel_must_be_a_dg_ideal(self):
        b = truncated_polynomial(Q, 2)
        bad = AugmentedAlgebra(b.alg, (Fraction(1), Fraction(1)))
        with pytest.raises(DGAlgebraError):
            dg_augmentation_kernel(augmented_to_dg(bad))

    def test_roundtrip_nu_on_corpus(self, corpus):
        for name, a in corpus:
            assert all_passed(dg_roundtrip_nu(a)), name

    def test_roundtrip_aug_on_corpus(self, corpus):
        for name, a in corpus:
            b = dg_unitalize(a)
            u, phi = dg_roundtrip_aug(b)
            assert all_passed(check_dg_morphism(u, b, phi)), name

    def test_roundtrip_aug_on_flat_algebras(self):
        for name, b in augmented_corpus((Q,)):
            dg = augmented_to_dg(b)
            u, phi = dg_roundtrip_aug(dg)
            assert all_passed(check_dg_morphism(u, dg, phi)), name


class TestHomotopyCofiber:
    def test_hocofib_is_weakly_the_unit(self, corpus):
        for name, a in corpus:
            b = dg_unitalize(a)
            _, j = dg_augmentation_kernel(b)
            complex_, _, eps_bar = hocofib_augmentation(b, j)
            assert eps_bar.is_chain_map(), name
            assert is_quasi_iso(eps_bar), name
            assert dict(homology(complex_)).get(0) == 1, name

    def test_main_theorem_on_corpus(self, corpus):
        for name, a in corpus:
            records = main_theorem_check(a)
            assert all_passed(records), (name, first_failure(records))

    @pytest.mark.parametrize("label", ["Q", "FP:5"])
    def test_main_theorem_on_degree_zero_algebras(self, label):
        for name, a in nonunital_corpus((Field.from_label(label),)):
            records = main_theorem_check(algebra_to_dg(a))
            assert all_passed(records), (name, first_failure(records))

    def test_main_theorem_reports_non_associative_input(self):
        a = NonUnitalAlgebra.from_constants(Q, 2, [(0, 0, 1, 1), (1, 0, 0, 1)])
        records = main_theorem_check(algebra_to_dg(a))
        assert records[0].name == "unitalize" and not records[0].passed


class TestDGSmithIdeals:
    def test_from_truncated_polynomial(self):
        s = dg_smith_from_augmented(augmented_to_dg(truncated_polynomial(Q, 3)))
        assert all_passed(verify_dg_smith_ideal(s))

    def test_from_odd_square(self):
        s = dg_smith_from_augmented(dg_unitalize(odd_square_dg(Q)))
        assert all_passed(verify_dg_smith_ideal(s))
