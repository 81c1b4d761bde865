import random

import numpy as np
import pytest

from orbitzeta import corpus
from orbitzeta.algroup import (AlgebraGroup, bch, enumerate_group_elements,
                               gcomm, gconj, gexp, ginv, glog, gmul,
                               orbit_partition)
from orbitzeta.budgets import Budgets
from orbitzeta.errors import BudgetError, ValidationError
from orbitzeta.grouptab import FiniteGroupTable


def random_vectors(alg, rng, count):
    codes = alg.field.q ** alg.dim
    return [alg.unpack(rng.randrange(codes)) for _ in range(count)]


@pytest.mark.parametrize("alg_name,alg", [
    ("u3_F2", corpus.unitriangular(3, 2)),
    ("u3_F3", corpus.unitriangular(3, 3)),
    ("u3_F4", corpus.unitriangular(3, 2, 2)),
    ("u4_F2", corpus.unitriangular(4, 2)),
    ("I_F2_D8", corpus.augmentation_ideal("D8", 2)),
    ("I_F3_C9", corpus.augmentation_ideal("C9", 3)),
])
def test_group_axioms_sampled(alg_name, alg):
    rng = random.Random(hash(alg_name) & 0xFFFF)
    zero = alg.zero_vector()
    for _ in range(60):
        x, y, z = random_vectors(alg, rng, 3)
        assert gmul(gmul(x, y), z) == gmul(x, gmul(y, z))
        assert gmul(x, ginv(x)) == zero
        assert gmul(ginv(x), x) == zero
        assert gmul(x, zero) == x
        assert gmul(zero, x) == x


def test_conjugation_and_commutator_identities():
    alg = corpus.unitriangular(4, 2)
    rng = random.Random(5)
    for _ in range(40):
        x, g, h = random_vectors(alg, rng, 3)
        assert gconj(gconj(x, g), h) == gconj(x, gmul(g, h))
        # [x, y] = x^{-1} x^y
        y = random_vectors(alg, rng, 1)[0]
        assert gcomm(x, y) == gmul(ginv(x), gconj(x, y))


def test_exp_log_bijection():
    for alg in (corpus.unitriangular(3, 3), corpus.unitriangular(3, 5),
                corpus.zero_algebra(3, 2), corpus.augmentation_ideal("C3", 3)):
        for v in alg.iter_vectors():
            assert glog(gexp(v)) == v
            assert gexp(glog(v)) == v


def test_exp_requires_p_nilpotence():
    u3 = corpus.unitriangular(3, 2)  # class 3 > p = 2
    with pytest.raises(ValidationError):
        gexp(u3.basis_vector(0))
    with pytest.raises(ValidationError):
        glog(u3.basis_vector(0))


def test_exp_is_power_series():
    # in u3(F5): exp(x) = x + x^2/2
    alg = corpus.unitriangular(3, 5)
    rng = random.Random(9)
    half = alg.field.from_int(2).inverse()
    for _ in range(30):
        x = random_vectors(alg, rng, 1)[0]
        assert gexp(x) == x + (x * x).scale(half)


def test_bch_matches_group_product():
    # exp(bch(x, y)) = exp(x) exp(y) whenever the truncation is exact
    for alg in (corpus.unitriangular(3, 3), corpus.unitriangular(4, 5)):
        rng = random.Random(alg.dim)
        for _ in range(25):
            x, y = random_vectors(alg, rng, 2)
            assert gexp(bch(x, y)) == gmul(gexp(x), gexp(y))


def test_orbit_partition_identity_fast_path():
    idx = np.arange(10, dtype=np.int64)
    part = orbit_partition([idx.copy(), idx.copy()], 10)
    assert part.count == 10
    assert part.sizes == [1] * 10


def test_orbit_partition_cycle():
    cyc = np.array([1, 2, 0, 3], dtype=np.int64)
    part = orbit_partition([cyc], 4)
    assert part.count == 2
    assert sorted(part.sizes) == [1, 3]
    assert part.labels[0] == part.labels[1] == part.labels[2]
    assert part.labels[3] != part.labels[0]


KNOWN_GROUP_K = [
    ("u3_F2", corpus.unitriangular(3, 2), 5),
    ("u3_F3", corpus.unitriangular(3, 3), 11),
    ("u3_F4", corpus.unitriangular(3, 2, 2), 19),
    ("I_F3_C3", corpus.augmentation_ideal("C3", 3), 9),
]


@pytest.mark.parametrize("name,alg,k", KNOWN_GROUP_K)
def test_class_counts(name, alg, k):
    eng = AlgebraGroup(alg)
    assert eng.k() == k


def test_unitriangular_group_is_dihedral_of_order_8():
    # 1+J for u3(F2) is the full unitriangular group U3(F2) = D8
    alg = corpus.unitriangular(3, 2)
    els = enumerate_group_elements(alg)
    index = {v.pack(): i for i, v in enumerate(els)}

    def mult(i, j):
        return index[gmul(els[i], els[j]).pack()]

    g = FiniteGroupTable(8, index[alg.zero_vector().pack()], mult,
                         list(range(8)))
    assert g.k() == 5
    assert g.exponent() == 4
    assert g.center_size() == 2


def test_brute_force_class_count_matches_engine():
    # independent oracle: build the Cayley table and count classes there
    for alg in (corpus.unitriangular(3, 3), corpus.augmentation_ideal("C4", 2)):
        els = enumerate_group_elements(alg)
        index = {v.pack(): i for i, v in enumerate(els)}

        def mult(i, j, els=els, index=index):
            return index[gmul(els[i], els[j]).pack()]

        g = FiniteGroupTable(len(els), index[alg.zero_vector().pack()], mult,
                             list(range(len(els))))
        assert g.k() == AlgebraGroup(alg).k()


def test_bulk_gmul_matches_scalar():
    alg = corpus.unitriangular(3, 3)
    eng = AlgebraGroup(alg)
    rng = random.Random(2)
    rows = eng.digit_rows()
    for _ in range(10):
        y = random_vectors(alg, rng, 1)[0]
        out = eng.bulk_gmul(rows, y)
        packed = eng.pack_digits(out)
        for i in (0, 1, 5, 11, 26):
            assert int(packed[i]) == gmul(alg.unpack(i), y).pack()


def test_abelianization_orders():
    # (1+J)/(1+J)' for u3(F_q) has order q^2
    for q, alg in ((2, corpus.unitriangular(3, 2)), (3, corpus.unitriangular(3, 3))):
        eng = AlgebraGroup(alg)
        assert eng.abelianization_order() == q * q
    # abelian case: the derived subgroup is trivial
    eng = AlgebraGroup(corpus.augmentation_ideal("C4", 2))
    assert eng.abelianization_order() == eng.N


def test_dual_orbit_count_matches_classes():
    for name, alg, k in KNOWN_GROUP_K:
        eng = AlgebraGroup(alg)
        assert eng.dual_orbits().count == eng.k() == k


def test_enumeration_budget():
    with pytest.raises(BudgetError):
        enumerate_group_elements(corpus.unitriangular(4, 2),
                                 budgets=Budgets(group_enumeration_max=8))
    with pytest.raises(BudgetError):
        AlgebraGroup(corpus.unitriangular(3, 3),
                     budgets=Budgets(group_enumeration_max=8)).conjugacy_classes()


def test_vectorized_associativity_bulk():
    # heavier randomized sweep through the packed representation
    rng = random.Random(101)
    for alg in (corpus.unitriangular(4, 2), corpus.unitriangular(3, 3),
                corpus.augmentation_ideal("Q8", 2)):
        codes = alg.field.q ** alg.dim
        for _ in range(2000):
            x, y, z = (alg.unpack(rng.randrange(codes)) for _ in range(3))
            assert (x * y) * z == x * (y * z)
