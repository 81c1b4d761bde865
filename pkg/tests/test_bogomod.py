import random

import pytest

from orbitzeta import corpus
from orbitzeta.algroup import AlgebraGroup
from orbitzeta.bogomod import (build_mq, frobenius_matrix,
                               hensel_lift_modulus, invariant_factors,
                               mq_order, power_class_layers,
                               predicted_ab_order, smith_valuations,
                               verify_filtration)
from orbitzeta.errors import ValidationError
from orbitzeta.ffield import make_field


def test_hensel_lift_basic():
    # t^2 + t + 1 divides t^3 - 1 over Z, so it lifts to itself
    assert hensel_lift_modulus(2, 2, 2) == [1, 1, 1]
    assert hensel_lift_modulus(2, 2, 5) == [1, 1, 1]
    for p, e, v in ((2, 3, 3), (3, 2, 3), (5, 2, 2)):
        fhat = hensel_lift_modulus(p, e, v)
        field = make_field(p, e)
        assert len(fhat) == e + 1 and fhat[-1] == 1
        assert [c % p for c in fhat] == [c % p for c in field.modulus]


def test_frobenius_matrix_anchor():
    # omega^2 = 3 + 3*omega in Z[omega]/(4, omega^2+omega+1)
    assert frobenius_matrix(2, 2, 2) == [[1, 3], [0, 3]]
    assert frobenius_matrix(3, 1, 4) == [[1]]
    with pytest.raises(ValidationError):
        frobenius_matrix(4, 2, 2)


def test_smith_valuations_hand_cases():
    # SNF of [[2,1],[0,2]] is diag(1,4)
    assert smith_valuations([[2, 1], [0, 2]], 2, 3) == [0, 2]
    assert smith_valuations([[4, 0], [0, 2]], 2, 3) == [1, 2]
    assert smith_valuations([[0, 0], [0, 0]], 2, 3) == [3, 3]
    assert smith_valuations([[1, 0], [0, 1]], 5, 2) == [0, 0]
    # wide and tall shapes
    assert smith_valuations([[2, 0, 0]], 2, 3, ncols=3) == [1, 3, 3]
    assert smith_valuations([[2], [0], [4]], 2, 3, ncols=1) == [1]


def test_smith_valuations_row_op_invariance():
    rng = random.Random(31)
    p, v = 3, 4
    mod = p ** v
    rows = [[rng.randrange(mod) for _ in range(4)] for _ in range(4)]
    base = smith_valuations(rows, p, v)
    for _ in range(10):
        perm = list(range(4))
        rng.shuffle(perm)
        shuffled = [list(rows[i]) for i in perm]
        i, j = rng.sample(range(4), 2)
        c = rng.randrange(mod)
        shuffled[i] = [(x + c * y) % mod for x, y in zip(shuffled[i], shuffled[j])]
        assert smith_valuations(shuffled, p, v) == base


# anchors: C2 and C4 are the hand-checked examples; C9, Q8, D8 follow by
# chasing the relations p*x_r = x_{r^p} along the power chains
KNOWN_INVARIANTS = [
    ("C2", 2, 1, [2]),
    ("C4", 2, 1, [2, 4]),
    ("C2xC2", 2, 1, [2, 2, 2]),
    ("C3", 3, 1, [3, 3]),
    ("C9", 3, 1, [3, 3, 3, 3, 9, 9]),
    ("Q8", 2, 1, [2, 2, 4]),
    ("D8", 2, 1, [2, 2, 4]),
    ("He27", 3, 1, [3] * 10),
    ("C2", 2, 2, [2, 2]),
    ("C4", 2, 2, [2, 2, 4, 4]),
]


@pytest.mark.parametrize("name,p,e,factors", KNOWN_INVARIANTS)
def test_invariant_factor_anchors(name, p, e, factors):
    pres = build_mq(corpus.group(name), p, e)
    assert invariant_factors(pres) == factors


def test_g128_invariants():
    pres = build_mq(corpus.group("g128"), 2, 1)
    assert invariant_factors(pres) == [2] * 13 + [4] * 6
    assert mq_order(pres) == 2 ** 25  # = q^(k-1) with k = 26


def test_size_law_sample():
    for name in ("C8", "D16", "SD16", "M16", "Q16", "M27", "C3xC3"):
        g = corpus.group(name)
        p = corpus.group_prime(name)
        for e in (1, 2):
            pres = build_mq(g, p, e)
            q = p ** e
            assert mq_order(pres) == q ** (g.k() - 1)


def test_power_class_layers():
    assert power_class_layers(corpus.group("Q8"), 2) == [3, 1]
    assert power_class_layers(corpus.group("C4"), 2) == [2, 1]
    assert power_class_layers(corpus.group("C2xC2"), 2) == [3]
    assert power_class_layers(corpus.group("He27"), 3) == [10]
    # layer sizes sum to k - 1
    for name in ("D8", "C9", "M16", "g128"):
        g = corpus.group(name)
        p = corpus.group_prime(name)
        assert sum(power_class_layers(g, p)) == g.k() - 1


def test_verify_filtration():
    for name, e in (("Q8", 1), ("C9", 1), ("C4", 2), ("M16", 1), ("He27", 2)):
        g = corpus.group(name)
        p = corpus.group_prime(name)
        out = verify_filtration(build_mq(g, p, e), g)
        assert out["ok"], out


def test_frobenius_basis_independence():
    # conjugating the Frobenius matrix by a unimodular change of basis
    # leaves the module invariants alone
    for name in ("C4", "Q8", "C9"):
        g = corpus.group(name)
        p = corpus.group_prime(name)
        pres = build_mq(g, p, 2)
        v, mod = pres.v, p ** pres.v
        phi = frobenius_matrix(p, 2, v)
        u = [[1, 1], [0, 1]]
        uinv = [[1, mod - 1], [0, 1]]

        def matmul(a, b):
            return [[sum(a[i][t] * b[t][j] for t in range(2)) % mod
                     for j in range(2)] for i in range(2)]

        twisted = matmul(uinv, matmul(phi, u))
        pres2 = build_mq(g, p, 2, frobenius=twisted)
        assert invariant_factors(pres2) == invariant_factors(pres)


def test_build_mq_validation():
    with pytest.raises(ValidationError):
        build_mq(corpus.group("C3"), 2, 1)  # not a 2-group
    with pytest.raises(ValidationError):
        build_mq(corpus.group("C4"), 4, 1)  # 4 is not prime
    with pytest.raises(ValidationError):
        build_mq(corpus.group("C4"), 2, 2, frobenius=[[1]])  # wrong shape


def test_predicted_matches_brute_force_closure():
    # |(1+I_{F_q})_ab| = q^{k-1} * |B_0|; B_0 is trivial at these orders
    for name, p in (("C4", 2), ("D8", 2), ("Q8", 2), ("C3", 3)):
        g = corpus.group(name)
        predicted = predicted_ab_order(g, p, corpus.B0_ORDER[name])
        eng = AlgebraGroup(corpus.augmentation_ideal(name, p))
        assert eng.abelianization_order() == predicted
        assert predicted == p ** (g.k() - 1)


def test_predicted_ab_order_validation():
    with pytest.raises(ValidationError):
        predicted_ab_order(corpus.group("C4"), 6, 1)
    with pytest.raises(ValidationError):
        predicted_ab_order(corpus.group("C3"), 2, 1)


def test_mq_presentation_fields():
    pres = build_mq(corpus.group("C4"), 2, 2)
    assert pres.q == 4
    assert pres.ngens == 2 * (corpus.group("C4").k() - 1)
    assert pres.v >= 2
    assert len(pres.rows) == pres.ngens


def test_frobenius_matrix_lift_compatibility():
    # higher-precision lifts reduce to lower ones: the Hensel chain is coherent
    for p, e, v in [(2, 2, 2), (2, 3, 3), (3, 2, 2), (5, 2, 3), (3, 3, 2)]:
        low = frobenius_matrix(p, e, v)
        high = frobenius_matrix(p, e, v + 1)
        assert [[x % p ** v for x in row] for row in high] == low


def test_frobenius_matrix_reduces_to_field_frobenius():
    for p, e in [(2, 2), (2, 3), (3, 2), (5, 2)]:
        field = make_field(p, e)
        cols = []
        for j in range(e):
            code = field.from_code(p ** j).frobenius().code
            cols.append([(code // p ** i) % p for i in range(e)])
        from_field = [[cols[j][i] for j in range(e)] for i in range(e)]
        reduced = [[x % p for x in row] for row in frobenius_matrix(p, e, 2)]
        assert from_field == reduced


def _relation_rows_at_precision(group, p, e, w):
    """Rebuild the relation matrix mod p^w independently of build_mq."""
    classes = group.conjugacy_classes()
    ident = classes.class_of(group.identity)
    nontrivial = [c for c in range(classes.k) if c != ident]
    pos = {c: i for i, c in enumerate(nontrivial)}
    pm = group.class_power_map(p)
    frob = frobenius_matrix(p, e, w)
    mod = p ** w
    n = e * len(nontrivial)
    rows = []
    for c in nontrivial:
        target = pm[c]
        for j in range(e):
            row = [0] * n
            row[pos[c] * e + j] = p % mod
            if target != ident:
                base = pos[target] * e
                for i in range(e):
                    row[base + i] = (row[base + i] - frob[i][j]) % mod
            rows.append(row)
    return rows, n


def test_invariant_factors_stable_under_extra_precision():
    for name, p in [("C9", 3), ("Q8", 2), ("C16", 2), ("He27", 3)]:
        g = corpus.group(name)
        for e in (1, 2):
            pres = build_mq(g, p, e)
            base = invariant_factors(pres)
            # same presentation rebuilt one digit deeper
            rows, n = _relation_rows_at_precision(g, p, e, pres.v + 1)
            vals = smith_valuations(rows, p, pres.v + 1, n)
            assert all(a < pres.v for a in vals)  # module killed by exp(pi)
            assert [p ** a for a in vals if a > 0] == base, (name, e)
