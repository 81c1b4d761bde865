"""The algebra group 1+J of a nilpotent algebra J.

Group elements are identified with their J-part, so the tuple of an
AlgVector x stands for 1+x.  Multiplication is (1+x)(1+y) = 1+(x+y+xy);
inversion is the finite geometric series.  For enumeration-scale work the
group action is linearized: conjugation by a fixed element is F_q-linear
on J, so orbit computations run on integer coordinate arrays.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .budgets import Budgets, check_budget
from .errors import InternalInconsistencyError, ValidationError
from .nilalg import AlgVector, NilAlgebra

_SPOT_SEED = 0x11EA5


# ------------------------------------------------------- element algebra --

def gmul(x: AlgVector, y: AlgVector) -> AlgVector:
    """(1+x)(1+y) = 1 + (x + y + xy)."""
    return x + y + x * y


def ginv(x: AlgVector) -> AlgVector:
    """y with (1+x)(1+y) = 1, the truncated geometric series."""
    alg = x.alg
    acc = alg.zero_vector()
    term = alg.zero_vector() - x
    neg = term
    while not term.is_zero():
        acc = acc + term
        term = term * neg
    return acc


def gconj(x: AlgVector, g: AlgVector) -> AlgVector:
    """The J-part of (1+g)^(-1) (1+x) (1+g)."""
    return gmul(gmul(ginv(g), x), g)


def gcomm(x: AlgVector, y: AlgVector) -> AlgVector:
    """The J-part of the group commutator [1+x, 1+y]."""
    return gmul(gmul(ginv(x), ginv(y)), gmul(x, y))


def gexp(x: AlgVector) -> AlgVector:
    """The J-part of exp(x); needs J^p = 0 so the factorials invert."""
    alg = x.alg
    c = alg.nilpotency_class
    if c > alg.field.p:
        raise ValidationError(
            f"exp needs J^p = 0: class {c} exceeds characteristic {alg.field.p}")
    acc = x
    term = x
    fact = 1
    for k in range(2, c):
        term = term * x
        fact *= k
        acc = acc + term.scale(alg.field.from_int(fact).inverse())
    return acc


def glog(y: AlgVector) -> AlgVector:
    """log(1+y) as an element of J; needs J^p = 0."""
    alg = y.alg
    c = alg.nilpotency_class
    if c > alg.field.p:
        raise ValidationError(
            f"log needs J^p = 0: class {c} exceeds characteristic {alg.field.p}")
    acc = y
    term = y
    for k in range(2, c):
        term = term * y
        scalar = alg.field.from_int(k).inverse()
        if k % 2 == 0:
            scalar = -scalar
        acc = acc + term.scale(scalar)
    return acc


def bch(x: AlgVector, y: AlgVector) -> AlgVector:
    """Baker-Campbell-Hausdorff sum truncated at bracket degree 3.

    Exact when J^4 = 0; the factorial denominators force class <= p.
    """
    alg = x.alg
    c = alg.nilpotency_class
    if c > alg.field.p:
        raise ValidationError("BCH needs J^p = 0")
    if c > 4:
        raise ValidationError("BCH truncation implemented only up to class 4")
    out = x + y
    if c > 2:
        half = alg.field.from_int(2).inverse()
        out = out + x.bracket(y).scale(half)
    if c > 3:
        twelfth = alg.field.from_int(12).inverse()
        out = out + (x.bracket(x.bracket(y)) + y.bracket(y.bracket(x))).scale(twelfth)
    return out


# ------------------------------------------------------ linearized group --

@dataclass
class OrbitPartition:
    """Orbit decomposition of 0..N-1 under a set of permutations."""

    labels: np.ndarray          # int64, length N
    reps: list[int]             # least index per orbit, in discovery order
    sizes: list[int]

    @property
    def count(self) -> int:
        return len(self.reps)


def orbit_partition(perms: list[np.ndarray], n_points: int) -> OrbitPartition:
    idx = np.arange(n_points, dtype=np.int64)
    if all(np.array_equal(perm, idx) for perm in perms):
        # every point is fixed; skip the per-seed search
        return OrbitPartition(idx.copy(), list(range(n_points)), [1] * n_points)
    labels = np.full(n_points, -1, dtype=np.int64)
    reps: list[int] = []
    sizes: list[int] = []
    for seed in range(n_points):
        if labels[seed] >= 0:
            continue
        cid = len(reps)
        labels[seed] = cid
        frontier = np.array([seed], dtype=np.int64)
        size = 1
        while frontier.size:
            imgs = np.unique(np.concatenate([perm[frontier] for perm in perms]))
            new = imgs[labels[imgs] < 0]
            labels[new] = cid
            size += int(new.size)
            frontier = new
        reps.append(seed)
        sizes.append(size)
    if sum(sizes) != n_points:
        raise InternalInconsistencyError("orbit sizes do not partition the point set")
    return OrbitPartition(labels, reps, sizes)


class AlgebraGroup:
    """Vectorized view of 1+J: coordinate arrays, conjugation matrices,
    orbit machinery for conjugacy classes and the coadjoint action."""

    def __init__(self, alg: NilAlgebra, budgets: Budgets | None = None):
        self.alg = alg
        self.budgets = budgets
        self.p = alg.field.p
        self.e = alg.field.e
        self.n = alg.dim * alg.field.e          # prime-field dimension
        self.N = self.p ** self.n               # |1+J|
        self.powers = self.p ** np.arange(self.n, dtype=np.int64)
        self._X = None
        self._group_perms = None
        self._dual_perms = None
        self._classes = None
        self._dual_orbits = None
        self._gens = None
        self._gen_mats = None
        # 1 + omega^m b_i need not generate 1+J: inside I_F2[D8] they are the
        # embedded dihedral elements and close at order 8.  Orbit machinery
        # uses _generators(), which extends this seed set until the subgroup
        # closure is everything.
        self.prime_generators = [alg.prime_basis_vector(t) for t in range(self.n)]
        self._conj_mats = [self._conjugation_matrix(g) for g in self.prime_generators]
        self._conj_mats_inv = [self._conjugation_matrix(ginv(g))
                               for g in self.prime_generators]
        self._spot_check_linearity()

    # ---------------------------------------------------------- helpers --

    def pack_digits(self, digits: np.ndarray) -> np.ndarray:
        return digits.astype(np.int64) @ self.powers

    def digit_rows(self) -> np.ndarray:
        if self._X is None:
            check_budget(self.budgets, "group_enumeration_max", self.N)
            idx = np.arange(self.N, dtype=np.int64)
            digits = np.empty((self.N, self.n), dtype=np.int8)
            for t in range(self.n):
                digits[:, t] = (idx // self.powers[t]) % self.p
            self._X = digits
        return self._X

    def vector_digits(self, v: AlgVector) -> np.ndarray:
        return np.array(v.flat(), dtype=np.int64)

    def unpack(self, code: int) -> AlgVector:
        return self.alg.unpack(code)

    def dual_matrix_for(self, g: AlgVector) -> np.ndarray:
        """Matrix of the coadjoint action of 1+g on dual rows: lambda @ M."""
        return self._conjugation_matrix(ginv(g))

    def _conjugation_matrix(self, g: AlgVector) -> np.ndarray:
        cols = []
        for t in range(self.n):
            cols.append(self.vector_digits(gconj(self.alg.prime_basis_vector(t), g)))
        return np.stack(cols, axis=1)  # image = (M @ x) % p

    def _right_mul_matrix(self, y: AlgVector) -> np.ndarray:
        cols = []
        for t in range(self.n):
            cols.append(self.vector_digits(self.alg.prime_basis_vector(t) * y))
        return np.stack(cols, axis=1)

    def _spot_check_linearity(self) -> None:
        rng = random.Random(_SPOT_SEED ^ self.N)
        for g, mat in list(zip(self.prime_generators, self._conj_mats))[:4]:
            for _ in range(2):
                v = self.alg.unpack(rng.randrange(self.N))
                direct = self.vector_digits(gconj(v, g))
                linear = (mat @ self.vector_digits(v)) % self.p
                if not np.array_equal(direct, linear):
                    raise InternalInconsistencyError(
                        "conjugation matrix disagrees with direct conjugation")

    # ------------------------------------------------------- generators --

    def _digits_of(self, codes: np.ndarray) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        out = np.empty((codes.size, self.n), dtype=np.int64)
        for t in range(self.n):
            out[:, t] = (codes // self.powers[t]) % self.p
        return out

    def _closure_mask(self, gens: list[AlgVector]) -> np.ndarray:
        """Membership mask of the subgroup generated by gens, by packed code."""
        mask = np.zeros(self.N, dtype=bool)
        mask[0] = True
        frontier = np.zeros((1, self.n), dtype=np.int64)
        while frontier.size:
            new_codes = []
            for y in gens:
                packed = self.pack_digits(self.bulk_gmul(frontier, y))
                fresh = np.unique(packed[~mask[packed]])
                if fresh.size:
                    mask[fresh] = True
                    new_codes.append(fresh)
            frontier = (self._digits_of(np.concatenate(new_codes))
                        if new_codes else np.empty((0, self.n), dtype=np.int64))
        return mask

    def _generators(self) -> list[AlgVector]:
        """A verified generating set of 1+J, seeded with 1 + omega^m b_i."""
        if self._gens is None:
            gens = list(self.prime_generators)
            eye = np.eye(self.n, dtype=np.int64)
            if all(np.array_equal(m, eye) for m in self._conj_mats):
                # 1 + b_i central for a basis forces J commutative, so every
                # conjugation is trivial and any seed set serves the orbits
                self._gens = gens
            else:
                check_budget(self.budgets, "group_enumeration_max", self.N)
                while True:
                    mask = self._closure_mask(gens)
                    if mask.all():
                        break
                    # each coset representative at least doubles the closure
                    gens.append(self.alg.unpack(int(np.flatnonzero(~mask)[0])))
                self._gens = gens
        return self._gens

    def _generator_matrices(self):
        if self._gen_mats is None:
            gens = self._generators()
            mats = list(self._conj_mats)
            mats_inv = list(self._conj_mats_inv)
            for g in gens[len(self.prime_generators):]:
                mats.append(self._conjugation_matrix(g))
                mats_inv.append(self._conjugation_matrix(ginv(g)))
            self._gen_mats = (mats, mats_inv)
        return self._gen_mats

    # ------------------------------------------------------ permutations --

    def group_perms(self) -> list[np.ndarray]:
        """Permutations of packed J-coordinates: x -> x^g per generator."""
        if self._group_perms is None:
            X = self.digit_rows().astype(np.int64)
            mats, _ = self._generator_matrices()
            perms = []
            for mat in mats:
                imgs = (X @ mat.T) % self.p
                perms.append(imgs @ self.powers)
            self._group_perms = perms
        return self._group_perms

    def dual_perms(self) -> list[np.ndarray]:
        """Permutations of packed dual coordinates under the coadjoint action.

        lambda^g(a) = lambda(a^(g^-1)), i.e. row vectors act through the
        conjugation matrix of the inverse.
        """
        if self._dual_perms is None:
            check_budget(self.budgets, "dual_census_max", self.N)
            X = self.digit_rows().astype(np.int64)
            _, mats_inv = self._generator_matrices()
            perms = []
            for mat in mats_inv:
                imgs = (X @ mat) % self.p   # row action: lambda @ M == (M.T @ l)
                perms.append(imgs @ self.powers)
            self._dual_perms = perms
        return self._dual_perms

    # ----------------------------------------------------------- classes --

    def conjugacy_classes(self) -> OrbitPartition:
        """Conjugation orbits on J; the orbit of x is the class of 1+x."""
        if self._classes is None:
            check_budget(self.budgets, "group_enumeration_max", self.N)
            self._classes = orbit_partition(self.group_perms(), self.N)
        return self._classes

    def k(self) -> int:
        return self.conjugacy_classes().count

    def dual_orbits(self) -> OrbitPartition:
        if self._dual_orbits is None:
            self._dual_orbits = orbit_partition(self.dual_perms(), self.N)
        return self._dual_orbits

    # ------------------------------------------------- derived subgroup --

    def bulk_gmul(self, digits: np.ndarray, y: AlgVector) -> np.ndarray:
        """(1+x)(1+y) rowwise for x over digit rows, fixed y."""
        ydig = self.vector_digits(y)
        ry = self._right_mul_matrix(y)
        return (digits.astype(np.int64) + ydig + digits.astype(np.int64) @ ry.T) % self.p

    def commutator_subgroup_packed(self) -> np.ndarray:
        """Sorted packed indices of the derived subgroup of 1+J."""
        gens = self._generators()
        base = set()
        for u in gens:
            for v in gens:
                c = gcomm(u, v)
                if not c.is_zero():
                    base.add(c.pack())
        # normal closure of the commutators under generator conjugation
        conj_mats, _ = self._generator_matrices()
        genset: set[int] = set()
        stack = list(base)
        while stack:
            xpk = stack.pop()
            if xpk in genset:
                continue
            genset.add(xpk)
            check_budget(self.budgets, "closure_max", len(genset))
            xd = np.array([self.alg.unpack(xpk).flat()], dtype=np.int64)
            for mat in conj_mats:
                img = int(self.pack_digits((xd @ mat.T) % self.p)[0])
                if img not in genset:
                    stack.append(img)
        gvecs = [self.alg.unpack(pk) for pk in sorted(genset)]
        members = {0}
        frontier = np.zeros((1, self.n), dtype=np.int64)
        while frontier.size:
            new_rows = []
            for y in gvecs:
                prods = self.bulk_gmul(frontier, y)
                packed = self.pack_digits(prods)
                for row, pk in zip(prods, packed):
                    pk = int(pk)
                    if pk not in members:
                        members.add(pk)
                        new_rows.append(row)
            check_budget(self.budgets, "closure_max", len(members))
            frontier = (np.array(new_rows, dtype=np.int64)
                        if new_rows else np.empty((0, self.n), dtype=np.int64))
        out = np.array(sorted(members), dtype=np.int64)
        if self.N % out.size:
            raise InternalInconsistencyError("derived subgroup size does not divide |1+J|")
        return out

    def abelianization_order(self) -> int:
        return self.N // int(self.commutator_subgroup_packed().size)


def enumerate_group_elements(alg: NilAlgebra, budgets: Budgets | None = None):
    """All elements of 1+J as AlgVectors, in packed-code order."""
    check_budget(budgets, "group_enumeration_max", alg.field.q ** alg.dim)
    return list(alg.iter_vectors())
