"""Coadjoint orbits of 1+J on the prime-field dual of J, and the orbit
method character theory at desk scale.

Dual functionals are Z/p-linear maps J -> Z/p, stored as coordinate rows of
length dim(J)*e.  The group acts by lambda^g(a) = lambda(a^(g^-1)); orbits,
the alternating forms B_lambda(a,b) = lambda([a,b]), their radicals, fake
degrees and the exact cyclotomic character values all live here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algroup import AlgebraGroup, OrbitPartition, glog
from .budgets import Budgets, check_budget
from .errors import InternalInconsistencyError, ValidationError
from .linalg import (fq_span_from_prime_basis, in_span_fq, nullspace_mod_p,
                     rank_nullspace_mod2_packed, rref_fq)
from .nilalg import AlgVector, NilAlgebra


def engine_for(alg: NilAlgebra, budgets: Budgets | None = None) -> AlgebraGroup:
    eng = getattr(alg, "_engine", None)
    if eng is None:
        eng = AlgebraGroup(alg, budgets)
        alg._engine = eng
    return eng


# ------------------------------------------------------------ cyclotomic --

class CyclotomicValue:
    """An element of Q(zeta_p): integer vector over the basis
    {zeta_p, .., zeta_p^(p-1)} divided by a positive integer denominator.

    Rational numbers embed via 1 = -(zeta + .. + zeta^(p-1)).
    """

    __slots__ = ("p", "vec", "denom")

    def __init__(self, p: int, vec, denom: int = 1):
        if denom == 0:
            raise ValidationError("zero denominator")
        if denom < 0:
            vec = [-a for a in vec]
            denom = -denom
        vec = tuple(int(a) for a in vec)
        if len(vec) != p - 1:
            raise ValidationError(f"need {p - 1} coordinates for p={p}")
        g = denom
        for a in vec:
            g = math.gcd(g, a)
        if g > 1:
            vec = tuple(a // g for a in vec)
            denom //= g
        self.p = p
        self.vec = vec
        self.denom = denom

    @classmethod
    def from_int(cls, p: int, value: int) -> "CyclotomicValue":
        return cls(p, (-value,) * (p - 1))

    @classmethod
    def from_rational(cls, p: int, value: Fraction) -> "CyclotomicValue":
        return cls(p, (-value.numerator,) * (p - 1), value.denominator)

    @classmethod
    def root_power(cls, p: int, k: int) -> "CyclotomicValue":
        k %= p
        if k == 0:
            return cls.from_int(p, 1)
        return cls(p, tuple(1 if t == k - 1 else 0 for t in range(p - 1)))

    @classmethod
    def from_histogram(cls, p: int, counts, denom: int = 1) -> "CyclotomicValue":
        """Sum of counts[r] * zeta^r over residues r."""
        c0 = int(counts[0])
        return cls(p, tuple(int(counts[k]) - c0 for k in range(1, p)), denom)

    def __add__(self, other: "CyclotomicValue") -> "CyclotomicValue":
        d = self.denom * other.denom // math.gcd(self.denom, other.denom)
        a, b = d // self.denom, d // other.denom
        return CyclotomicValue(self.p, tuple(a * x + b * y for x, y in zip(self.vec, other.vec)), d)

    def __sub__(self, other: "CyclotomicValue") -> "CyclotomicValue":
        return self + CyclotomicValue(other.p, tuple(-x for x in other.vec), other.denom)

    def __mul__(self, other: "CyclotomicValue") -> "CyclotomicValue":
        p = self.p
        # multiply in Z[zeta]: power p wraps to 0, and zeta^0 expands to -sum
        acc = [0] * p
        for i, x in enumerate(self.vec, start=1):
            if not x:
                continue
            for j, y in enumerate(other.vec, start=1):
                if y:
                    acc[(i + j) % p] += x * y
        out = [acc[k] - acc[0] for k in range(1, p)]
        return CyclotomicValue(p, out, self.denom * other.denom)

    def conjugate(self) -> "CyclotomicValue":
        return CyclotomicValue(self.p, tuple(reversed(self.vec)), self.denom)

    def scale(self, num: int, den: int = 1) -> "CyclotomicValue":
        return CyclotomicValue(self.p, tuple(num * x for x in self.vec), self.denom * den)

    def as_rational(self) -> Fraction | None:
        first = self.vec[0]
        if all(x == first for x in self.vec):
            return Fraction(-first, self.denom)
        return None

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.vec)

    def __eq__(self, other) -> bool:
        return (isinstance(other, CyclotomicValue) and self.p == other.p
                and self.vec == other.vec and self.denom == other.denom)

    def __hash__(self) -> int:
        return hash((self.p, self.vec, self.denom))

    def __repr__(self) -> str:
        r = self.as_rational()
        if r is not None:
            return str(r)
        body = "+".join(f"{x}z^{k}" for k, x in enumerate(self.vec, start=1) if x)
        return f"({body})/{self.denom}" if self.denom != 1 else body


# ------------------------------------------------------ dual functionals --

class DualFunctional:
    """Additive character coordinates: a Z/p-linear functional on J, read
    through x -> zeta_p^(lambda(x)).  Row vector of length dim*e."""

    __slots__ = ("alg", "row")

    def __init__(self, alg: NilAlgebra, row):
        row = tuple(int(x) % alg.field.p for x in row)
        if len(row) != alg.dim * alg.field.e:
            raise ValidationError(f"functional needs {alg.dim * alg.field.e} coordinates")
        self.alg = alg
        self.row = row

    def __call__(self, v: AlgVector) -> int:
        flat = v.flat()
        return sum(a * b for a, b in zip(self.row, flat)) % self.alg.field.p

    def pack(self) -> int:
        p = self.alg.field.p
        return sum(c * p ** t for t, c in enumerate(self.row))

    def __eq__(self, other) -> bool:
        return (isinstance(other, DualFunctional) and self.alg is other.alg
                and self.row == other.row)

    def __hash__(self) -> int:
        return hash((id(self.alg), self.row))

    def __repr__(self) -> str:
        return f"DualFunctional{self.row}"


def coadjoint_act(lam: DualFunctional, g: AlgVector) -> DualFunctional:
    """lambda^g with lambda^g(a) = lambda(a^((1+g)^-1)); (lam^g)^h = lam^(gh)."""
    if g.alg is not lam.alg:
        raise ValidationError("functional and group element live on different algebras")
    eng = engine_for(lam.alg)
    M = eng.dual_matrix_for(g)
    row = (np.array(lam.row, dtype=np.int64) @ M) % eng.p
    return DualFunctional(lam.alg, row)


# -------------------------------------------------------------- censuses --

@dataclass
class OrbitRecord:
    rep: int                      # packed dual coordinates, least in the orbit
    size: int
    fake_degree: int
    radical_prime_rows: tuple     # echelon rows over Z/p


@dataclass
class CensusResult:
    alg: NilAlgebra
    partition: OrbitPartition
    records: list[OrbitRecord]
    fixed_points: int

    @property
    def count(self) -> int:
        return len(self.records)

    def fake_degree_multiset(self) -> list[tuple[int, int]]:
        agg: dict[int, int] = {}
        for rec in self.records:
            agg[rec.fake_degree] = agg.get(rec.fake_degree, 0) + 1
        return sorted(agg.items())


def bracket_tensor(eng: AlgebraGroup) -> np.ndarray:
    key = "_bracket_tensor"
    cached = getattr(eng, key, None)
    if cached is None:
        n = eng.n
        t3 = np.zeros((n, n, n), dtype=np.int64)
        basis = [eng.alg.prime_basis_vector(t) for t in range(n)]
        for s in range(n):
            for t in range(n):
                t3[s, t] = basis[s].bracket(basis[t]).flat()
        setattr(eng, key, t3)
        cached = t3
    return cached


def gram_matrix(eng: AlgebraGroup, lam_digits) -> np.ndarray:
    """K[s,t] = lambda([b_s, b_t]) over the prime basis."""
    lam = np.asarray(lam_digits, dtype=np.int64)
    return (bracket_tensor(eng) @ lam) % eng.p


def radical_of(eng: AlgebraGroup, lam_digits):
    """(rank, prime echelon rows of Rad B_lambda)."""
    K = gram_matrix(eng, lam_digits)
    n, p = eng.n, eng.p
    if not K.any():
        full = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
        return 0, full
    if p == 2:
        packed = [int(r) for r in (K @ (1 << np.arange(n, dtype=np.int64)))]
        rank, null_packed = rank_nullspace_mod2_packed(packed, n)
        rows = sorted((tuple((v >> j) & 1 for j in range(n)) for v in null_packed),
                      reverse=True)
        return rank, rows
    rows = nullspace_mod_p([[int(x) for x in K[i]] for i in range(n)], n, p)
    return n - len(rows), rows


def radical(alg: NilAlgebra, lam, budgets: Budgets | None = None):
    """(prime echelon rows, F_q echelon rows) of Rad B_lambda.

    The radical is always closed under F_q scaling; for e > 1 that is a real
    condition and the conversion enforces it.
    """
    eng = engine_for(alg, budgets)
    row = lam.row if isinstance(lam, DualFunctional) else tuple(int(x) for x in lam)
    _, rows = radical_of(eng, row)
    try:
        fq_rows, _ = fq_span_from_prime_basis(rows, alg.field, alg.dim)
    except AssertionError as exc:
        raise InternalInconsistencyError(f"radical is not F_q-closed: {exc}") from exc
    return rows, fq_rows


def orbit_size(alg: NilAlgebra, lam, budgets: Budgets | None = None) -> int:
    eng = engine_for(alg, budgets)
    row = lam.row if isinstance(lam, DualFunctional) else tuple(int(x) for x in lam)
    rank, _ = radical_of(eng, row)
    if rank % (2 * alg.field.e):
        raise InternalInconsistencyError(
            "orbit size is not an even power of q; the pairing is defective")
    return eng.p ** rank


def fake_degree(alg: NilAlgebra, lam, budgets: Budgets | None = None) -> int:
    size = orbit_size(alg, lam, budgets)
    root = math.isqrt(size)
    if root * root != size:
        raise InternalInconsistencyError(f"orbit size {size} is not a square")
    return root


def orbit_census(alg: NilAlgebra, budgets: Budgets | None = None) -> CensusResult:
    """Full orbit decomposition of the dual with per-orbit invariants.

    Cross-checks inside: orbit sizes partition the dual, every orbit size
    equals |J| / |Rad B_lambda| at its representative, sizes are even
    q-powers, radicals are F_q-closed (substantive only when e > 1), and
    the fixed point count matches |J| / |[J,J]_L|.
    """
    eng = engine_for(alg, budgets)
    check_budget(budgets, "dual_census_max", eng.N)
    part = eng.dual_orbits()
    X = eng.digit_rows()
    q, e = alg.field.q, alg.field.e
    t3_zero = not bracket_tensor(eng).any()
    full_rows = tuple(tuple(1 if j == i else 0 for j in range(eng.n))
                      for i in range(eng.n))
    records = []
    for rep, size in zip(part.reps, part.sizes):
        if t3_zero:
            rank, rad_rows = 0, full_rows
        else:
            lam = X[rep]
            rank, rad_rows = radical_of(eng, lam)
            rad_rows = tuple(rad_rows)
        if eng.p ** rank != size:
            raise InternalInconsistencyError(
                f"orbit size {size} != |J|/|Rad| = {eng.p ** rank} at dual {rep}")
        if rank % (2 * e):
            raise InternalInconsistencyError(
                f"orbit size {size} is not an even power of q at dual {rep}")
        fake = q ** (rank // (2 * e))
        if e > 1:
            try:
                fq_span_from_prime_basis(rad_rows, alg.field, alg.dim)
            except AssertionError as exc:
                raise InternalInconsistencyError(
                    f"radical not F_q-closed at dual {rep}") from exc
        records.append(OrbitRecord(int(rep), size, fake, rad_rows))
    fixed = sum(1 for s in part.sizes if s == 1)
    derived_rows, _ = alg.derived_lie_subspace()
    expected_fixed = q ** (alg.dim - len(derived_rows))
    if fixed != expected_fixed:
        raise InternalInconsistencyError(
            f"fixed duals {fixed} != |J|/|[J,J]_L| = {expected_fixed}")
    return CensusResult(alg, part, records, fixed)


def fixed_point_count(alg: NilAlgebra, budgets: Budgets | None = None) -> int:
    """Number of coadjoint fixed points, computed from the census (which
    already cross-checks it against |J|/|[J,J]_L|)."""
    return orbit_census(alg, budgets).fixed_points


def conjecture_probe(alg: NilAlgebra, budgets: Budgets | None = None) -> dict:
    """Compare |J/[J,J]_L| with |(1+J)_ab|.

    Equality holds on many algebras (and conjecturally failed in general);
    disagreement is reported, never raised.
    """
    eng = engine_for(alg, budgets)
    derived_rows, _ = alg.derived_lie_subspace()
    lie_index = alg.field.q ** (alg.dim - len(derived_rows))
    group_ab = eng.abelianization_order()
    return {
        "lie_index": lie_index,
        "group_abelianization": group_ab,
        "equal": lie_index == group_ab,
    }


def fake_degree_identities(census: CensusResult) -> dict:
    """Aggregate identities: sum of squares, count, abelianization count."""
    alg = census.alg
    q = alg.field.q
    total = sum(rec.size for rec in census.records)
    sum_squares = sum(rec.fake_degree ** 2 for rec in census.records)
    n_linear = sum(1 for rec in census.records if rec.fake_degree == 1)
    return {
        "orbit_count": census.count,
        "dual_size": total,
        "sum_fake_squares": sum_squares,
        "group_order": q ** alg.dim,
        "linear_count": n_linear,
        "fixed_points": census.fixed_points,
    }


# ------------------------------------------------- isotropic subalgebras --

def _is_isotropic(eng: AlgebraGroup, lam, rows) -> bool:
    """Whether B_lambda vanishes on the F_q-span of the given rows."""
    p, e = eng.p, eng.e
    alg = eng.alg
    vecs = []
    for row in rows:
        base = AlgVector(alg, row)
        for m in range(e):
            scalar = alg.field.from_code(p ** m) if e > 1 else alg.field.one
            vecs.append(base.scale(scalar))
    lamv = np.asarray(lam, dtype=np.int64)
    for i, u in enumerate(vecs):
        for v in vecs[i + 1:]:
            w = u.bracket(v)
            if int(lamv @ np.array(w.flat(), dtype=np.int64)) % p:
                return False
    return True


def max_isotropic_subalgebra(alg: NilAlgebra, lam_digits,
                             budgets: Budgets | None = None):
    """A maximal isotropic subalgebra H for B_lambda, constructed through the
    ideal flag: take the first isotropic member of the flag, pass to its
    perp (a subalgebra), and recurse.  Returns F_q echelon rows of H.

    Verifies on exit: H is a subalgebra, B_lambda vanishes on H, and
    dim H = dim J - (1/2) log_q |orbit of lambda|.
    """
    eng = engine_for(alg, budgets)
    rows = _max_isotropic_inner(alg, tuple(int(x) for x in lam_digits))
    ech, piv = rref_fq(rows)
    # verification
    if not _is_isotropic(eng, lam_digits, ech):
        raise InternalInconsistencyError("constructed subalgebra is not isotropic")
    for u in ech:
        for v in ech:
            prod = AlgVector(alg, u) * AlgVector(alg, v)
            if not in_span_fq(ech, piv, prod.coeffs):
                raise InternalInconsistencyError("constructed space is not a subalgebra")
    rank, _ = radical_of(eng, lam_digits)
    expected_dim = alg.dim - rank // (2 * alg.field.e)
    if len(ech) != expected_dim:
        raise InternalInconsistencyError(
            f"isotropic subalgebra has dim {len(ech)}, expected {expected_dim}")
    return ech, piv


def _max_isotropic_inner(alg: NilAlgebra, lam):
    eng = engine_for(alg)
    K = gram_matrix(eng, lam)
    if not K.any():
        return [tuple(alg.basis_vector(i).coeffs) for i in range(alg.dim)]
    flag = alg.refine_to_flag()
    p, e = alg.field.p, alg.field.e
    lamv = np.asarray(lam, dtype=np.int64)
    chosen = None
    for idx in range(1, len(flag)):
        rows, _ = flag[idx]
        if _is_isotropic(eng, lam, rows):
            chosen = rows
            break
    if chosen is None or not chosen:
        # the complete flag always reaches an isotropic member before 0:
        # the minimal one is not inside Rad B, see the recursion argument
        raise InternalInconsistencyError("no nonzero isotropic flag member found")
    # perp of the chosen ideal: x with lambda([x, h]) = K x . h = 0 for all h
    constraints = []
    for row in chosen:
        base = AlgVector(alg, row)
        for m in range(e):
            scalar = alg.field.from_code(p ** m) if e > 1 else alg.field.one
            hd = np.array(base.scale(scalar).flat(), dtype=np.int64)
            constraints.append([int(x) for x in (K @ hd) % p])
    perp_prime = nullspace_mod_p(constraints, eng.n, p)
    perp_rows, perp_piv = fq_span_from_prime_basis(perp_prime, alg.field, alg.dim)
    if len(perp_rows) == alg.dim:
        raise InternalInconsistencyError("perp did not cut the space down")
    sub, basis = alg.subalgebra(perp_rows)
    # restrict lambda to the subalgebra coordinates
    lam_sub = []
    for t in range(sub.dim * e):
        i, m = divmod(t, e)
        scalar = alg.field.from_code(p ** m) if e > 1 else alg.field.one
        v = basis[i].scale(scalar)
        lam_sub.append(int(lamv @ np.array(v.flat(), dtype=np.int64)) % p)
    inner = _max_isotropic_inner(sub, tuple(lam_sub))
    # map back to ambient coordinates
    out = []
    for srow in inner:
        acc = alg.zero_vector()
        for c, bvec in zip(srow, basis):
            acc = acc + bvec.scale(c)
        out.append(tuple(acc.coeffs))
    return out


# ------------------------------------------------------------ characters --

@dataclass
class CharacterTable:
    alg: NilAlgebra
    class_reps: list[int]          # packed J-parts, one per conjugacy class
    class_sizes: list[int]
    orbit_reps: list[int]          # packed duals, one per coadjoint orbit
    fake_degrees: list[int]
    values: list[list[CyclotomicValue]]   # values[orbit][class]

    @property
    def k(self) -> int:
        return len(self.class_reps)

    def row(self, i: int) -> list[CyclotomicValue]:
        return self.values[i]


def character_table(alg: NilAlgebra, budgets: Budgets | None = None,
                    census: CensusResult | None = None) -> CharacterTable:
    """Exact character table of 1+J by the orbit method.

    Requires nilpotency class < p so that log is available.  chi_Omega(1+x)
    = |Omega|^(-1/2) sum over mu in Omega of zeta_p^(mu(log(1+x))).
    Verifies chi(1) = fake degree for every orbit and constancy of each
    character on each conjugacy class.
    """
    if not alg.is_p_nilpotent():
        raise ValidationError(
            f"orbit method characters need class < p; class is "
            f"{alg.nilpotency_class} at p={alg.field.p}")
    eng = engine_for(alg, budgets)
    p = eng.p
    if census is None:
        census = orbit_census(alg, budgets)
    part = census.partition
    classes = eng.conjugacy_classes()
    X = eng.digit_rows()
    dual_labels = part.labels
    nd = part.count

    # log of a class representative 1+x, as digit column
    values: list[list[CyclotomicValue]] = [[] for _ in range(nd)]
    for crep in classes.reps:
        x = eng.unpack(int(crep))
        j = glog(x)
        jd = np.array(j.flat(), dtype=np.int64)
        residues = (X @ jd) % p
        hist = np.bincount(dual_labels * p + residues, minlength=nd * p)
        hist = hist.reshape(nd, p)
        for o in range(nd):
            val = CyclotomicValue.from_histogram(p, hist[o],
                                                 census.records[o].fake_degree)
            values[o].append(val)

    table = CharacterTable(alg, [int(r) for r in classes.reps],
                           [int(s) for s in classes.sizes],
                           [rec.rep for rec in census.records],
                           [rec.fake_degree for rec in census.records],
                           values)
    # chi(1) = fake degree: identity class is packed 0, always class rep 0
    if table.class_reps[0] != 0:
        raise InternalInconsistencyError("identity class is not first")
    for o in range(nd):
        expect = CyclotomicValue.from_int(p, table.fake_degrees[o])
        if values[o][0] != expect:
            raise InternalInconsistencyError(
                f"chi(1) != fake degree on orbit {o}")
    _verify_class_constancy(eng, census, classes, X)
    return table


def _verify_class_constancy(eng, census, classes, X) -> None:
    """Each chi_Omega is constant on each conjugacy class.

    Equivalent statement checked: for x, y in one class the histograms of
    mu(log x') over each orbit agree.  Singleton classes are trivially
    constant; for singleton orbits the value is a single root of unity, so
    constancy is linear and checked in one matrix pass.
    """
    p = eng.p
    part = census.partition
    labels = part.labels
    class_labels = classes.labels

    logs = {}

    def log_digits(packed: int) -> np.ndarray:
        got = logs.get(packed)
        if got is None:
            got = np.array(glog(eng.unpack(packed)).flat(), dtype=np.int64)
            logs[packed] = got
        return got

    # fixed duals: mu(log x) must be constant along every class
    sizes_arr = np.array(part.sizes, dtype=np.int64)
    fixed_ids = np.where(sizes_arr == 1)[0]
    fixed_idx = np.where(np.isin(labels, fixed_ids))[0]
    big_classes = [c for c in range(classes.count) if classes.sizes[c] > 1]
    if fixed_idx.size and big_classes:
        D = X[fixed_idx].astype(np.int64)
        for c in big_classes:
            members = np.where(class_labels == c)[0]
            L = np.stack([log_digits(int(m)) for m in members])
            vals = (L @ D.T) % p
            if not (vals == vals[0]).all():
                raise InternalInconsistencyError(
                    "linear character not constant on a class")
    # non-singleton orbits vs non-singleton classes: compare histograms
    big_orbits = [o for o in range(part.count) if part.sizes[o] > 1]
    if not big_orbits or not big_classes:
        return
    order = np.argsort(labels, kind="stable")
    sorted_labels = labels[order]
    Xs = X[order].astype(np.int64)
    for c in big_classes:
        members = np.where(class_labels == c)[0]
        L = np.stack([log_digits(int(m)) for m in members])
        vals = (L @ Xs.T) % p
        for o in big_orbits:
            lo = int(np.searchsorted(sorted_labels, o, side="left"))
            hi = int(np.searchsorted(sorted_labels, o, side="right"))
            block = vals[:, lo:hi]
            row_ids = block + p * np.arange(block.shape[0])[:, None]
            hists = np.bincount(row_ids.ravel(),
                                minlength=p * block.shape[0])
            hists = hists.reshape(block.shape[0], p)
            if not (hists == hists[0]).all():
                raise InternalInconsistencyError(
                    "character histogram varies inside a class")


def orbit_method_character(alg: NilAlgebra, lam,
                           budgets: Budgets | None = None):
    """chi_Omega for the orbit through lam, as (class packed reps, values).

    Computes the full table (the census is shared work anyway) and returns
    the row of the orbit containing lam.
    """
    eng = engine_for(alg, budgets)
    row = lam.row if isinstance(lam, DualFunctional) else tuple(int(x) for x in lam)
    packed = int(np.array(row, dtype=np.int64) @ eng.powers)
    census = orbit_census(alg, budgets)
    table = character_table(alg, budgets, census)
    oid = int(census.partition.labels[packed])
    return table.class_reps, table.values[oid]


def inner_product(table: CharacterTable, a: int, b: int) -> CyclotomicValue:
    """Exact <chi_a, chi_b> = |G|^(-1) sum_c |c| chi_a(c) conj(chi_b(c))."""
    p = table.alg.field.p
    N = table.alg.field.q ** table.alg.dim
    acc = CyclotomicValue.from_int(p, 0)
    for w, x, y in zip(table.class_sizes, table.values[a], table.values[b]):
        acc = acc + (x * y.conjugate()).scale(w)
    return acc.scale(1, N)


def orthonormality_check(table: CharacterTable) -> bool:
    """Exact first orthogonality: <chi_a, chi_b> = delta_ab in Q(zeta_p).

    Raises on any failure, returns True otherwise.
    """
    p = table.alg.field.p
    N = table.alg.field.q ** table.alg.dim
    k = table.k
    w = np.array(table.class_sizes, dtype=np.int64)
    # pack rows as integer matrices (k, p-1) with per-row denominators
    mats, denoms = [], []
    for row in table.values:
        d = 1
        for v in row:
            d = d * v.denom // math.gcd(d, v.denom)
        mats.append(np.array([[x * (d // v.denom) for x in v.vec] for v in row],
                             dtype=np.int64))
        denoms.append(d)
    # zeta^i * conj(zeta^j) = zeta^(i-j); expansion tensor over the basis,
    # with zeta^0 = 1 = -(zeta + ... + zeta^(p-1))
    T = np.zeros((p - 1, p - 1, p - 1), dtype=np.int64)
    for i in range(1, p):
        for j in range(1, p):
            r = (i - j) % p
            if r == 0:
                T[i - 1, j - 1] = -1
            else:
                T[i - 1, j - 1, r - 1] = 1
    for a in range(k):
        for b in range(a, k):
            vec = np.einsum("c,ci,cj,ijk->k", w, mats[a], mats[b], T)
            val = CyclotomicValue(p, [int(x) for x in vec],
                                  N * denoms[a] * denoms[b])
            want = CyclotomicValue.from_int(p, 1 if a == b else 0)
            if val != want:
                raise InternalInconsistencyError(
                    f"<chi_{a}, chi_{b}> = {val}, expected {want}")
    return True


# ------------------------------------------------------ induced characters --

def _subspace_packed_set(eng: AlgebraGroup, rows) -> np.ndarray:
    """All packed codes of the F_q-span of the given echelon rows."""
    alg = eng.alg
    p, e = eng.p, eng.e
    prime = []
    for row in rows:
        base = AlgVector(alg, row)
        for m in range(e):
            scalar = alg.field.from_code(p ** m) if e > 1 else alg.field.one
            prime.append(base.scale(scalar).flat())
    if not prime:
        return np.zeros(1, dtype=np.int64)
    B = np.array(prime, dtype=np.int64)
    m = len(prime)
    combos = np.zeros((p ** m, m), dtype=np.int64)
    vals = np.arange(p ** m)
    for t in range(m):
        combos[:, t] = (vals // p ** t) % p
    pts = (combos @ B) % p
    return np.unique(pts @ eng.powers)


def induced_character_values(alg: NilAlgebra, lam_digits,
                             budgets: Budgets | None = None):
    """Values of Ind_{1+H}^{1+J} psi_lambda on the class reps, computed by
    the stabilizer-count formula, where H is the maximal isotropic
    subalgebra for lambda and psi_lambda(1+v) = zeta^(lambda(log(1+v))).

    Returns (values list aligned with conjugacy classes, H echelon rows).
    """
    eng = engine_for(alg, budgets)
    p = eng.p
    rows, _ = max_isotropic_subalgebra(alg, lam_digits, budgets)
    hset = _subspace_packed_set(eng, rows)
    hsize = int(alg.field.q ** len(rows))
    if hset.size != hsize:
        raise InternalInconsistencyError("isotropic span enumeration mismatch")
    classes = eng.conjugacy_classes()
    class_labels = classes.labels
    N = eng.N
    lamv = np.asarray(lam_digits, dtype=np.int64)
    out = []
    for c, csize in enumerate(classes.sizes):
        members = np.where(class_labels == c)[0]
        inside = members[np.isin(members, hset)]
        counts = np.zeros(p, dtype=np.int64)
        for m in inside:
            j = glog(eng.unpack(int(m)))
            r = int(lamv @ np.array(j.flat(), dtype=np.int64)) % p
            counts[r] += 1
        # Ind psi (u) = |G| / (|H| |class u|) * sum over class members in 1+H
        scale_den = hsize * int(csize)
        val = CyclotomicValue.from_histogram(p, counts).scale(N, scale_den)
        out.append(val)
    return out, rows


def verify_induced_matches_orbit(alg: NilAlgebra, orbit_index: int,
                                 budgets: Budgets | None = None,
                                 census: CensusResult | None = None,
                                 table: CharacterTable | None = None) -> bool:
    """Induced character from the isotropic polarization equals the orbit
    method character, exactly, on every conjugacy class."""
    eng = engine_for(alg, budgets)
    if census is None:
        census = orbit_census(alg, budgets)
    if table is None:
        table = character_table(alg, budgets, census)
    lam = eng.digit_rows()[census.records[orbit_index].rep]
    got, _ = induced_character_values(alg, lam, budgets)
    want = table.values[orbit_index]
    for c, (g, wv) in enumerate(zip(got, want)):
        if g != wv:
            raise InternalInconsistencyError(
                f"induced value differs from orbit character at class {c}: "
                f"{g} vs {wv}")
    return True


def transitivity_check(alg: NilAlgebra, orbit_index: int,
                       budgets: Budgets | None = None,
                       census: CensusResult | None = None) -> bool:
    """The subgroup 1+H acts transitively on the functionals agreeing with
    lambda on H.  That set is lambda + Ann(H); the check compares it with
    the orbit of lambda under 1+H."""
    eng = engine_for(alg, budgets)
    if census is None:
        census = orbit_census(alg, budgets)
    p, e = eng.p, eng.e
    lam = tuple(int(x) for x in eng.digit_rows()[census.records[orbit_index].rep])
    rows, _ = max_isotropic_subalgebra(alg, lam, budgets)
    # Ann(H): functionals vanishing on the prime basis of H
    prime = []
    for row in rows:
        base = AlgVector(alg, row)
        for m in range(e):
            scalar = alg.field.from_code(p ** m) if e > 1 else alg.field.one
            prime.append(base.scale(scalar).flat())
    ann = nullspace_mod_p([list(r) for r in prime], eng.n, p) if prime else \
        [tuple(1 if j == i else 0 for j in range(eng.n)) for i in range(eng.n)]
    m = len(ann)
    lamv = np.asarray(lam, dtype=np.int64)
    if m:
        A = np.array(ann, dtype=np.int64)
        combos = np.zeros((p ** m, m), dtype=np.int64)
        vals = np.arange(p ** m)
        for t in range(m):
            combos[:, t] = (vals // p ** t) % p
        coset = (combos @ A + lamv) % p
    else:
        coset = lamv[None, :] % p
    coset_packed = set(int(x) for x in coset @ eng.powers)
    # orbit of lambda under the group generated by 1 + (prime basis of H)
    mats = []
    for row in rows:
        base = AlgVector(alg, row)
        for mm in range(e):
            scalar = alg.field.from_code(p ** mm) if e > 1 else alg.field.one
            g = base.scale(scalar)
            mats.append(eng.dual_matrix_for(g))
    seen = {int(lamv @ eng.powers)}
    frontier = [np.asarray(lam, dtype=np.int64)]
    while frontier:
        nxt = []
        for v in frontier:
            for M in mats:
                w = (v @ M) % p
                code = int(w @ eng.powers)
                if code not in seen:
                    seen.add(code)
                    nxt.append(w)
        frontier = nxt
    if seen != coset_packed:
        raise InternalInconsistencyError(
            "1+H orbit does not exhaust the agreeing functionals")
    return True
