"""Finite dimensional nilpotent associative algebras over F_q, given by
structure constants on a fixed basis.

Vectors are coefficient tuples; subspaces are reduced echelon bases, so
subspace equality is representation equality.  Every algebra verifies
associativity and nilpotency at construction time.
"""

from __future__ import annotations

from .budgets import Budgets, check_budget
from .errors import ValidationError
from .ffield import Field, FieldElement, make_field
from .linalg import rref_fq, reduce_against_fq, in_span_fq


class AlgVector:
    """An element of J, a coefficient tuple over the algebra's basis."""

    __slots__ = ("alg", "coeffs")

    def __init__(self, alg: "NilAlgebra", coeffs):
        self.alg = alg
        self.coeffs = tuple(coeffs)

    def __add__(self, other: "AlgVector") -> "AlgVector":
        return AlgVector(self.alg, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "AlgVector") -> "AlgVector":
        return AlgVector(self.alg, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "AlgVector":
        return AlgVector(self.alg, tuple(-a for a in self.coeffs))

    def __mul__(self, other: "AlgVector") -> "AlgVector":
        return self.alg.multiply(self, other)

    def scale(self, c: FieldElement) -> "AlgVector":
        return AlgVector(self.alg, tuple(c * a for a in self.coeffs))

    def bracket(self, other: "AlgVector") -> "AlgVector":
        return self * other - other * self

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.coeffs)

    def flat(self) -> tuple[int, ...]:
        """Prime-field coordinates, field coefficients expanded in place."""
        out = []
        for a in self.coeffs:
            out.extend(a.coeffs)
        return tuple(out)

    def pack(self) -> int:
        p = self.alg.field.p
        out = 0
        for digit in reversed(self.flat()):
            out = out * p + digit
        return out

    def __eq__(self, other) -> bool:
        return (isinstance(other, AlgVector) and self.alg is other.alg
                and self.coeffs == other.coeffs)

    def __hash__(self) -> int:
        return hash((id(self.alg), self.coeffs))

    def __repr__(self) -> str:
        return "vec(" + ", ".join(repr(c) for c in self.coeffs) + ")"


class NilAlgebra:
    """Nilpotent associative F_q-algebra with sparse structure constants.

    table maps a basis pair (i, j) to a tuple of (k, coeff) terms giving
    b_i * b_j; absent pairs multiply to zero.
    """

    def __init__(self, field: Field, dim: int, table, *, name: str | None = None,
                 check: bool = True, budgets: Budgets | None = None):
        if dim < 1:
            raise ValidationError("algebra dimension must be >= 1")
        self.field = field
        self.dim = dim
        self.name = name or f"nilalg(d={dim},{field.name})"
        self.table: dict[tuple[int, int], tuple[tuple[int, FieldElement], ...]] = {}
        for (i, j), terms in table.items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise ValidationError(f"structure constant index ({i},{j}) out of range")
            clean = tuple((k, c) for (k, c) in terms if not c.is_zero())
            for k, _ in clean:
                if not 0 <= k < dim:
                    raise ValidationError(f"structure constant target {k} out of range")
            if clean:
                self.table[(i, j)] = clean
        if check:
            self._verify_associativity()
        self.powers = self._power_ideal_chain()
        self.nilpotency_class = len(self.powers)  # least n with J^n = 0
        self._flag = None

    # ------------------------------------------------------- vector ops --

    def zero_vector(self) -> AlgVector:
        return AlgVector(self, (self.field.zero,) * self.dim)

    def basis_vector(self, i: int) -> AlgVector:
        z = self.field.zero
        return AlgVector(self, tuple(self.field.one if t == i else z for t in range(self.dim)))

    def prime_basis_vector(self, t: int) -> AlgVector:
        """Basis of J as a Z/p-space: omega^m * b_i at t = i*e + m."""
        i, m = divmod(t, self.field.e)
        coeffs = [0] * self.field.e
        coeffs[m] = 1
        z = self.field.zero
        scalar = self.field.element(coeffs)
        return AlgVector(self, tuple(scalar if s == i else z for s in range(self.dim)))

    def vector(self, coeffs) -> AlgVector:
        vals = []
        for c in coeffs:
            vals.append(c if isinstance(c, FieldElement) else self.field.from_int(c))
        if len(vals) != self.dim:
            raise ValidationError(f"vector needs {self.dim} coordinates")
        return AlgVector(self, vals)

    def from_flat(self, flat) -> AlgVector:
        e = self.field.e
        return AlgVector(self, tuple(
            self.field.element(flat[i * e:(i + 1) * e]) for i in range(self.dim)))

    def unpack(self, code: int) -> AlgVector:
        p = self.field.p
        n = self.dim * self.field.e
        digits = []
        for _ in range(n):
            digits.append(code % p)
            code //= p
        return self.from_flat(digits)

    def iter_vectors(self):
        for code in range(self.field.q ** self.dim):
            yield self.unpack(code)

    def multiply(self, u: AlgVector, v: AlgVector) -> AlgVector:
        dense = [self.field.zero] * self.dim
        ui = [(i, a) for i, a in enumerate(u.coeffs) if not a.is_zero()]
        vj = [(j, b) for j, b in enumerate(v.coeffs) if not b.is_zero()]
        for i, a in ui:
            for j, b in vj:
                terms = self.table.get((i, j))
                if not terms:
                    continue
                ab = a * b
                for k, c in terms:
                    dense[k] = dense[k] + ab * c
        return AlgVector(self, dense)

    def _basis_product(self, i: int, j: int):
        return self.table.get((i, j), ())

    # ----------------------------------------------------- verification --

    def _verify_associativity(self) -> None:
        d = self.dim
        if d > 64:  # sampled above the exhaustive cutoff
            import random

            rng = random.Random(0xA550C)
            triples = ((rng.randrange(d), rng.randrange(d), rng.randrange(d))
                       for _ in range(20000))
        else:
            triples = ((i, j, k) for i in range(d) for j in range(d) for k in range(d))
        for i, j, k in triples:
            left = self._mul_sparse_basis(self._basis_product(i, j), k, right=True)
            right = self._mul_sparse_basis(self._basis_product(j, k), i, right=False)
            if left != right:
                raise ValidationError(
                    f"structure constants not associative at basis triple ({i},{j},{k})")

    def _mul_sparse_basis(self, sparse_vec, s: int, right: bool):
        out: dict[int, FieldElement] = {}
        for m, c in sparse_vec:
            pair = (m, s) if right else (s, m)
            for k, c2 in self._basis_product(*pair):
                acc = out.get(k, self.field.zero) + c * c2
                if acc.is_zero():
                    out.pop(k, None)
                else:
                    out[k] = acc
        return sorted((k, v.coeffs) for k, v in out.items())

    # ----------------------------------------------------------- chains --

    def _power_ideal_chain(self):
        """Echelon bases of J = J^1 >= J^2 >= ..., stopping at the first zero power.

        Returns the list [basis(J^1), .., basis(J^{c-1})] where J^c = 0; the
        nilpotency class is one more than the list length of nonzero powers.
        """
        full = [tuple(self.basis_vector(i).coeffs) for i in range(self.dim)]
        chain = [rref_fq(full)]
        while True:
            prev_rows, _ = chain[-1]
            if not prev_rows:
                break
            prods = []
            for row in prev_rows:
                rv = AlgVector(self, row)
                for i in range(self.dim):
                    b = self.basis_vector(i)
                    prods.append((rv * b).coeffs)
                    prods.append((b * rv).coeffs)
            nxt = rref_fq(prods)
            if len(nxt[0]) >= len(prev_rows):
                raise ValidationError("algebra is not nilpotent: power chain stalled")
            chain.append(nxt)
            if len(chain) > self.dim + 1:
                raise ValidationError("algebra is not nilpotent")
        return chain  # chain[k] is basis of J^{k+1}; last entry is empty

    def power_basis(self, k: int):
        """Echelon basis (rows, pivots) of J^k, k >= 1; empty beyond the class."""
        if k < 1:
            raise ValidationError("power index must be >= 1")
        if k - 1 < len(self.powers):
            return self.powers[k - 1]
        return [], []

    def is_p_nilpotent(self) -> bool:
        return self.nilpotency_class <= self.field.p

    def derived_lie_subspace(self):
        """Echelon basis of the span of all brackets [b_i, b_j]."""
        rows = []
        for i in range(self.dim):
            bi = self.basis_vector(i)
            for j in range(i + 1, self.dim):
                bj = self.basis_vector(j)
                rows.append(bi.bracket(bj).coeffs)
        return rref_fq(rows)

    def refine_to_flag(self):
        """A chain of ideals J = J_1 > J_2 > .. > 0 with codimension-1 steps.

        Refines the power chain deterministically: each layer J^m extends
        J^{m+1} by the earliest echelon basis vectors of J^m.  Verifies
        J*J_i + J_i*J <= J_{i+1} for every step, which makes each member a
        two-sided ideal.
        """
        if self._flag is not None:
            return self._flag
        flag = [self.powers[0]]
        for m in range(len(self.powers) - 1, 0, -1):
            lower_rows, lower_piv = self.powers[m]  # J^{m+1}
            upper_rows, _ = self.powers[m - 1]      # J^m
            cur_rows, cur_piv = list(lower_rows), list(lower_piv)
            intermediates = []
            for v in upper_rows:
                if in_span_fq(cur_rows, cur_piv, v):
                    continue
                cur_rows, cur_piv = rref_fq(list(cur_rows) + [v])
                intermediates.append((cur_rows, cur_piv))
            # the last extension re-derives J^m itself; keep strict ones only
            for space in intermediates[:-1]:
                flag.append(space)
            flag.append(self.powers[m])
        flag = sorted(flag, key=lambda sp: -len(sp[0]))
        dims = [len(rows) for rows, _ in flag]
        if dims != list(range(self.dim, -1, -1)):
            raise ValidationError(f"flag refinement produced dimensions {dims}")
        self._verify_flag_ideals(flag)
        self._flag = flag
        return flag

    def _verify_flag_ideals(self, flag) -> None:
        # J*J_i + J_i*J <= J_{i+1} holds for the power-chain refinement and
        # makes every member a two-sided ideal; check it on basis vectors.
        for idx in range(len(flag) - 1):
            rows, _ = flag[idx]
            nxt_rows, nxt_piv = flag[idx + 1]
            for v in rows:
                rv = AlgVector(self, v)
                for i in range(self.dim):
                    b = self.basis_vector(i)
                    for prod in (rv * b, b * rv):
                        if not in_span_fq(nxt_rows, nxt_piv, prod.coeffs):
                            raise ValidationError(
                                "flag member is not an ideal with codim-1 drop")

    # ------------------------------------------------------ subalgebras --

    def subalgebra(self, rows, *, name: str | None = None,
                   check: bool = True) -> tuple["NilAlgebra", list[AlgVector]]:
        """The algebra structure on an F_q-subspace closed under multiplication.

        rows: echelon basis in the ambient coordinates.  Returns the new
        algebra and the list of ambient basis vectors matching its basis.
        """
        ech, piv = rref_fq(rows)
        basis = [AlgVector(self, r) for r in ech]
        sub_dim = len(basis)
        table = {}
        for i, u in enumerate(basis):
            for j, v in enumerate(basis):
                prod = u * v
                residue, coeffs = reduce_against_fq(ech, piv, prod.coeffs)
                if any(not x.is_zero() for x in residue):
                    raise ValidationError("subspace is not closed under multiplication")
                terms = tuple((k, c) for k, c in enumerate(coeffs) if not c.is_zero())
                if terms:
                    table[(i, j)] = terms
        if sub_dim == 0:
            raise ValidationError("zero subalgebra has no basis")
        sub = NilAlgebra(self.field, sub_dim, table, name=name or f"{self.name}|sub",
                         check=check)
        return sub, basis


# ------------------------------------------------------------ constructors --

def make_unitriangular(n: int, field: Field, budgets: Budgets | None = None) -> NilAlgebra:
    """u_n(F_q): strictly upper triangular n x n matrices.

    Basis e_ij (i < j) ordered by (j - i, i); nilpotency class is n.
    """
    if n < 2:
        raise ValidationError("unitriangular algebra needs n >= 2")
    pairs = sorted(((i, j) for i in range(n) for j in range(i + 1, n)),
                   key=lambda ij: (ij[1] - ij[0], ij[0]))
    index = {ij: t for t, ij in enumerate(pairs)}
    one = field.one
    table = {}
    for a, (i, j) in enumerate(pairs):
        for b, (k, l) in enumerate(pairs):
            if j == k:
                table[(a, b)] = ((index[(i, l)], one),)
    alg = NilAlgebra(field, len(pairs), table,
                     name=f"u_{n}({field.name})", budgets=budgets)
    if alg.nilpotency_class != n:
        raise ValidationError(f"u_{n} must have class {n}, got {alg.nilpotency_class}")
    return alg


def make_augmentation_ideal(group, field: Field,
                            budgets: Budgets | None = None) -> NilAlgebra:
    """I_F[pi]: the augmentation ideal of the group algebra of a p-group over
    a field of the same characteristic, on the basis {g - 1 : g != 1}.
    """
    m = group.order
    p = field.p
    size = m
    while size % p == 0:
        size //= p
    if size != 1 or m == 1:
        raise ValidationError(
            f"group of order {m} is not a nontrivial {p}-group; characteristic must match")
    e = group.identity
    elems = [x for x in range(m) if x != e]
    index = {x: t for t, x in enumerate(elems)}
    one = field.one
    minus = -field.one
    table = {}
    for a, g in enumerate(elems):
        for b, h in enumerate(elems):
            gh = group.mult(g, h)
            terms: dict[int, FieldElement] = {}
            if gh != e:
                terms[index[gh]] = one
            terms[a] = terms.get(a, field.zero) + minus
            terms[b] = terms.get(b, field.zero) + minus
            clean = tuple((k, c) for k, c in sorted(terms.items()) if not c.is_zero())
            if clean:
                table[(a, b)] = clean
    return NilAlgebra(field, m - 1, table,
                      name=f"I_{field.name}[{group.name}]", budgets=budgets)


def make_zero_algebra(dim: int, field: Field) -> NilAlgebra:
    """J with J*J = 0; the algebra group 1+J is elementary abelian."""
    return NilAlgebra(field, dim, {}, name=f"zero(d={dim},{field.name})")


# ----------------------------------------------------------------- files --

def parse_algebra_file(text: str, budgets: Budgets | None = None,
                       name=None) -> NilAlgebra:
    """Parse 'alg p e d' followed by sparse structure lines 'i j k coeff'.

    coeff is the integer code of a field element (base-p digits, constant
    term least significant).
    """
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValidationError("empty algebra file")
    header = lines[0].split()
    if len(header) != 4 or header[0] != "alg":
        raise ValidationError("algebra header must be 'alg p e d'")
    p, e, d = int(header[1]), int(header[2]), int(header[3])
    field = make_field(p, e, budgets)
    table: dict[tuple[int, int], list] = {}
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 4:
            raise ValidationError(f"bad structure line: {ln!r}")
        i, j, k, code = (int(x) for x in parts)
        coeff = field.from_code(code)
        table.setdefault((i, j), []).append((k, coeff))
    return NilAlgebra(field, d, {ij: tuple(t) for ij, t in table.items()},
                      name=name, budgets=budgets)


def serialize_algebra(alg: NilAlgebra) -> str:
    f = alg.field
    out = [f"alg {f.p} {f.e} {alg.dim}"]
    for (i, j), terms in sorted(alg.table.items()):
        for k, c in terms:
            out.append(f"{i} {j} {k} {c.code}")
    return "\n".join(out) + "\n"
