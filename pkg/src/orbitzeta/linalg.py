"""Exact linear algebra over Z/p and over F_q element tuples.

Subspaces are always represented by reduced row echelon bases so that
equality of subspaces is literal equality of the representations.
"""

from __future__ import annotations

from .ffield import Field, FieldElement


# ---------------------------------------------------------------- mod p ----

def rref_mod_p(rows, p: int):
    """Reduced row echelon form over Z/p. Returns (rows, pivot_cols); input unchanged."""
    mat = [list(r) for r in rows if any(x % p for x in r)]
    for r in mat:
        for i, x in enumerate(r):
            r[i] = x % p
    ncols = len(mat[0]) if mat else 0
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        pivot = next((r for r in range(row, len(mat)) if mat[r][col]), None)
        if pivot is None:
            continue
        mat[row], mat[pivot] = mat[pivot], mat[row]
        inv = pow(mat[row][col], -1, p)
        mat[row] = [(x * inv) % p for x in mat[row]]
        for r in range(len(mat)):
            if r != row and mat[r][col]:
                c = mat[r][col]
                mat[r] = [(a - c * b) % p for a, b in zip(mat[r], mat[row])]
        pivots.append(col)
        row += 1
        if row == len(mat):
            break
    return [tuple(r) for r in mat[:row]], pivots


def rank_mod_p(rows, p: int) -> int:
    return len(rref_mod_p(rows, p)[0])


def nullspace_mod_p(rows, ncols: int, p: int):
    """Echelon basis of {x : A x = 0} for A given by rows of length ncols."""
    ech, pivots = rref_mod_p(rows, p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [0] * ncols
        vec[fc] = 1
        for r, pc in enumerate(pivots):
            vec[pc] = (-ech[r][fc]) % p
        basis.append(tuple(vec))
    return rref_mod_p(basis, p)[0] if basis else []


def in_span_mod_p(echelon_rows, pivots, vec, p: int) -> bool:
    v = [x % p for x in vec]
    for row, pc in zip(echelon_rows, pivots):
        if v[pc]:
            c = v[pc]
            v = [(a - c * b) % p for a, b in zip(v, row)]
    return not any(v)


# ------------------------------------------------------- mod 2, packed ----

def rank_nullspace_mod2_packed(rows_packed: list[int], ncols: int):
    """Rank and nullspace basis for a mod-2 matrix with rows packed as ints.

    Bit i of a row is column i. Returns (rank, nullspace_rows_packed).
    """
    rows = [r for r in rows_packed]
    pivots: list[int] = []
    basis: list[int] = []
    for col in range(ncols):
        mask = 1 << col
        pivot = None
        for idx, r in enumerate(rows):
            if r & mask and (pivot is None):
                pivot = idx
        if pivot is None:
            continue
        pr = rows.pop(pivot)
        for idx, r in enumerate(rows):
            if r & mask:
                rows[idx] = r ^ pr
        basis.append(pr)
        pivots.append(col)
    rank = len(pivots)
    # back substitution for the kernel
    null_rows = []
    free = [c for c in range(ncols) if c not in pivots]
    for fc in free:
        vec = 1 << fc
        # solve for pivot coordinates against the echelon rows, bottom up
        for row, pc in sorted(zip(basis, pivots), key=lambda t: -t[1]):
            # parity of row . vec determines the pc coordinate
            if bin(row & vec).count("1") % 2:
                vec ^= 1 << pc
        null_rows.append(vec)
    return rank, null_rows


# ----------------------------------------------------------------- F_q ----

def rref_fq(rows):
    """Reduced row echelon form for rows of FieldElement. Returns (rows, pivots)."""
    mat = [list(r) for r in rows]
    mat = [r for r in mat if any(not x.is_zero() for x in r)]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        pivot = next((r for r in range(row, len(mat)) if not mat[r][col].is_zero()), None)
        if pivot is None:
            continue
        mat[row], mat[pivot] = mat[pivot], mat[row]
        inv = mat[row][col].inverse()
        mat[row] = [x * inv for x in mat[row]]
        for r in range(len(mat)):
            if r != row and not mat[r][col].is_zero():
                c = mat[r][col]
                mat[r] = [a - c * b for a, b in zip(mat[r], mat[row])]
        pivots.append(col)
        row += 1
        if row == len(mat):
            break
    return [tuple(r) for r in mat[:row]], pivots


def reduce_against_fq(echelon_rows, pivots, vec):
    """Reduce vec against an echelon basis; returns (residue, coefficients)."""
    v = list(vec)
    coeffs = []
    for row, pc in zip(echelon_rows, pivots):
        c = v[pc]
        coeffs.append(c)
        if not c.is_zero():
            v = [a - c * b for a, b in zip(v, row)]
    return v, coeffs


def in_span_fq(echelon_rows, pivots, vec) -> bool:
    residue, _ = reduce_against_fq(echelon_rows, pivots, vec)
    return all(x.is_zero() for x in residue)


def fq_span_from_prime_basis(prime_rows, field: Field, dim: int):
    """Turn a Z/p-echelon basis of an F_q-closed subspace into an F_q-echelon basis.

    prime_rows are flattened coordinate tuples of length dim*e; raises
    AssertionError if the span is not actually closed under F_q scaling.
    """
    e = field.e
    vecs = []
    for row in prime_rows:
        vec = tuple(field.element(row[i * e:(i + 1) * e]) for i in range(dim))
        vecs.append(vec)
    ech, pivots = rref_fq(vecs)
    if len(ech) * e != len(prime_rows):
        raise AssertionError("subspace is not F_q-closed")
    return ech, pivots
