"""Representation zeta data at desk scale: exact SL2(F_q) degree multisets,
truncated Dirichlet series and their convolution for products of groups of
Lie type, abscissa-of-convergence estimation, and the construction of factor
families whose zeta function has a prescribed abscissa.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .budgets import Budgets, check_budget
from .errors import InternalInconsistencyError, ValidationError
from .ffield import is_prime


def prime_power_decompose(n: int):
    """(p, e) with n = p^e, or None."""
    if n < 2:
        return None
    p = None
    m = n
    for cand in range(2, math.isqrt(n) + 1):
        if m % cand == 0:
            p = cand
            break
    if p is None:
        return (n, 1)
    e = 0
    while m % p == 0:
        m //= p
        e += 1
    return (p, e) if m == 1 else None


# ------------------------------------------------------------ Lie types --

@dataclass(frozen=True)
class LieTypeSpec:
    """Combinatorial data of an irreducible root system: rank, number of
    positive roots, Coxeter number, tied by h*rank = |Phi| = 2|Phi+|."""

    label: str
    rank: int
    pos_roots: int
    coxeter: int

    def __post_init__(self):
        if self.rank < 1 or self.pos_roots < 1 or self.coxeter < 1:
            raise ValidationError("root system data must be positive")
        if self.coxeter * self.rank != 2 * self.pos_roots:
            raise ValidationError(
                f"h*rank = {self.coxeter * self.rank} != 2|Phi+| = {2 * self.pos_roots}")

    @classmethod
    def type_a(cls, k: int) -> "LieTypeSpec":
        return cls(f"A{k}", k, k * (k + 1) // 2, k + 1)

    @classmethod
    def type_b(cls, k: int) -> "LieTypeSpec":
        if k < 2:
            raise ValidationError("type B needs rank >= 2")
        return cls(f"B{k}", k, k * k, 2 * k)

    @classmethod
    def type_c(cls, k: int) -> "LieTypeSpec":
        if k < 2:
            raise ValidationError("type C needs rank >= 2")
        return cls(f"C{k}", k, k * k, 2 * k)

    @classmethod
    def type_d(cls, k: int) -> "LieTypeSpec":
        if k < 3:
            raise ValidationError("type D needs rank >= 3")
        return cls(f"D{k}", k, k * (k - 1), 2 * k - 2)


A1 = LieTypeSpec.type_a(1)


# -------------------------------------------------------- degree multisets --

@dataclass(frozen=True)
class DegreeMultiset:
    """Sorted (degree, multiplicity) pairs for one group's irreducibles."""

    entries: tuple

    def __post_init__(self):
        for deg, mult in self.entries:
            if deg < 1 or mult < 1:
                raise ValidationError("degrees and multiplicities must be positive")
        if list(self.entries) != sorted(self.entries):
            raise ValidationError("entries must be sorted by degree")
        degs = [d for d, _ in self.entries]
        if len(set(degs)) != len(degs):
            raise ValidationError("duplicate degree entries")

    def count(self) -> int:
        return sum(m for _, m in self.entries)

    def sum_degree_squares(self) -> int:
        return sum(m * d * d for d, m in self.entries)

    def min_nontrivial_degree(self) -> int:
        for d, _ in self.entries:
            if d > 1:
                return d
        raise ValidationError("multiset has no nontrivial degree")


def sl2_degrees(q: int) -> DegreeMultiset:
    """Irreducible degrees of SL2(F_q) for odd q >= 5, with multiplicities:
    1, q once; (q+1) with multiplicity (q-3)/2; (q-1) with (q-1)/2; and
    (q+1)/2, (q-1)/2 twice each.

    Validated on every call: q+4 irreducibles, sum of squares q(q^2-1).
    """
    pp = prime_power_decompose(q)
    if pp is None or not is_prime(pp[0]):
        raise ValidationError(f"{q} is not a prime power")
    if q % 2 == 0 or q < 5:
        raise ValidationError("need odd q >= 5")
    raw = [
        (1, 1),
        ((q - 1) // 2, 2),
        ((q + 1) // 2, 2),
        (q - 1, (q - 1) // 2),
        (q, 1),
        (q + 1, (q - 3) // 2),
    ]
    ms = DegreeMultiset(tuple(sorted((d, m) for d, m in raw if m > 0)))
    if ms.count() != q + 4:
        raise InternalInconsistencyError(
            f"SL2({q}) multiset has {ms.count()} entries, expected {q + 4}")
    if ms.sum_degree_squares() != q * (q * q - 1):
        raise InternalInconsistencyError(
            f"SL2({q}) sum of degree squares mismatches the group order")
    return ms


# ------------------------------------------------------ truncated series --

class TruncatedDirichlet:
    """Dirichlet series coefficients r_1..r_N as exact integers.

    exact=True means every coefficient below the cutoff is the true one;
    approximant series (AKOV two-term factors) carry exact=False.
    """

    __slots__ = ("N", "coeffs", "exact")

    def __init__(self, N: int, coeffs=None, exact: bool = True):
        if N < 1:
            raise ValidationError("cutoff must be >= 1")
        self.N = N
        if coeffs is None:
            coeffs = [0] * (N + 1)
        if len(coeffs) != N + 1:
            raise ValidationError("coefficient array must have length N+1")
        self.coeffs = coeffs
        self.exact = exact

    @classmethod
    def identity(cls, N: int) -> "TruncatedDirichlet":
        out = cls(N)
        out.coeffs[1] = 1
        return out

    @classmethod
    def from_degree_multiset(cls, ms: DegreeMultiset, N: int) -> "TruncatedDirichlet":
        out = cls(N)
        for d, m in ms.entries:
            if d <= N:
                out.coeffs[d] += m
        if out.coeffs[1] < 1:
            raise ValidationError("group series must contain the trivial representation")
        return out

    def r(self, n: int) -> int:
        if not 1 <= n <= self.N:
            raise ValidationError(f"coefficient index {n} outside 1..{self.N}")
        return self.coeffs[n]

    def partial_count(self, n: int) -> int:
        """R_n = number of irreducibles of degree <= n."""
        if not 1 <= n <= self.N:
            raise ValidationError(f"index {n} outside 1..{self.N}")
        return sum(self.coeffs[1:n + 1])

    def support(self):
        return [(n, c) for n, c in enumerate(self.coeffs) if n >= 1 and c]

    def partial_sum(self, s: float) -> float:
        """Sum of r_n / n^s over the truncation range."""
        return sum(c * n ** (-s) for n, c in self.support())

    def __mul__(self, other: "TruncatedDirichlet") -> "TruncatedDirichlet":
        return dirichlet_product(self, other)

    def __eq__(self, other) -> bool:
        return (isinstance(other, TruncatedDirichlet) and self.N == other.N
                and self.coeffs == other.coeffs and self.exact == other.exact)

    def __repr__(self) -> str:
        head = {n: c for n, c in self.support()[:6]}
        tag = "exact" if self.exact else "approx"
        return f"TruncatedDirichlet(N={self.N}, {tag}, head={head})"


def dirichlet_product(f: TruncatedDirichlet, g: TruncatedDirichlet,
                      N: int | None = None) -> TruncatedDirichlet:
    """(fg)_n = sum over ab = n of f_a g_b, exactly, below the cutoff."""
    if N is None:
        N = min(f.N, g.N)
    if N > min(f.N, g.N):
        raise ValidationError("product cutoff exceeds an operand cutoff")
    # iterate over the sparser factor
    fs, gs = f.support(), g.support()
    dense, sparse = (f, gs) if len(fs) >= len(gs) else (g, fs)
    out = [0] * (N + 1)
    dc = dense.coeffs
    dlim = dense.N
    for d, c in sparse:
        if d > N:
            break
        top = min(N // d, dlim)
        for n in range(1, top + 1):
            if dc[n]:
                out[n * d] += dc[n] * c
    return TruncatedDirichlet(N, out, exact=f.exact and g.exact)


# ----------------------------------------------------------- AKOV terms --

def akov_term(L: LieTypeSpec, q: int):
    """(a, b) of the two-term approximant 1 + a * m^(-s) at m = q^b:
    a = q^rank, b = |Phi+|."""
    if q < 2:
        raise ValidationError("need q >= 2")
    return q ** L.rank, L.pos_roots


def akov_series(L: LieTypeSpec, q: int, N: int) -> TruncatedDirichlet:
    a, b = akov_term(L, q)
    out = TruncatedDirichlet(N, exact=False)
    out.coeffs[1] = 1
    if q ** b <= N:
        out.coeffs[q ** b] += a
    return out


# ---------------------------------------------------------- factor specs --

@dataclass
class FactorSpec:
    """A product of finite groups of Lie type: (type, q, multiplicity)."""

    factors: list
    name: str = ""

    def __post_init__(self):
        for L, q, mult in self.factors:
            if not isinstance(L, LieTypeSpec):
                raise ValidationError("factor type must be a LieTypeSpec")
            if q < 2 or mult < 0:
                raise ValidationError("factor needs q >= 2 and multiplicity >= 0")


def sl2_tower(p: int, imax: int) -> FactorSpec:
    """Product of SL2(F_p^i) for i = 1..imax, one copy each."""
    return FactorSpec([(A1, p ** i, 1) for i in range(1, imax + 1)],
                      name=f"sl2-tower-{p}")


def product_series(spec: FactorSpec, N: int, mode: str = "exact",
                   budgets: Budgets | None = None) -> TruncatedDirichlet:
    """Convolution of the factor series, truncated at N.

    Only factors whose minimal nontrivial degree is <= N contribute; the
    rest multiply the series by 1 + O(n^(-s)) terms beyond the cutoff.
    exact mode requires type A1 with odd q (SL2 data); akov mode uses the
    two-term approximants with binomial expansion across multiplicities.
    """
    check_budget(budgets, "series_cutoff_max", N)
    if mode not in ("exact", "akov"):
        raise ValidationError(f"unknown mode {mode!r}")
    out = TruncatedDirichlet.identity(N)
    for L, q, mult in spec.factors:
        if mult == 0:
            continue
        if mode == "exact":
            if (L.rank, L.pos_roots) != (1, 1):
                raise ValidationError(
                    f"exact mode supports only type A1 factors, got {L.label}")
            ms = sl2_degrees(q)
            if ms.min_nontrivial_degree() > N:
                continue
            f = TruncatedDirichlet.from_degree_multiset(ms, N)
            for _ in range(mult):
                out = dirichlet_product(out, f)
        else:
            a, b = akov_term(L, q)
            base = q ** b
            if base > N:
                continue
            f = TruncatedDirichlet(N, exact=False)
            f.coeffs[1] = 1
            j = 1
            while base ** j <= N and j <= mult:
                f.coeffs[base ** j] += math.comb(mult, j) * a ** j
                j += 1
            out = dirichlet_product(out, f)
    if mode == "akov":
        out.exact = False
    return out


# --------------------------------------------------------------- l_H(n) --

@dataclass(frozen=True)
class MinDegreeBound:
    """Lower bound min-degree > d*q^(e*rank) for non-A1 types.  The absolute
    constants are not pinned down anywhere, so they are explicit inputs."""

    d: float
    e: float

    def __post_init__(self):
        if self.d <= 0 or self.e <= 1:
            raise ValidationError("need d > 0 and e > 1")

    def threshold(self, L: LieTypeSpec, q: int) -> float:
        return self.d * q ** (self.e * L.rank)


def min_nontrivial_degree(L: LieTypeSpec, q: int,
                          bound: MinDegreeBound | None = None) -> int:
    """Exact (q-1)/2 for A1 with odd q >= 5; otherwise the AKOV support
    degree q^|Phi+|, or the configured bound threshold."""
    if (L.rank, L.pos_roots) == (1, 1) and q % 2 == 1 and q >= 5:
        return (q - 1) // 2
    if bound is not None:
        return math.ceil(bound.threshold(L, q))
    return q ** L.pos_roots


def l_of_n(spec: FactorSpec, n: int,
           bound: MinDegreeBound | None = None) -> int:
    """Number of factors, with multiplicity, having an irreducible of
    nontrivial degree <= n."""
    total = 0
    for L, q, mult in spec.factors:
        if min_nontrivial_degree(L, q, bound) <= n:
            total += mult
    return total


def prg_witness(series: TruncatedDirichlet, spec: FactorSpec, n: int,
                bound: MinDegreeBound | None = None) -> bool:
    """R_(n^2) >= l(n)(l(n)-1)/2 — the counting inequality behind the
    polynomial-representation-growth characterization."""
    if n * n > series.N:
        raise ValidationError(f"need n^2 = {n * n} within the cutoff {series.N}")
    l = l_of_n(spec, n, bound)
    return series.partial_count(n * n) >= l * (l - 1) // 2


# ---------------------------------------------------- abscissa estimation --

@dataclass
class AbscissaEstimate:
    estimate: float            # log R_N / log N at the cutoff
    tail_max: float            # max of log R_n / log n over the tail n >= N^tail_exponent
    ls_slope: float            # least-squares slope of log R_n vs log n on the tail
    path: list                 # (n, R_n, log R_n / log n) on the geometric grid
    N: int


def abscissa_estimate(series: TruncatedDirichlet, grid: int = 48,
                      tail_exponent: float = 0.5) -> AbscissaEstimate:
    """Sample log R_n / log n on a geometric grid.  The estimate is the
    ratio at the cutoff N; the tail maximum and the least-squares slope
    over n >= N^tail_exponent come along as stability diagnostics.  An
    estimator, not a certificate: the limsup is invisible to any finite
    truncation, and lumpy degree distributions keep the tail max well
    above the limit long after the cutoff ratio has settled.
    """
    N = series.N
    if N < 4:
        raise ValidationError("series too short to estimate anything")
    points = sorted({max(2, round(N ** (j / grid))) for j in range(1, grid + 1)})
    path = []
    acc = 0
    prev = 0
    for n in points:
        acc += sum(series.coeffs[prev + 1:n + 1])
        prev = n
        ratio = math.log(acc) / math.log(n) if acc >= 1 else 0.0
        path.append((n, acc, ratio))
    cutoff = N ** tail_exponent
    tail = [(n, r, ratio) for n, r, ratio in path if n >= cutoff and r >= 1]
    if not tail:
        raise InternalInconsistencyError("empty tail in abscissa estimation")
    est = next(ratio for n, _, ratio in reversed(path) if n == points[-1])
    tail_max = max(ratio for _, _, ratio in tail)
    xs = [math.log(n) for n, _, _ in tail]
    ys = [math.log(r) for _, r, _ in tail]
    if len(tail) >= 2:
        mx = sum(xs) / len(xs)
        my = sum(ys) / len(ys)
        denom = sum((x - mx) ** 2 for x in xs)
        slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / denom if denom else est
    else:
        slope = est
    return AbscissaEstimate(est, tail_max, slope, path, N)


def integer_root(x: int, k: int) -> int:
    """Floor k-th root of a nonnegative integer, exactly."""
    if x < 0 or k < 1:
        raise ValidationError("need x >= 0 and k >= 1")
    if x in (0, 1) or k == 1:
        return x
    guess = int(round(x ** (1.0 / k)))
    while guess ** k > x:
        guess -= 1
    while (guess + 1) ** k <= x:
        guess += 1
    return guess


def synthetic_power_series(c, N: int) -> TruncatedDirichlet:
    """r_n = floor(n^c) - floor((n-1)^c) for rational c, so R_n = floor(n^c)
    exactly and the true abscissa is c."""
    c = Fraction(c)
    if c <= 0:
        raise ValidationError("exponent must be positive")
    a, b = c.numerator, c.denominator
    out = TruncatedDirichlet(N)
    prev = 0
    for n in range(1, N + 1):
        cur = integer_root(n ** a, b)
        out.coeffs[n] = cur - prev
        prev = cur
    return out


# ------------------------------------------------- target-abscissa builder --

@dataclass
class TargetSpec:
    """Factor family Prod L(p^i)^(f(i)) whose zeta abscissa is the target c:
    f(i) = p^(k(h a_i - 2i)/2) for i > n0, with a_i tracking i*c."""

    L: LieTypeSpec
    p: int
    c: Fraction
    n0: int
    entries: list              # (i, a_i, f_i) with f_i = 0 for i <= n0

    def to_factor_spec(self) -> FactorSpec:
        return FactorSpec([(self.L, self.p ** i, f) for i, _, f in self.entries if f > 0],
                          name=f"target-c={self.c}")

    def akov_partial_sums(self, s: float, imax: int | None = None):
        """Saturating partial sums of f(i) * p^(ik(1 - sh/2)) = the series
        contribution p^((ikh/2)(a_i/i - s)) per factor, at real s."""
        k, h, p = self.L.rank, self.L.coxeter, self.p
        sums = []
        acc = 0.0
        for i, a, f in self.entries:
            if imax is not None and i > imax:
                break
            if f == 0:
                sums.append((i, acc))
                continue
            log10_term = (i * k * h / 2.0) * (a / i - s) * math.log10(p)
            term = 10.0 ** min(log10_term, 300.0)
            acc = min(acc + term, 1e300)
            sums.append((i, acc))
        return sums


def target_abscissa_spec(c, L: LieTypeSpec, p: int, imax: int = 400) -> TargetSpec:
    """Choose a_i = max(floor(ic), ceil(2i/h)) and f(i) = p^(k(h a_i - 2i)/2).

    Needs h even (so the exponent is an integer) and k*h*c > 2 (so the
    series diverges at s < c).  a_i = floor(ic) satisfies the window
    0 <= c - a_i/i < 1/i; the ceil(2i/h) adjustment (only possible for
    small i) keeps the multiplicity exponent nonnegative.
    """
    c = Fraction(c)
    if c <= 0:
        raise ValidationError("target abscissa must be positive")
    if not is_prime(p):
        raise ValidationError(f"{p} is not prime")
    k, h = L.rank, L.coxeter
    if h % 2:
        raise ValidationError("construction requires an even Coxeter number")
    if Fraction(k * h) * c <= 2:
        raise ValidationError(f"need k*h*c > 2, got {k * h * Fraction(c)}")
    entries = []
    n0 = None
    for i in range(1, imax + 1):
        floor_ic = (i * c.numerator) // c.denominator
        ceil_2ih = -((-2 * i) // h)
        a = max(floor_ic, ceil_2ih)
        if n0 is None and k * h * a > 2 * i:
            n0 = i
        exponent = k * (h * a - 2 * i)
        if exponent % 2:
            raise InternalInconsistencyError("odd multiplicity exponent with even h")
        f = p ** (exponent // 2) if (n0 is not None and i > n0) else 0
        entries.append((i, a, f))
    if n0 is None:
        raise InternalInconsistencyError("threshold index not found; khc > 2 should force it")
    return TargetSpec(L, p, c, n0, entries)


# ------------------------------------------------------- factorizations --

@lru_cache(maxsize=None)
def divisor_tuple_count(n: int) -> int:
    """Ordered factorizations of n into parts >= 2; 1 has the empty one."""
    if n < 1:
        raise ValidationError("need n >= 1")
    if n == 1:
        return 1
    total = 0
    d = 2
    while d * d <= n:
        if n % d == 0:
            total += divisor_tuple_count(n // d)
            if d != n // d:
                total += divisor_tuple_count(d)
        d += 1
    return total + 1  # the one-part factorization (n)