"""Exact integer-polynomial engine.

Mask polynomials P_A(x) = sum of x^a over a digit set A are kept sparse
(exponent -> coefficient); digit sets sitting near N^(2k) have huge degree
but only a handful of terms.  Everything that decides something (vanishing
sums, cyclotomic divisibility, kernel divisibility) is exact integer
arithmetic; floating point appears only as a sound pre-screen that may
reject candidates whose value is provably far from zero.

Phi_d denotes the d-th cyclotomic polynomial, the minimal polynomial of
exp(2*pi*i/d) over the rationals.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Iterable, Sequence

from .digitsets import DigitSet
from .errors import CoverageFailure, EmptyDigitSet


@dataclass(frozen=True)
class MaskPolynomial:
    """Sparse integer polynomial with non-negative exponents.

    ``terms`` is a sorted tuple of (exponent, coefficient) pairs with no
    zero coefficients.  Instances are immutable; arithmetic returns new
    objects, so sharing across threads is safe.
    """

    terms: tuple[tuple[int, int], ...]

    def __post_init__(self):
        clean = tuple(sorted((e, c) for e, c in self.terms if c != 0))
        if any(e < 0 for e, _ in clean):
            raise ValueError("mask polynomials use non-negative exponents only")
        object.__setattr__(self, "terms", clean)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "MaskPolynomial":
        return MaskPolynomial(())

    @staticmethod
    def one() -> "MaskPolynomial":
        return MaskPolynomial(((0, 1),))

    @staticmethod
    def monomial(e: int, c: int = 1) -> "MaskPolynomial":
        return MaskPolynomial(((e, c),))

    @staticmethod
    def from_digits(digits: Iterable[int]) -> "MaskPolynomial":
        ds = list(digits)
        if not ds:
            raise EmptyDigitSet("cannot build a mask from an empty digit set")
        if min(ds) < 0:
            raise ValueError("mask exponents must be non-negative; canonicalize first")
        if len(set(ds)) != len(ds):
            raise ValueError("digits must be distinct")
        return MaskPolynomial(tuple((d, 1) for d in ds))

    @staticmethod
    def from_dense(coeffs: Sequence[int]) -> "MaskPolynomial":
        return MaskPolynomial(tuple((i, c) for i, c in enumerate(coeffs) if c))

    # -- views -------------------------------------------------------------

    def as_dict(self) -> dict[int, int]:
        return dict(self.terms)

    def to_dense(self) -> list[int]:
        if not self.terms:
            return []
        out = [0] * (self.terms[-1][0] + 1)
        for e, c in self.terms:
            out[e] = c
        return out

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return self.terms[-1][0] if self.terms else -1

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_one(self) -> bool:
        return self.terms == ((0, 1),)

    def leading_coefficient(self) -> int:
        return self.terms[-1][1] if self.terms else 0

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "MaskPolynomial") -> "MaskPolynomial":
        acc = self.as_dict()
        for e, c in other.terms:
            acc[e] = acc.get(e, 0) + c
        return MaskPolynomial(tuple(acc.items()))

    def __sub__(self, other: "MaskPolynomial") -> "MaskPolynomial":
        acc = self.as_dict()
        for e, c in other.terms:
            acc[e] = acc.get(e, 0) - c
        return MaskPolynomial(tuple(acc.items()))

    def __neg__(self) -> "MaskPolynomial":
        return MaskPolynomial(tuple((e, -c) for e, c in self.terms))

    def __mul__(self, other: "MaskPolynomial") -> "MaskPolynomial":
        acc: dict[int, int] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = e1 + e2
                acc[e] = acc.get(e, 0) + c1 * c2
        return MaskPolynomial(tuple(acc.items()))

    def __pow__(self, n: int) -> "MaskPolynomial":
        if n < 0:
            raise ValueError("negative powers not defined")
        result = MaskPolynomial.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def compose_power(self, s: int) -> "MaskPolynomial":
        """Substitute x -> x^s."""
        if s < 1:
            raise ValueError("power substitution needs s >= 1")
        return MaskPolynomial(tuple((e * s, c) for e, c in self.terms))

    def evaluate_int(self, x: int) -> int:
        return sum(c * x**e for e, c in self.terms)

    def evaluate_unit(self, theta_num: int, theta_den: int) -> complex:
        """Value at exp(-2*pi*i * theta_num/theta_den), double precision."""
        total = 0.0 + 0.0j
        for e, c in self.terms:
            ph = (e * theta_num) % theta_den
            total += c * cmath.exp(-2j * cmath.pi * ph / theta_den)
        return total

    def content(self) -> int:
        g = 0
        for _, c in self.terms:
            g = math.gcd(g, c)
        return g

    def primitive_part(self) -> "MaskPolynomial":
        g = self.content()
        if g <= 1:
            return self if self.leading_coefficient() >= 0 else -self
        p = MaskPolynomial(tuple((e, c // g) for e, c in self.terms))
        return p if p.leading_coefficient() >= 0 else -p

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            if e == 0:
                parts.append(str(c))
            else:
                mono = "x" if e == 1 else f"x^{e}"
                if c == 1:
                    parts.append(mono)
                elif c == -1:
                    parts.append(f"-{mono}")
                else:
                    parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# Exact division.


def _divmod_dense(num: list[int], den: list[int]) -> tuple[list[int], list[int]] | None:
    """Exact long division over the integers; None if any step needs a fraction."""
    num = num[:]
    dn = len(den) - 1
    lead = den[-1]
    if lead == 0:
        raise ZeroDivisionError("division by zero polynomial")
    quot = [0] * max(len(num) - dn, 0)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c == 0:
            continue
        q, r = divmod(c, lead)
        if r != 0:
            return None
        quot[i - dn] = q
        for j, d in enumerate(den):
            num[i - dn + j] -= q * d
    while num and num[-1] == 0:
        num.pop()
    while quot and quot[-1] == 0:
        quot.pop()
    return quot, num


def divmod_exact(g: MaskPolynomial, f: MaskPolynomial) -> tuple[MaskPolynomial, MaskPolynomial]:
    """Quotient and remainder of g by f over the rationals, demanding that
    both come out integral; raises ValueError otherwise."""
    if f.is_zero:
        raise ZeroDivisionError("division by zero polynomial")
    if g.is_zero:
        return MaskPolynomial.zero(), MaskPolynomial.zero()
    res = _divmod_dense(g.to_dense(), f.to_dense())
    if res is None:
        # Redo over Q to give a correct remainder-based answer.
        q, r = _divmod_fraction(g, f)
        if all(x.denominator == 1 for x in q) and all(x.denominator == 1 for x in r):
            return (
                MaskPolynomial.from_dense([int(x) for x in q]),
                MaskPolynomial.from_dense([int(x) for x in r]),
            )
        raise ValueError("quotient/remainder not integral")
    quot, rem = res
    return MaskPolynomial.from_dense(quot), MaskPolynomial.from_dense(rem)


def _divmod_fraction(g: MaskPolynomial, f: MaskPolynomial):
    num = [Fraction(c) for c in g.to_dense()]
    den = [Fraction(c) for c in f.to_dense()]
    dn = len(den) - 1
    lead = den[-1]
    quot = [Fraction(0)] * max(len(num) - dn, 0)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c == 0:
            continue
        q = c / lead
        quot[i - dn] = q
        for j, d in enumerate(den):
            num[i - dn + j] -= q * d
    while num and num[-1] == 0:
        num.pop()
    while quot and quot[-1] == 0:
        quot.pop()
    return quot, num


def divides(f: MaskPolynomial, g: MaskPolynomial) -> bool:
    """True iff f | g in Z[x]."""
    if f.is_zero:
        raise ZeroDivisionError("zero polynomial divides nothing")
    if g.is_zero:
        return True
    if g.degree < f.degree:
        return False
    try:
        _, rem = divmod_exact(g, f)
    except ValueError:
        return False
    return rem.is_zero


def exact_quotient(g: MaskPolynomial, f: MaskPolynomial) -> MaskPolynomial:
    q, r = divmod_exact(g, f)
    if not r.is_zero:
        raise ValueError("not divisible")
    return q


def gcd_z(a: MaskPolynomial, b: MaskPolynomial) -> MaskPolynomial:
    """Gcd in Z[x], primitive with positive leading coefficient.

    Primitive pseudo-remainder sequence; fine at the sizes that show up in
    common-zero factorizations.
    """
    if a.is_zero:
        return b.primitive_part()
    if b.is_zero:
        return a.primitive_part()
    ca, cb = a.content(), b.content()
    f, g = a.primitive_part(), b.primitive_part()
    if f.degree < g.degree:
        f, g = g, f
    while not g.is_zero:
        # pseudo-remainder: lc(g)^(deg f - deg g + 1) * f mod g
        k = f.degree - g.degree + 1
        lead = g.leading_coefficient()
        scaled = MaskPolynomial(tuple((e, c * lead**k) for e, c in f.terms))
        _, rem = divmod_exact(scaled, g)
        f, g = g, rem.primitive_part() if not rem.is_zero else MaskPolynomial.zero()
    cg = math.gcd(ca, cb)
    if cg > 1:
        f = MaskPolynomial(tuple((e, c * cg) for e, c in f.terms))
    return f


# ---------------------------------------------------------------------------
# Cyclotomic polynomials.


@lru_cache(maxsize=None)
def _prime_factors(n: int) -> tuple[int, ...]:
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        out.append(m)
    return tuple(out)


def _radical(n: int) -> int:
    r = 1
    for p in _prime_factors(n):
        r *= p
    return r


@lru_cache(maxsize=None)
def cyclotomic_poly(d: int) -> MaskPolynomial:
    """Exact coefficients of Phi_d.

    Squarefree indices go through the recursive division
    x^d - 1 = prod over e | d of Phi_e; other indices use
    Phi_d(x) = Phi_rad(d)(x^(d/rad)).
    """
    if d < 1:
        raise ValueError("cyclotomic index must be >= 1")
    if d == 1:
        return MaskPolynomial(((0, -1), (1, 1)))
    rad = _radical(d)
    if rad != d:
        return cyclotomic_poly(rad).compose_power(d // rad)
    poly = MaskPolynomial(((0, -1), (d, 1)))  # x^d - 1
    for e in range(1, d):
        if d % e == 0:
            poly = exact_quotient(poly, cyclotomic_poly(e))
    return poly


def euler_phi(n: int) -> int:
    out = n
    for p in _prime_factors(n):
        out -= out // p
    return out


def compose_cyclotomic_indices(d: int, s: int) -> dict[int, int]:
    """Cyclotomic factorization of Phi_d(x^s) as {index: multiplicity}.

    Phi_d(x^p) equals Phi_{dp}(x) when p | d and Phi_d(x)*Phi_{dp}(x)
    otherwise; applying this prime by prime over s gives the factor list
    without materializing any large polynomial.
    """
    if d < 1 or s < 1:
        raise ValueError("indices must be positive")
    current = {d: 1}
    rest = s
    p = 2
    while rest > 1:
        if rest % p == 0:
            rest //= p
            nxt: dict[int, int] = {}
            for e, m in current.items():
                if e % p == 0:
                    nxt[e * p] = nxt.get(e * p, 0) + m
                else:
                    nxt[e] = nxt.get(e, 0) + m
                    nxt[e * p] = nxt.get(e * p, 0) + m
        else:
            p += 1 if p == 2 else 2
            continue
        current = nxt
    return current


# ---------------------------------------------------------------------------
# Vanishing sums of roots of unity.


def fold_mod(poly: MaskPolynomial, n: int) -> MaskPolynomial:
    """Reduce exponents mod n (reduction mod x^n - 1)."""
    acc: dict[int, int] = {}
    for e, c in poly.terms:
        r = e % n
        acc[r] = acc.get(r, 0) + c
    return MaskPolynomial(tuple(acc.items()))


def has_cyclotomic_factor(poly: MaskPolynomial, d: int) -> bool:
    """Exact test Phi_d | poly, via folding mod x^d - 1 first."""
    if poly.is_zero:
        return True
    folded = fold_mod(poly, d) if poly.degree >= d else poly
    if folded.is_zero:
        return True
    return divides(cyclotomic_poly(d), folded)


@lru_cache(maxsize=None)
def _crt_layout(n: int):
    """CRT tensor layout of Z_n: shape over the prime-power factors, the
    flattening permutation r -> tensor position, and per-axis (p, a)."""
    import numpy as np

    fac: list[tuple[int, int]] = []
    m, p = n, 2
    while p * p <= m:
        if m % p == 0:
            a = 0
            while m % p == 0:
                m //= p
                a += 1
            fac.append((p, a))
        p += 1 if p == 2 else 2
    if m > 1:
        fac.append((m, 1))
    shape = tuple(p**a for p, a in fac)
    r = np.arange(n, dtype=np.int64)
    flat = np.zeros(n, dtype=np.int64)
    stride = 1
    for size in reversed(shape):
        flat += (r % size) * stride
        stride *= size
    return shape, tuple(fac), flat


def _counts_vanish(counts, n: int) -> bool:
    """Exact test: sum of counts[r] * zeta_n^r == 0.

    Writes the value in the tensor power basis of Q(zeta_n) as the tensor
    product over prime powers p^a of Q(zeta_{p^a}); along each axis the
    only relation is that the p slices indexed by v in r = u + v*p^(a-1)
    sum against 1 + eta + ... + eta^(p-1) = 0, so subtracting the top
    slice from the others expresses the value in an actual basis.  The sum
    vanishes iff every resulting entry is zero.  Integer arithmetic
    throughout; equivalent to Phi_n dividing the folded polynomial (the
    equivalence is cross-checked against exact division in the test suite).
    """
    import numpy as np

    shape, fac, flat = _crt_layout(n)
    tensor = np.zeros(len(flat), dtype=np.int64)
    tensor[flat] = counts  # flat is a bijection of Z_n
    tensor = tensor.reshape(shape)
    for axis, (p, a) in enumerate(fac):
        sub = p ** (a - 1)
        new_shape = tensor.shape[:axis] + (p, sub) + tensor.shape[axis + 1 :]
        view = tensor.reshape(new_shape)
        index_top = (slice(None),) * axis + (slice(p - 1, p),)
        index_rest = (slice(None),) * axis + (slice(0, p - 1),)
        tensor = view[index_rest] - view[index_top]
        flat_axis = tensor.shape[: axis] + ((p - 1) * sub,) + tensor.shape[axis + 2 :]
        tensor = tensor.reshape(flat_axis)
    return not np.any(tensor)


def vanishing_sum_test(d_set: DigitSet | Iterable[int], t: int, n: int) -> bool:
    """Decide exactly whether sum over d in D of e(2*pi*i*d*t/n) vanishes.

    The sum is S(zeta_n) for S(x) = sum x^(d*t mod n); it vanishes iff the
    minimal polynomial Phi_n divides S.  The decision runs in the tensor
    power basis (integer arithmetic, linear in n); ``vanishing_by_division``
    is the direct divisibility form, kept as the independent oracle.
    """
    if n < 2:
        raise ValueError("modulus must be >= 2")
    digits = d_set.digits if isinstance(d_set, DigitSet) else tuple(d_set)
    counts = [0] * n
    for d in digits:
        counts[(d * t) % n] += 1
    return _counts_vanish(counts, n)


def vanishing_by_division(d_set: DigitSet | Iterable[int], t: int, n: int) -> bool:
    """Same decision via exact polynomial division by Phi_n (slow, exact)."""
    if n < 2:
        raise ValueError("modulus must be >= 2")
    digits = d_set.digits if isinstance(d_set, DigitSet) else tuple(d_set)
    acc: dict[int, int] = {}
    for d in digits:
        r = (d * t) % n
        acc[r] = acc.get(r, 0) + 1
    folded = MaskPolynomial(tuple(acc.items()))
    if folded.is_zero:
        return True
    return divides(cyclotomic_poly(n), folded)


# ---------------------------------------------------------------------------
# Cyclotomic factorization of mask polynomials.


@dataclass(frozen=True)
class CyclotomicFactorization:
    """factors: ((d, multiplicity), ...); residual has no Phi_d with
    phi(d) <= degree of the input.  The product identity
    prod Phi_d^mult * residual == input is re-checked at construction."""

    factors: tuple[tuple[int, int], ...]
    residual: MaskPolynomial
    input: MaskPolynomial

    def __post_init__(self):
        prod = MaskPolynomial.one()
        for d, m in self.factors:
            prod = prod * cyclotomic_poly(d) ** m
        if prod * self.residual != self.input:
            raise AssertionError("factorization does not multiply back to the input")


def _candidate_indices(max_phi: int) -> list[int]:
    """All d >= 1 with phi(d) <= max_phi.

    phi(d) >= sqrt(d/2), so d <= 2*max_phi^2 is a safe enumeration bound.
    A totient sieve keeps this linear-ish even for degrees in the thousands.
    """
    if max_phi < 1:
        return [1]
    bound = 2 * max_phi * max_phi + 1
    phi = list(range(bound + 1))
    for p in range(2, bound + 1):
        if phi[p] == p:  # p prime
            for m in range(p, bound + 1, p):
                phi[m] -= phi[m] // p
    return [d for d in range(1, bound + 1) if phi[d] <= max_phi]


def cyclotomic_factorization(poly: MaskPolynomial) -> CyclotomicFactorization:
    """Split off every cyclotomic factor Phi_d (with multiplicity).

    Only d with phi(d) <= deg poly can divide, so the candidate list is
    finite.  A double-precision evaluation at a primitive d-th root screens
    out candidates whose value is provably nonzero (forward error is far
    below the rejection threshold); survivors are confirmed by exact
    division.
    """
    if poly.is_zero:
        raise ValueError("cannot factor the zero polynomial")
    if poly.degree > 10_000:
        raise ValueError(
            "degree too large for the complete index search "
            "(the candidate bound grows with degree^2); fold mod x^n - 1 first"
        )
    work = poly
    found: list[tuple[int, int]] = []
    for d in _candidate_indices(poly.degree):
        if work.degree < euler_phi(d):
            continue
        if d > 1:
            val = work.evaluate_unit(1, d)
            # |computed - true| <= ~ mass * 1e-14; anything above the
            # threshold is certainly a nonzero value, so skipping is sound.
            mass = sum(abs(c) for _, c in work.terms)
            if abs(val) > 1e-7 * max(mass, 1):
                continue
        mult = 0
        phi_d = cyclotomic_poly(d)
        while True:
            try:
                q, r = divmod_exact(work, phi_d)
            except ValueError:
                break
            if not r.is_zero:
                break
            work = q
            mult += 1
            if work.degree < euler_phi(d):
                break
        if mult:
            found.append((d, mult))
    return CyclotomicFactorization(tuple(found), work, poly)


# ---------------------------------------------------------------------------
# Common-zero factorization P_{B_s} = F * Q_s.


def common_zero_factorization(
    bs: Sequence[DigitSet],
) -> tuple[MaskPolynomial, list[MaskPolynomial], MaskPolynomial | None]:
    """Largest monic F dividing every P_{B_s}; returns (F, quotients, extra).

    F collects each common cyclotomic factor to its minimal multiplicity
    across the sets.  Any additional non-cyclotomic common factor (possible
    in principle for integer polynomials) is caught by a full Z[x] gcd of
    the quotients and folded into F; it is also returned separately in
    ``extra`` so callers can flag it.  By construction the quotients share
    no root anywhere, in particular at no root of unity.
    """
    if not bs:
        raise EmptyDigitSet("need at least one digit set")
    for b in bs:
        if 0 not in b.digits:
            raise ValueError("common-zero factorization expects 0 in every set")
    masks = [MaskPolynomial.from_digits(b.digits) for b in bs]
    facts = [cyclotomic_factorization(m) for m in masks]
    common: dict[int, int] = dict(facts[0].factors)
    for f in facts[1:]:
        d_map = dict(f.factors)
        common = {d: min(m, d_map[d]) for d, m in common.items() if d in d_map}
    f_poly = MaskPolynomial.one()
    for d, m in sorted(common.items()):
        f_poly = f_poly * cyclotomic_poly(d) ** m
    quotients = [exact_quotient(m, f_poly) for m in masks]
    extra: MaskPolynomial | None = None
    g = reduce(gcd_z, quotients)
    if g.degree > 0:
        extra = g
        f_poly = f_poly * g
        quotients = [exact_quotient(q, g) for q in quotients]
    for m, q in zip(masks, quotients):
        assert f_poly * q == m
    return f_poly, quotients, extra


# ---------------------------------------------------------------------------
# Kernel polynomials for modulo product-forms.


def _lcm(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


@dataclass(frozen=True)
class KernelData:
    """K^(j) together with both computations of its modulus.

    ``n_j`` is the defining value: the lcm of the cyclotomic indices of
    K^(j).  ``n_j_scaled`` is the alternative expression m_j * N^(l_1+..+l_j);
    the two agree exactly when every maximal index appears at the top
    stage scale (true for the canonical p^alpha*q shapes, not for all
    specs), and ``n_j`` always divides ``n_j_scaled``.
    """

    poly: MaskPolynomial
    n_j: int
    n_j_scaled: int
    m_j: int
    index_sets: tuple[tuple[int, ...], ...]  # S_0 .. S_j
    cyclotomic_indices: tuple[tuple[int, int], ...]  # factorization of K^(j)

    @property
    def scaled_identity_holds(self) -> bool:
        return self.n_j == self.n_j_scaled


def kernel_polynomial(
    e_parts: Sequence[DigitSet | Iterable[int]],
    t_indices: Iterable[int],
    ells: Sequence[int],
    n: int,
    j: int,
) -> KernelData:
    """K^(j)(x) = prod over i <= j, d in S_i of Phi_d(x^(N^(l_1+...+l_i))).

    S_i collects the indices d in the target set (d > 1) whose Phi_d divides
    the mask of factor i.  n_j is computed two independent ways: as the lcm
    of the cyclotomic indices of K^(j) (obtained structurally, without
    factoring), and as m_j * N^(l_1+...+l_j); both must agree.  When j is
    the top level the union of the S_i must cover the whole target set.
    """
    k = len(e_parts) - 1
    if not 0 <= j <= k:
        raise ValueError(f"level j={j} out of range 0..{k}")
    if len(ells) != k:
        raise ValueError("need one scale exponent per stage")
    t_set = {int(d) for d in t_indices}
    masks = []
    for part in e_parts:
        digits = part.digits if isinstance(part, DigitSet) else tuple(part)
        masks.append(MaskPolynomial.from_digits(digits))
    s_sets = []
    for mask in masks:
        s_sets.append(tuple(sorted(d for d in t_set if d > 1 and has_cyclotomic_factor(mask, d))))
    covered = set().union(*map(set, s_sets)) if s_sets else set()
    if j == k and covered != t_set:
        raise CoverageFailure(
            f"factor index sets cover {sorted(covered)} but target is {sorted(t_set)}"
        )
    poly = MaskPolynomial.one()
    indices: dict[int, int] = {}
    for i in range(j + 1):
        scale = n ** sum(ells[:i])
        for d in s_sets[i]:
            poly = poly * cyclotomic_poly(d).compose_power(scale)
            for e, m in compose_cyclotomic_indices(d, scale).items():
                indices[e] = indices.get(e, 0) + m
    n_j_structural = _lcm(e for e in indices if e > 1) if indices else 1
    m_j = _lcm(d for i in range(j + 1) for d in s_sets[i]) if any(s_sets[: j + 1]) else 1
    n_j_scaled = m_j * n ** sum(ells[:j])
    if n_j_scaled % n_j_structural:
        raise AssertionError(
            "kernel index lcm must divide m_j * N^L "
            f"({n_j_structural} vs {n_j_scaled})"
        )
    return KernelData(
        poly=poly,
        n_j=n_j_structural,
        n_j_scaled=n_j_scaled,
        m_j=m_j,
        index_sets=tuple(s_sets[: j + 1]),
        cyclotomic_indices=tuple(sorted(indices.items())),
    )
