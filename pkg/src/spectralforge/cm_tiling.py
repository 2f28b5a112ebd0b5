"""Tiling conditions on Z_N, the associated spectra, and the modulo
product-form generators for tile digit sets of p^alpha*q.

The two divisibility conditions on a finite A in Z_N:

* size condition: P_A(1) equals the product of Phi_s(1) over the prime
  powers s | N with Phi_s | P_A (each contributes its prime);
* product condition: for prime powers s_1..s_k of pairwise distinct primes
  drawn from that set, Phi_{s_1...s_k} | P_A.

Together they certify that A tiles Z_N and carries the explicit spectrum
{sum over s of eps_s * N/s}.  Failure of the size condition certifies that
A does not tile Z_N.  Nothing is assumed: every emitted spectrum is pushed
through the exact Hadamard checker, and small groups get an exhaustive
complement search as ground truth.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

from .cyclotomic import (
    KernelData,
    MaskPolynomial,
    divides,
    fold_mod,
    has_cyclotomic_factor,
    kernel_polynomial,
)
from .digitsets import DigitSet, direct_sum_digits
from .errors import (
    CMConditionFailure,
    InvalidVariantParams,
    KernelDivisibilityFailure,
    NotCompleteResidues,
    OverlapError,
    SpectrumUnavailable,
    ValidationFailure,
)
from .hadamard import verify_triple
from .productform import KStageForm, ValidationReport, as_layer, validate_k_stage


def _divisors(n: int) -> list[int]:
    out = [d for d in range(1, int(math.isqrt(n)) + 1) if n % d == 0]
    return sorted(set(out + [n // d for d in out]))


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    m, p = n, 2
    while p * p <= m:
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and _factorize(n) == {n: 1}


def _prime_power_base(s: int) -> int | None:
    f = _factorize(s)
    return next(iter(f)) if len(f) == 1 else None


# ---------------------------------------------------------------------------
# Profiles.


@dataclass(frozen=True)
class CMProfile:
    digits: DigitSet
    modulus: int
    s_indices: tuple[int, ...]
    t1: bool
    t2: bool
    tiling_spectrum: DigitSet | None
    distinct_mod: bool
    t1_detail: str = ""
    t2_detail: str = ""

    @property
    def tiles_certified(self) -> bool:
        return self.t1 and self.t2


def cm_profile(a: DigitSet, n: int) -> CMProfile:
    """Divisibility profile of A mod N with the explicit spectrum when both
    conditions hold.  The spectrum is certified through verify_triple before
    being emitted; emission without certification is a bug, not an option.
    """
    distinct = a.distinct_mod(n)
    residues = tuple(sorted({d % n for d in a.digits}))
    mask = MaskPolynomial.from_digits(residues)
    s_indices = tuple(
        s
        for s in _divisors(n)
        if s > 1 and _prime_power_base(s) is not None and has_cyclotomic_factor(mask, s)
    )
    expected = 1
    for s in s_indices:
        expected *= _prime_power_base(s)
    t1 = mask.evaluate_int(1) == expected
    t1_detail = f"|A mod N| = {len(residues)} vs product {expected}"

    t2 = True
    t2_detail = ""
    by_prime: dict[int, list[int]] = {}
    for s in s_indices:
        by_prime.setdefault(_prime_power_base(s), []).append(s)
    primes = sorted(by_prime)
    for r in range(2, len(primes) + 1):
        for chosen in itertools.combinations(primes, r):
            for combo in itertools.product(*[by_prime[p] for p in chosen]):
                idx = math.prod(combo)
                if not has_cyclotomic_factor(mask, idx):
                    t2 = False
                    t2_detail = f"Phi_{idx} (from {combo}) does not divide the mask"
                    break
            if not t2:
                break
        if not t2:
            break

    spectrum = None
    if t1 and t2:
        spectrum = explicit_tiling_spectrum(s_indices, n)
        verify_triple(n, DigitSet(max(n, 2), residues), spectrum)
    return CMProfile(
        digits=a,
        modulus=n,
        s_indices=s_indices,
        t1=t1,
        t2=t2,
        tiling_spectrum=spectrum,
        distinct_mod=distinct,
        t1_detail=t1_detail,
        t2_detail=t2_detail,
    )


def explicit_tiling_spectrum(s_indices: Sequence[int], n: int) -> DigitSet:
    """{sum over s of eps_s * N/s : 0 <= eps_s < prime of s}."""
    ranges = []
    for s in s_indices:
        p = _prime_power_base(s)
        if p is None or n % s:
            raise ValueError(f"{s} is not a prime power dividing {n}")
        ranges.append([e * (n // s) for e in range(p)])
    digits = direct_sum_digits(*ranges) if ranges else (0,)
    return DigitSet(max(n, 2), digits)


# ---------------------------------------------------------------------------
# Tiling verdicts.


@dataclass(frozen=True)
class TileVerdict:
    verdict: str  # TilesByT1T2 | NotTileByT1Failure | Unknown
    profile: CMProfile
    exhaustive: bool | None  # exact answer when the search ran
    witness: DigitSet | None  # complement with A (+) C == Z_N

    @property
    def tiles(self) -> bool | None:
        if self.exhaustive is not None:
            return self.exhaustive
        if self.verdict == "TilesByT1T2":
            return True
        if self.verdict == "NotTileByT1Failure":
            return False
        return None


def tile_complement(a: DigitSet, n: int) -> tuple[int, ...] | None:
    """Exhaustive search for C with A (+) C == Z_N; None when there is none.

    Depth-first over the lowest uncovered residue, with a memo of dead
    cover states; bitmask arithmetic keeps states cheap.
    """
    residues = sorted({d % n for d in a.digits})
    if n % len(residues):
        return None
    masks = []
    for c in range(n):
        m = 0
        for r in residues:
            m |= 1 << ((r + c) % n)
        masks.append(m)
    full = (1 << n) - 1
    dead: set[int] = set()

    def rec(used: int, chosen: tuple[int, ...]):
        if used == full:
            return chosen
        if used in dead:
            return None
        # lowest uncovered residue
        r = ((~used) & -(~used)).bit_length() - 1
        for c in sorted({(r - x) % n for x in residues}):
            m = masks[c]
            if m & used:
                continue
            hit = rec(used | m, chosen + (c,))
            if hit is not None:
                return hit
        dead.add(used)
        return None

    return rec(0, ())


def check_tile_zn(a: DigitSet, n: int, exhaustive_bound: int = 10_000) -> TileVerdict:
    """Condition-based verdict, with exhaustive ground truth for small N.

    When both searches run their answers are cross-checked: a certified
    tiler must be found by the search and a size-condition failure must
    not; disagreement raises, since it would falsify the certificates.
    """
    profile = cm_profile(a, n)
    if profile.tiles_certified:
        verdict = "TilesByT1T2"
    elif not profile.t1:
        verdict = "NotTileByT1Failure"
    else:
        verdict = "Unknown"
    exhaustive = None
    witness = None
    if n <= exhaustive_bound:
        comp = tile_complement(a, n)
        exhaustive = comp is not None
        if comp is not None:
            witness = DigitSet(max(n, 2), tuple(sorted(set(comp))))
        if verdict == "TilesByT1T2" and not exhaustive:
            raise AssertionError("certified tiler rejected by exhaustive search")
        if verdict == "NotTileByT1Failure" and exhaustive:
            raise AssertionError("size-condition failure contradicted by a found tiling")
    return TileVerdict(verdict, profile, exhaustive, witness)


# ---------------------------------------------------------------------------
# Modulo product-forms.


@dataclass(frozen=True)
class ModuloProductFormSpec:
    """Factor sets E_0..E_k, target index set, stage scales, and explicit
    representative shifts z(stage, parent, e) for the mod-n_j freedom."""

    base: int
    parts: tuple[DigitSet, ...]
    t_indices: tuple[int, ...]
    ells: tuple[int, ...]
    zshifts: tuple[tuple[tuple[int, int, int], int], ...] = ()

    def __post_init__(self):
        if len(self.ells) != len(self.parts) - 1:
            raise ValueError("need one scale per stage beyond level 0")
        if any(e < 1 for e in self.ells):
            raise ValueError("stage scales must be positive")
        object.__setattr__(self, "t_indices", tuple(sorted(set(self.t_indices))))
        object.__setattr__(self, "zshifts", tuple(sorted(self.zshifts)))

    @property
    def stages(self) -> int:
        return len(self.parts) - 1

    def z(self, stage: int, parent: int, e: int) -> int:
        for key, val in self.zshifts:
            if key == (stage, parent, e):
                return val
        return 0


def modulo_spec(base, parts, t_indices, ells, zshifts=None) -> ModuloProductFormSpec:
    fixed = tuple(p if isinstance(p, DigitSet) else DigitSet(base, tuple(p)) for p in parts)
    zs = tuple(sorted((tuple(k), v) for k, v in (zshifts or {}).items())) if isinstance(
        zshifts, Mapping
    ) else tuple(zshifts or ())
    return ModuloProductFormSpec(base, fixed, tuple(t_indices), tuple(ells), zs)


@lru_cache(maxsize=None)
def spec_kernels(spec: ModuloProductFormSpec) -> tuple[KernelData, ...]:
    """Kernel data for every level; validates coverage and index divisibility."""
    e_all = direct_sum_digits(*[p.digits for p in spec.parts])
    mask = MaskPolynomial.from_digits(tuple(x - min(e_all) for x in e_all))
    for d in spec.t_indices:
        if not has_cyclotomic_factor(mask, d):
            raise ValueError(f"Phi_{d} does not divide the mask of the full direct sum")
    return tuple(
        kernel_polynomial(list(spec.parts), spec.t_indices, list(spec.ells), spec.base, j)
        for j in range(spec.stages + 1)
    )


def generate_modulo_product_form(spec: ModuloProductFormSpec) -> DigitSet:
    """Iterate D_j = D_(j-1) + N^(l_1+..+l_j) * (E_j + m_j * z) and certify
    that the top kernel polynomial divides the mask of the result."""
    kernels = spec_kernels(spec)
    digits = list(spec.parts[0].digits)
    total = 0
    for j in range(1, spec.stages + 1):
        total += spec.ells[j - 1]
        scale = spec.base**total
        m_j = kernels[j].m_j
        seen: dict[int, tuple[int, int]] = {}
        for d in digits:
            for e in spec.parts[j].digits:
                x = d + scale * (e + m_j * spec.z(j, d, e))
                if x in seen:
                    raise OverlapError(x, seen[x], (d, e), stage=j)
                seen[x] = (d, e)
        digits = sorted(seen)
    low = min(digits)
    mask = MaskPolynomial.from_digits(tuple(x - low for x in digits))
    top = kernels[spec.stages]
    # K^(k) divides x^(n_k) - 1, so folding the mask mod n_k preserves the
    # divisibility question while keeping the division small
    folded = fold_mod(mask, top.n_j)
    if not (folded.is_zero or divides(top.poly, folded)):
        raise KernelDivisibilityFailure(
            "kernel polynomial does not divide the generated mask; invalid spec or bug"
        )
    return DigitSet(spec.base, tuple(digits))


def modulo_to_k_stage(
    spec: ModuloProductFormSpec,
    spectra: Sequence[DigitSet] | None = None,
) -> tuple[KStageForm, ValidationReport]:
    """Parent-keyed layer tree E_j(d) = {e + m_j * z(d,e)} with spectra.

    Spectra default to the explicit tiling spectra of the factor sets; a
    factor failing the tiling conditions raises SpectrumUnavailable.  The
    resulting form is validated exactly and the report returned; failures
    are reported, never patched.
    """
    kernels = spec_kernels(spec)
    if spectra is None:
        spectra = []
        for idx, part in enumerate(spec.parts):
            prof = cm_profile(part, spec.base)
            if prof.tiling_spectrum is None:
                raise SpectrumUnavailable(idx, prof.t1_detail or prof.t2_detail)
            spectra.append(prof.tiling_spectrum)
    if len(spectra) != len(spec.parts):
        raise ValueError("need one spectrum per factor set")

    digits = list(spec.parts[0].digits)
    layers: list = []
    total = 0
    for j in range(1, spec.stages + 1):
        total += spec.ells[j - 1]
        scale = spec.base**total
        m_j = kernels[j].m_j
        this_layer: dict[int, DigitSet] = {}
        nxt = []
        constant = True
        for d in digits:
            shifted = tuple(e + m_j * spec.z(j, d, e) for e in spec.parts[j].digits)
            this_layer[d] = DigitSet(spec.base, shifted)
            constant = constant and tuple(sorted(shifted)) == spec.parts[j].digits
            nxt.extend(d + scale * e for e in shifted)
        layers.append(spec.parts[j] if constant else as_layer(this_layer))
        digits = sorted(nxt)
    form = KStageForm(
        base=spec.base,
        ells=spec.ells,
        e0=spec.parts[0],
        layers=tuple(layers),
        spectra=tuple(spectra),
    )
    return form, validate_k_stage(form)


# ---------------------------------------------------------------------------
# p^alpha * q generators.


def _range_set(p: int) -> tuple[int, ...]:
    return tuple(range(p))


def _scaled(base: int, s: int, p: int) -> DigitSet:
    return DigitSet(base, tuple(s * e for e in range(p)))


def _scaled_prime_indices(r: int, s: int) -> set[int]:
    """Cyclotomic indices of the mask of s*{0..r-1}: divisors of r*s not
    dividing s."""
    return {d for d in _divisors(r * s) if s % d}


@dataclass(frozen=True)
class CongruenceCheck:
    label: str
    lhs: tuple[int, ...]
    rhs: tuple[int, ...]
    modulus: int

    @property
    def ok(self) -> bool:
        return {x % self.modulus for x in self.lhs} == {y % self.modulus for y in self.rhs}


@dataclass(frozen=True)
class PaqResult:
    multiplier: int
    digits: DigitSet  # tile digit set (generated set divided by multiplier)
    form: KStageForm  # validated form for multiplier * digits
    report: ValidationReport
    generated: DigitSet  # expansion of the factor data the form came from
    spec_generated: ModuloProductFormSpec
    spec_original: ModuloProductFormSpec | None = None
    original_digits: DigitSet | None = None
    congruences: tuple[CongruenceCheck, ...] = ()


def paq_type_generator(
    p: int,
    q: int,
    alpha: int,
    variant: str,
    m_values: Sequence[int] | None = None,
    ells: Sequence[int] | None = None,
    zshifts=None,
    q_multiplier_exponent: int | None = None,
) -> PaqResult:
    """Generate a tile digit set of N = p^alpha * q of the given shape.

    Variants:
      i   : E_p (+) p*E_q (+) p^j*q*E_p for j = 1..alpha-1
      ii  : E_p (+) p^(alpha*(M+1)+k)*E_q (+) p^(alpha*M_j+j)*E_p; the
            returned form lives over q^M times the digit set, where the
            scaling turns the nested shape into a first-order one
      iii : E_q (+) p^j*q*E_p for j = 0..alpha-1

    Spectra attached per level make every stage an exactly verified
    Hadamard triple; the form validation re-checks all products.  For
    variant ii the defining residue congruences of the q^M scaling are
    checked exactly and returned.

    ``q_multiplier_exponent`` overrides the exponent M of the variant-ii
    multiplier (exploration hook; values other than M are expected to break
    the first-order completeness check and raise NotCompleteResidues).
    """
    if not (is_prime(p) and is_prime(q)) or p == q:
        raise InvalidVariantParams("p, q must be distinct primes")
    if alpha < 1:
        raise InvalidVariantParams("alpha must be >= 1")
    n = p**alpha * q
    ep = _range_set(p)
    eq = _range_set(q)

    if variant == "i":
        parts = [DigitSet(n, ep), _scaled(n, p, q)]
        parts += [_scaled(n, p**j * q, p) for j in range(1, alpha)]
        spectra = [_scaled(n, p ** (alpha - 1) * q, p), _scaled(n, p ** (alpha - 1), q)]
        spectra += [_scaled(n, p ** (alpha - j), p) for j in range(2, alpha + 1)]
    elif variant == "iii":
        parts = [DigitSet(n, eq)]
        parts += [_scaled(n, p**j * q, p) for j in range(0, alpha)]
        spectra = [_scaled(n, p**alpha, q)]
        spectra += [_scaled(n, p ** (alpha - j), p) for j in range(1, alpha + 1)]
    elif variant == "ii":
        if alpha < 2:
            raise InvalidVariantParams("variant ii needs alpha >= 2")
        ms = list(m_values) if m_values is not None else [1] * (alpha - 1)
        if len(ms) != alpha - 1 or any(m < 0 for m in ms):
            raise InvalidVariantParams("variant ii needs alpha-1 shift exponents >= 0")
        big_m = max(ms)
        k_idx = max(j for j in range(1, alpha) if ms[j - 1] == big_m)
        return _variant_ii(p, q, alpha, ms, big_m, k_idx, ells, zshifts, q_multiplier_exponent)
    else:
        raise InvalidVariantParams(f"unknown variant {variant!r}")

    base_ells = list(ells) if ells is not None else [1] * (len(parts) - 1)
    t_indices = sorted(d for d in _divisors(n) if d > 1)
    spec = modulo_spec(n, parts, t_indices, base_ells, zshifts)
    generated = generate_modulo_product_form(spec)
    form, report = modulo_to_k_stage(spec, spectra=spectra)
    if not report.ok:
        raise ValidationFailure(report)
    return PaqResult(
        multiplier=1,
        digits=generated,
        form=form,
        report=report,
        generated=generated,
        spec_generated=spec,
        spec_original=spec,
        original_digits=generated,
    )


def _variant_ii(p, q, alpha, ms, big_m, k_idx, ells, zshifts, q_exp):
    n = p**alpha * q
    base_ells = list(ells) if ells is not None else [1] * alpha

    # nested shape (gcd 1); its own kernel certificate is checked on
    # generation below
    parts_orig = [DigitSet(n, _range_set(p)), _scaled(n, p ** (alpha * (big_m + 1) + k_idx), q)]
    parts_orig += [_scaled(n, p ** (alpha * ms[j - 1] + j), p) for j in range(1, alpha)]
    t_orig: set[int] = set()
    t_orig |= _scaled_prime_indices(p, 1)
    t_orig |= _scaled_prime_indices(q, p ** (alpha * (big_m + 1) + k_idx))
    for j in range(1, alpha):
        t_orig |= _scaled_prime_indices(p, p ** (alpha * ms[j - 1] + j))
    spec_orig = modulo_spec(n, parts_orig, sorted(t_orig), base_ells)
    d_orig = generate_modulo_product_form(spec_orig)

    mult_exp = big_m if q_exp is None else q_exp
    if mult_exp < big_m:
        raise InvalidVariantParams("multiplier exponent below the maximum shift exponent")
    mult = q**mult_exp

    # Multiplied first-order shape.  Multiplying the nested digits by q^X
    # turns each p-power factor into N^(fixed shift) times a residue-level
    # factor; the cumulative stage scales below absorb the N powers.
    staged = [
        (
            sum(base_ells[:1]) + big_m,
            _scaled(n, q ** (mult_exp - big_m) * p ** (alpha + k_idx), q),
            _scaled(n, 1, q),
        )
    ]
    for j in range(1, alpha):
        staged.append(
            (
                sum(base_ells[: j + 1]) + ms[j - 1],
                _scaled(n, q ** (mult_exp - ms[j - 1]) * p**j, p),
                _scaled(n, p ** (alpha - j - 1) * q, p),
            )
        )
    staged.sort(key=lambda item: item[0])
    merged: list[tuple[int, DigitSet, DigitSet]] = []
    for exp, part, spec_l in staged:
        if merged and merged[-1][0] == exp:
            prev_exp, prev_part, prev_l = merged.pop()
            part = DigitSet(n, direct_sum_digits(prev_part.digits, part.digits))
            spec_l = DigitSet(n, direct_sum_digits(prev_l.digits, spec_l.digits))
            exp = prev_exp
        merged.append((exp, part, spec_l))
    parts = [_scaled(n, q**mult_exp, p)] + [part for _, part, _ in merged]
    spectra = [_scaled(n, p ** (alpha - 1) * q, p)] + [l for _, _, l in merged]
    exps = [exp for exp, _, _ in merged]
    new_ells = [exps[0]] + [b - a for a, b in zip(exps, exps[1:])]

    total = direct_sum_digits(*[part.digits for part in parts])
    if sorted({x % n for x in total}) != list(range(n)):
        raise NotCompleteResidues(
            f"multiplied factor sets are not a complete residue system mod {n} "
            f"(multiplier exponent {mult_exp})"
        )

    t_first = sorted(d for d in _divisors(n) if d > 1)
    spec_first = modulo_spec(n, parts, t_first, new_ells, zshifts)
    generated = generate_modulo_product_form(spec_first)
    if any(x % mult for x in generated.digits):
        raise AssertionError("generated digits must be divisible by the multiplier")
    digits = DigitSet(n, tuple(x // mult for x in generated.digits))
    if not (zshifts or ()) and digits.digits != d_orig.digits:
        raise AssertionError("multiplied first-order expansion must match the nested shape")

    form, report = modulo_to_k_stage(spec_first, spectra=spectra)
    if not report.ok:
        raise ValidationFailure(report)

    congruences = [
        CongruenceCheck(
            "q^M * E_p == E_p (mod p)",
            tuple(q**big_m * e for e in range(p)),
            tuple(range(p)),
            p,
        ),
        CongruenceCheck(
            "p^(alpha+k) * E_q == p^alpha * E_q (mod q)",
            tuple(p ** (alpha + k_idx) * e for e in range(q)),
            tuple(p**alpha * e for e in range(q)),
            q,
        ),
    ]
    for j in range(1, alpha):
        congruences.append(
            CongruenceCheck(
                f"q^(M-M_{j}) * p^{j} * E_p == p^{j} * E_p (mod p^{j + 1})",
                tuple(q ** (big_m - ms[j - 1]) * p**j * e for e in range(p)),
                tuple(p**j * e for e in range(p)),
                p ** (j + 1),
            )
        )

    return PaqResult(
        multiplier=mult,
        digits=digits,
        form=form,
        report=report,
        generated=generated,
        spec_generated=spec_first,
        spec_original=spec_orig,
        original_digits=d_orig,
        congruences=tuple(congruences),
    )


# ---------------------------------------------------------------------------
# Product triples from tiling complements.


def cm_regular_product_triple(n: int, parts: Sequence[DigitSet]) -> KStageForm:
    """Constant-layer stage form from a factorization of Z_N.

    Requires the direct sum of the parts to be a complete residue system
    and every part, prefix sum, and suffix sum to carry the two tiling
    conditions; the per-part spectra are the explicit tiling spectra.  The
    assembled form is re-validated exactly; nothing rides on regularity
    assumptions about the group.
    """
    fixed = [part if isinstance(part, DigitSet) else DigitSet(n, tuple(part)) for part in parts]
    try:
        total = direct_sum_digits(*[part.digits for part in fixed])
    except OverlapError as exc:
        raise NotCompleteResidues(f"parts do not sum directly: {exc}") from exc
    if sorted({x % n for x in total}) != list(range(n)):
        raise NotCompleteResidues("direct sum of parts is not a complete residue system")

    spectra = []
    for idx, part in enumerate(fixed):
        prof = cm_profile(part, n)
        if not prof.t1:
            raise CMConditionFailure(f"part {idx}", "size condition")
        if not prof.t2:
            raise CMConditionFailure(f"part {idx}", "product condition")
        spectra.append(prof.tiling_spectrum)

    k = len(fixed) - 1
    for m in range(1, k + 1):
        for tag, chunk in (
            (f"prefix 0..{m}", fixed[: m + 1]),
            (f"suffix {m}..{k}", fixed[m:]),
        ):
            digits = DigitSet(n, direct_sum_digits(*[c.digits for c in chunk]))
            prof = cm_profile(digits, n)
            if not prof.t1:
                raise CMConditionFailure(tag, "size condition")
            if not prof.t2:
                raise CMConditionFailure(tag, "product condition")

    form = KStageForm(
        base=n,
        ells=(1,) * k,
        e0=fixed[0],
        layers=tuple(fixed[1:]),
        spectra=tuple(spectra),
    )
    report = validate_k_stage(form)
    if not report.ok:
        raise ValidationFailure(report)
    return form
