"""Numerics for the self-similar measure attached to a digit set.

mu = mu_{N,D} is the infinite convolution of the uniform atomic measures on
D/N^j, so its Fourier transform is the infinite product of digit masks
M_D(xi/N^j).  Everything here works with truncated products plus a rigorous
multiplicative tail bound.

Two evaluation paths coexist:

* a vectorized double-precision path (numpy) for grid sweeps over [0, 1];
* an exact-phase path for rational points: the phase d*xi/N^j is reduced
  mod 1 in integer arithmetic before hitting the unit circle, so points at
  height 1e8 lose nothing.  Spectrum candidates are stored as exact
  rationals for that reason.

Sums over candidate points are accumulated with math.fsum in a fixed order,
so repeated runs (and the optional thread pool, capped by
SPECTRAL_FORGE_THREADS) give identical results.
"""

from __future__ import annotations

import cmath
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .digitsets import DigitSet, direct_sum_digits
from .errors import ShiftSearchFailure, TailBoundUnavailable
from .productform import OneStageForm, expand_one_stage, is_normalized

TWO_PI = 2.0 * math.pi


def thread_count() -> int:
    raw = os.environ.get("SPECTRAL_FORGE_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _parallel_map(fn, items):
    items = list(items)
    workers = min(thread_count(), len(items)) if items else 1
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# Masks and truncated transforms.


def mask_value(digits: DigitSet | Sequence[int], xi, prec: int | None = None):
    """M_D(xi) = (1/|D|) * sum of e(-d*xi); scalar or numpy array xi.

    ``prec`` switches to mpmath with that many decimal digits (scalar only),
    used by the cross-check oracles.
    """
    ds = digits.digits if isinstance(digits, DigitSet) else tuple(digits)
    if prec is not None:
        import mpmath

        with mpmath.workdps(prec):
            total = mpmath.mpc(0)
            for d in ds:
                total += mpmath.e ** (-2j * mpmath.pi * d * mpmath.mpf(xi))
            return total / len(ds)
    if isinstance(xi, np.ndarray):
        acc = np.zeros_like(xi, dtype=complex)
        for d in ds:
            acc += np.exp(-2j * np.pi * float(d) * xi)
        return acc / len(ds)
    return sum(cmath.exp(-2j * math.pi * d * xi) for d in ds) / len(ds)


def mask_value_rational(digits: DigitSet | Sequence[int], num: int, den: int):
    """M_D at the rational num/den with exact integer phase reduction."""
    ds = digits.digits if isinstance(digits, DigitSet) else tuple(digits)
    total = 0j
    for d in ds:
        ph = (d * num) % den
        total += cmath.exp(-2j * math.pi * (ph / den))
    return total / len(ds)


def digit_mass(digits: DigitSet | Sequence[int]) -> float:
    ds = digits.digits if isinstance(digits, DigitSet) else tuple(digits)
    return TWO_PI * sum(abs(d) for d in ds) / len(ds)


def auto_depth(base: int, digits, xi_max: float, target: float = 1e-14) -> int:
    """Smallest depth p with the tail multiplier provably within ~target of 1."""
    c = digit_mass(digits)
    p = 1
    while c * xi_max / (base**p * (base - 1)) >= target and p < 4096:
        p += 1
    return p


@dataclass(frozen=True)
class TruncatedMeasure:
    """First ``depth`` convolution factors of the self-similar measure."""

    base: int
    digits: DigitSet
    depth: int

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("depth must be >= 1")

    def mu_hat(self, xi):
        """Truncated transform, scalar or array; exact 1 at xi = 0."""
        if isinstance(xi, np.ndarray):
            acc = np.ones_like(xi, dtype=complex)
            for j in range(1, self.depth + 1):
                acc *= mask_value(self.digits, xi / float(self.base) ** j)
            return acc
        acc = 1.0 + 0.0j
        for j in range(1, self.depth + 1):
            acc *= mask_value(self.digits, xi / self.base**j)
        return acc

    def mu_hat_rational(self, num: int, den: int) -> complex:
        acc = 1.0 + 0.0j
        scale = den
        for _ in range(self.depth):
            scale *= self.base
            acc *= mask_value_rational(self.digits, num, scale)
            if acc == 0:
                break
        return acc

    def tail_sum(self, xi_max: float) -> float:
        """S with the infinite tail multiplier inside [1-S, exp(S)]."""
        return digit_mass(self.digits) * xi_max / (self.base**self.depth * (self.base - 1))


def mu_hat_truncated(m: TruncatedMeasure, xi) -> tuple[complex, float]:
    """(truncated value, tail half-width h): |mu_hat(xi) - value| <= |value|*h.

    Raises TailBoundUnavailable when the linearization behind the bound is
    useless at this depth; the caller should raise the depth.
    """
    xi_max = float(np.max(np.abs(xi))) if isinstance(xi, np.ndarray) else abs(float(xi))
    s = m.tail_sum(xi_max)
    if s >= 0.7:
        raise TailBoundUnavailable(f"tail sum {s:.3f} too large at depth {m.depth}")
    return m.mu_hat(xi), math.expm1(s)


def mu_hat_point(base: int, digits: DigitSet, point: Fraction, target: float = 1e-14) -> complex:
    """Full transform at an exact rational point, auto-truncated."""
    depth = auto_depth(base, digits, abs(float(point)) + 1.0, target)
    m = TruncatedMeasure(base, digits, depth)
    return m.mu_hat_rational(point.numerator, point.denominator)


# ---------------------------------------------------------------------------
# Sampling grids.


def chebyshev_grid(count: int) -> list[float]:
    """Chebyshev points mapped to [0, 1]."""
    return [0.5 * (1.0 + math.cos(math.pi * (2 * i + 1) / (2 * count))) for i in range(count)]


def rational_grid(base: int) -> list[Fraction]:
    """All t/base^2 with 0 <= t < base^2; mask zeros live at such points."""
    den = base * base
    return [Fraction(t, den) for t in range(den)]


# ---------------------------------------------------------------------------
# Finite-level identity.


def _gamma_digits(l_digits: Sequence[int], base: int, p: int) -> tuple[int, ...]:
    """L + N*L + ... + N^(p-1)*L as a direct sum."""
    return direct_sum_digits(*[[base**i * x for x in l_digits] for i in range(p)])


def _anchored_spectrum(form: OneStageForm) -> tuple[int, ...]:
    """L1 (+) L2 reduced mod N and re-anchored at 0 (a shift keeps it a spectrum)."""
    n = form.base
    l_sum = direct_sum_digits(form.l1.digits, form.l2.digits)
    low = min(l_sum)
    return tuple(sorted((x - low) % n for x in l_sum))


def finite_level_identity_check(
    form: OneStageForm,
    p: int,
    xi_samples: Sequence[float],
    tilde_shifts: Sequence[int] | None = None,
) -> float:
    """Max deviation in the depth-p averaged mask identity.

    For a normalized one-stage form and any lattice-shift variant of the
    level-p spectrum aggregate, the weighted truncated-transform sum over
    the aggregate must equal the averaged squared masks of the B-sets at
    the base point, for every s.  Returns max |LHS - RHS|.
    """
    if form.r != 1:
        raise ValueError("identity check needs a form with r = 1")
    if not is_normalized(form):
        raise ValueError("identity check needs a normalized form (0 in B_s, gcd 1)")
    n = form.base
    d_set = expand_one_stage(form)
    gamma = _gamma_digits(_anchored_spectrum(form), n, p)
    if tilde_shifts is not None:
        if len(tilde_shifts) != len(gamma):
            raise ValueError("one shift per aggregate element")
        gamma = tuple(g + n**p * s for g, s in zip(gamma, tilde_shifts))
    lam = np.array([float(g) for g in gamma])
    trunc = TruncatedMeasure(n, d_set, p)
    b_list = form.b_list()
    worst = 0.0
    for xi in xi_samples:
        x = float(xi) + lam
        mu_p = trunc.mu_hat(x)
        weight = np.abs(mu_p) ** 2
        rhs = sum(abs(mask_value(b, float(xi))) ** 2 for b in b_list) / len(b_list)
        for b in b_list:
            lhs = float(np.sum(weight * np.abs(mask_value(b, x / float(n) ** p)) ** 2))
            worst = max(worst, abs(lhs - rhs))
    return worst


# ---------------------------------------------------------------------------
# Spectrum candidates.


@dataclass(frozen=True)
class SpectrumLevel:
    """One stage of the nested integer sets: p_k and the accepted shifts."""

    p_k: int
    shifts: tuple[tuple[int, int], ...]  # (gamma, accepted integer shift)
    lam: tuple[int, ...]  # the full integer set after this stage


@dataclass(frozen=True)
class SpectrumCandidate:
    """scale * ((1/N) L2 + Lambda) with Lambda built level by level.

    ``levels[k].lam`` are nested, each containing 0 and congruent to the
    plain aggregate mod N^(q_k) (checked at build time).
    """

    base: int
    scale: Fraction
    frac_shifts: tuple[Fraction, ...]
    levels: tuple[SpectrumLevel, ...]
    l_digits: tuple[int, ...]
    search_window: int = field(default=0, compare=False)

    def q_k(self, k: int) -> int:
        return sum(level.p_k for level in self.levels[:k])

    def lambdas(self, k: int | None = None) -> tuple[int, ...]:
        if k is None:
            k = len(self.levels)
        if k == 0:
            return (0,)
        return self.levels[k - 1].lam

    def points(self, k: int | None = None) -> list[Fraction]:
        out = [
            self.scale * (fs + lam)
            for lam in self.lambdas(k)
            for fs in self.frac_shifts
        ]
        return sorted(set(out))


def _shift_ratio(trunc: TruncatedMeasure, num: int, den: int, target: float) -> float:
    val = abs(trunc.mu_hat_rational(num, den)) ** 2
    return val / (target + 1e-300)


def build_spectrum(
    form: OneStageForm,
    levels: int,
    pk_schedule: Sequence[int] | None = None,
    search_window: int = 128,
    ratio_threshold: float = 1e-4,
    scale: Fraction = Fraction(1),
) -> SpectrumCandidate:
    """Greedy construction of the candidate spectrum for a normalized form.

    Every aggregate element gamma of each stage receives an integer shift k
    chosen as the first k in 0, 1, -1, 2, ... whose transform magnitude at
    gamma/N^p + k clears ``ratio_threshold`` times the averaged B-mask
    energy there.  gamma = 0 always keeps shift 0.  A window exhausted
    without an acceptable shift raises ShiftSearchFailure: either the
    window is too small or the form genuinely fails equi-positivity there;
    the failure is reported, never papered over.
    """
    if form.r != 1:
        raise ValueError("spectrum construction needs a form with r = 1")
    if not is_normalized(form):
        raise ValueError("spectrum construction needs a normalized form")
    n = form.base
    d_set = expand_one_stage(form)
    l_anchored = _anchored_spectrum(form)
    b_list = form.b_list()
    schedule = list(pk_schedule) if pk_schedule is not None else [1] * levels
    if len(schedule) != levels or any(p < 1 for p in schedule):
        raise ValueError("schedule must list a positive p_k per level")

    built: list[SpectrumLevel] = []
    lam: tuple[int, ...] = (0,)
    q = 0
    for p_k in schedule:
        gamma = _gamma_digits(l_anchored, n, p_k)
        den = n**p_k
        depth = auto_depth(n, d_set, search_window + 2.0)
        trunc = TruncatedMeasure(n, d_set, depth)
        shifts: list[tuple[int, int]] = []
        for g in gamma:
            if g == 0:
                shifts.append((0, 0))
                continue
            target = sum(abs(mask_value_rational(b, g, den)) ** 2 for b in b_list) / len(b_list)
            if target < 1e-12:
                shifts.append((g, 0))
                continue
            accepted = None
            best = 0.0
            for k in _spiral(search_window):
                ratio = _shift_ratio(trunc, g + k * den, den, target)
                best = max(best, ratio)
                if ratio >= ratio_threshold:
                    accepted = k
                    break
            if accepted is None:
                raise ShiftSearchFailure(g, search_window, best)
            shifts.append((g, accepted))
        tilde = [g + den * k for g, k in shifts]
        scale_prev = n**q
        lam = tuple(sorted(a + scale_prev * t for a in lam for t in tilde))
        q += p_k
        built.append(SpectrumLevel(p_k, tuple(shifts), lam))
        # exact congruence with the plain aggregate mod N^q
        plain = _gamma_digits(l_anchored, n, q)
        if {x % n**q for x in lam} != {x % n**q for x in plain}:
            raise AssertionError("integer set drifted off the aggregate lattice")

    frac = tuple(sorted({Fraction(x, n) for x in form.l2.digits}))
    return SpectrumCandidate(
        base=n,
        scale=scale,
        frac_shifts=frac,
        levels=tuple(built),
        l_digits=l_anchored,
        search_window=search_window,
    )


def _spiral(window: int):
    yield 0
    for k in range(1, window + 1):
        yield k
        yield -k


# ---------------------------------------------------------------------------
# Frame partial sums.


@dataclass(frozen=True)
class JPRow:
    xi: float
    count: int
    q_t: float
    target: float

    @property
    def deficiency(self) -> float:
        return self.target - self.q_t


def jp_sum(
    digits: DigitSet,
    base: int,
    points: Iterable[Fraction],
    xi_samples: Sequence[float | Fraction],
    truncation_radius: float | None = None,
    target: float | Sequence[float] = 1.0,
    depth_target: float = 1e-14,
    depth: int | None = None,
) -> list[JPRow]:
    """Partial sums Q_T(xi) = sum over points within the radius of
    |mu_hat(xi + point)|^2, with exact rational evaluation throughout.

    ``target`` is what Q_T should approach: 1.0 for a full candidate, or a
    per-xi sequence (e.g. the averaged B-mask energy for integer-only sums).
    ``depth`` raises the automatic truncation depth when given.
    """
    pts = sorted(set(Fraction(p) for p in points))
    if truncation_radius is not None:
        pts = [p for p in pts if abs(p) <= truncation_radius]
    xs = [Fraction(x).limit_denominator(10**12) if not isinstance(x, Fraction) else x for x in xi_samples]
    height = max((abs(float(p)) for p in pts), default=0.0) + 2.0
    use_depth = max(auto_depth(base, digits, height, depth_target), depth or 1)
    trunc = TruncatedMeasure(base, digits, use_depth)

    def one(idx_x):
        idx, x = idx_x
        total = math.fsum(
            abs(trunc.mu_hat_rational((x + p).numerator, (x + p).denominator)) ** 2
            for p in pts
        )
        tgt = target[idx] if isinstance(target, (list, tuple)) else float(target)
        return JPRow(float(x), len(pts), total, tgt)

    return _parallel_map(one, enumerate(xs))


def candidate_jp_rows(
    digits: DigitSet,
    base: int,
    candidate: SpectrumCandidate,
    xi_samples: Sequence[float | Fraction],
    level: int | None = None,
    truncation_radius: float | None = None,
) -> list[JPRow]:
    return jp_sum(digits, base, candidate.points(level), xi_samples, truncation_radius)


# ---------------------------------------------------------------------------
# Weakly periodic set check.


@dataclass(frozen=True)
class WeaklyPeriodicReport:
    min_max: float
    argmin_xi: float
    flagged: tuple[float, ...]
    excluded: int
    grid_size: int
    window: int

    @property
    def positive(self) -> bool:
        return self.min_max > 0.0


def weakly_periodic_check(
    form: OneStageForm,
    integer_window: int = 64,
    resolution: int = 4096,
    membership_threshold: float = 1e-6,
    flag_threshold: float = 1e-3,
) -> WeaklyPeriodicReport:
    """Scan for grid points whose whole integer translate class nearly kills
    the transform.

    Over points xi with averaged B-mask energy above the membership
    threshold, computes max over |k| <= window of |mu_hat(xi + k)| and
    reports the minimum of those maxima.  A healthy form reports a clearly
    positive value; near-zero points are listed for re-examination.
    """
    n = form.base
    d_set = expand_one_stage(form)
    b_list = form.b_list()
    grid = np.array(sorted(set(chebyshev_grid(resolution)) | {float(f) for f in rational_grid(n)}))
    depth = auto_depth(n, d_set, integer_window + 2.0, 1e-12)
    trunc = TruncatedMeasure(n, d_set, depth)

    energy = np.zeros_like(grid)
    for b in b_list:
        energy += np.abs(mask_value(b, grid)) ** 2
    energy /= len(b_list)
    keep = energy > membership_threshold
    excluded = int(np.sum(~keep))
    xs = grid[keep]
    if xs.size == 0:
        return WeaklyPeriodicReport(math.inf, 0.0, (), excluded, len(grid), integer_window)

    running = np.zeros_like(xs)
    for k in range(-integer_window, integer_window + 1):
        running = np.maximum(running, np.abs(trunc.mu_hat(xs + float(k))))
    idx = int(np.argmin(running))
    flagged = tuple(float(x) for x in xs[running < flag_threshold])
    return WeaklyPeriodicReport(
        min_max=float(running[idx]),
        argmin_xi=float(xs[idx]),
        flagged=flagged,
        excluded=excluded,
        grid_size=len(grid),
        window=integer_window,
    )


# ---------------------------------------------------------------------------
# Tail-term condition.


@dataclass(frozen=True)
class TailTermReport:
    per_level: tuple[float, ...]
    c_empirical: float
    required: float | None

    @property
    def ok(self) -> bool:
        return self.required is None or self.c_empirical >= self.required


def tail_term_check(
    form: OneStageForm,
    candidate: SpectrumCandidate,
    c_required: float | None = None,
    xi_grid: int = 32,
) -> TailTermReport:
    """Empirical equi-positivity constant for a built candidate.

    For every stored level k and integer lambda, over a xi grid, compares
    the tail |mu_hat((xi+lambda)/N^q_k)|^2 against the averaged B-mask
    energy at the same rescaled point; the report carries the smallest
    ratio (the constant the construction actually achieved).
    """
    n = form.base
    d_set = expand_one_stage(form)
    b_list = form.b_list()
    xs = chebyshev_grid(xi_grid)
    per_level: list[float] = []
    overall = math.inf
    # level 0 holds the single point 0 at depth q_0 = 0, so the condition is
    # just the transform against the averaged mask energy on the grid
    for k in range(0, len(candidate.levels) + 1):
        q = candidate.q_k(k)
        den = n**q
        level_min = math.inf
        for lam in candidate.lambdas(k) if k else (0,):
            for xi in xs:
                num = Fraction(xi).limit_denominator(10**9) + lam
                point = num / den
                denom = sum(
                    abs(mask_value_rational(b, point.numerator, point.denominator)) ** 2
                    for b in b_list
                ) / len(b_list)
                if denom < 1e-12:
                    continue
                val = abs(mu_hat_point(n, d_set, point)) ** 2
                ratio = val / denom
                level_min = min(level_min, ratio)
        per_level.append(level_min)
        overall = min(overall, level_min)
    return TailTermReport(tuple(per_level), overall, c_required)
