"""One-stage and multi-stage product forms over a base N.

A one-stage form places two families of Hadamard triples at different
scales: digits expand as the union of a_s + N^r * B_s.  A k-stage form
iterates that layering, with each layer set allowed to depend on the digit
it extends.  Validation re-derives every defining condition through the
exact Hadamard checker; nothing is taken on faith from the constructors.

Layer maps are keyed by the parent digit (not by position) so that
one-stage forms, whose B-sets are keyed by a_s, and k-stage layer trees use
one convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence, Union

from .digitsets import DigitSet, direct_sum_digits
from .errors import OverlapError, ValidationFailure
from .hadamard import check_triple

LayerSpec = Union[DigitSet, tuple[tuple[int, DigitSet], ...]]


def layer_lookup(layer: LayerSpec, parent: int) -> DigitSet:
    if isinstance(layer, DigitSet):
        return layer
    for key, value in layer:
        if key == parent:
            return value
    raise KeyError(f"layer has no entry for parent digit {parent}")


def as_layer(spec: LayerSpec | Mapping[int, DigitSet]) -> LayerSpec:
    if isinstance(spec, DigitSet):
        return spec
    if isinstance(spec, Mapping):
        return tuple(sorted(spec.items()))
    return tuple(sorted(spec))


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str = ""

    def __str__(self) -> str:
        mark = "ok" if self.ok else "FAIL"
        tail = f" -- {self.detail}" if self.detail else ""
        return f"[{mark}] {self.name}{tail}"


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.ok]

    def __str__(self) -> str:
        return "\n".join(str(c) for c in self.checks)


@dataclass(frozen=True)
class OneStageForm:
    """Digits expand to the union of a + N^r * B_a over a in A."""

    base: int
    r: int
    a_set: DigitSet
    b_sets: tuple[tuple[int, DigitSet], ...]  # keyed by the digit a
    l1: DigitSet
    l2: DigitSet

    def __post_init__(self):
        if self.r < 0:
            raise ValueError("scale exponent r must be >= 0")
        keys = tuple(k for k, _ in self.b_sets)
        if sorted(keys) != sorted(self.a_set.digits):
            raise ValueError("B-sets must be keyed exactly by the digits of A")
        object.__setattr__(self, "b_sets", tuple(sorted(self.b_sets)))

    @property
    def b_map(self) -> dict[int, DigitSet]:
        return dict(self.b_sets)

    @property
    def n_factors(self) -> int:
        return len(self.a_set)

    @property
    def m_cardinality(self) -> int:
        return len(self.b_sets[0][1])

    def b_list(self) -> list[DigitSet]:
        return [b for _, b in self.b_sets]


def one_stage_form(
    base: int,
    r: int,
    a_digits,
    b_map: Mapping[int, DigitSet] | Sequence[DigitSet],
    l1,
    l2,
) -> OneStageForm:
    """Convenience constructor; a positional b_map pairs with sorted(A)."""
    a_set = a_digits if isinstance(a_digits, DigitSet) else DigitSet(base, tuple(a_digits))
    if isinstance(b_map, Mapping):
        pairs = tuple(sorted(b_map.items()))
    else:
        pairs = tuple(zip(a_set.digits, b_map))
    l1 = l1 if isinstance(l1, DigitSet) else DigitSet(base, tuple(l1))
    l2 = l2 if isinstance(l2, DigitSet) else DigitSet(base, tuple(l2))
    return OneStageForm(base, r, a_set, pairs, l1, l2)


def expand_one_stage(form: OneStageForm) -> DigitSet:
    """Union of a + N^r * B_a; a digit collision is a hard error."""
    scale = form.base**form.r
    seen: dict[int, tuple[int, int]] = {}
    for a, b_set in form.b_sets:
        for b in b_set.digits:
            x = a + scale * b
            if x in seen:
                raise OverlapError(x, seen[x], (a, b))
            seen[x] = (a, b)
    return DigitSet(form.base, tuple(sorted(seen)))


def validate_one_stage(form: OneStageForm) -> ValidationReport:
    """Exact pass/fail per defining condition, with witnesses."""
    n = form.base
    checks: list[CheckResult] = []

    rep = check_triple(n, form.a_set, form.l1)
    checks.append(CheckResult("A-triple (N, A, L1)", rep is None, str(rep or "")))

    sizes = {len(b) for _, b in form.b_sets}
    checks.append(
        CheckResult(
            "B-cardinality |B_s| all equal",
            len(sizes) == 1,
            "" if len(sizes) == 1 else f"sizes {sorted(sizes)}",
        )
    )

    for a, b_set in form.b_sets:
        rep = check_triple(n, b_set, form.l2)
        checks.append(CheckResult(f"B-triple (N, B[{a}], L2)", rep is None, str(rep or "")))

    try:
        l_sum = DigitSet(n, direct_sum_digits(form.l1.digits, form.l2.digits))
        checks.append(CheckResult("L1 (+) L2 direct", True))
    except OverlapError as exc:
        checks.append(CheckResult("L1 (+) L2 direct", False, str(exc)))
        return ValidationReport(tuple(checks))

    for a, b_set in form.b_sets:
        try:
            ab = DigitSet(n, direct_sum_digits(form.a_set.digits, b_set.digits))
        except OverlapError as exc:
            checks.append(CheckResult(f"product-triple (N, A(+)B[{a}], L1(+)L2)", False, str(exc)))
            continue
        rep = check_triple(n, ab, l_sum)
        checks.append(
            CheckResult(f"product-triple (N, A(+)B[{a}], L1(+)L2)", rep is None, str(rep or ""))
        )

    try:
        expand_one_stage(form)
        checks.append(CheckResult("expansion collision-free", True))
    except OverlapError as exc:
        checks.append(CheckResult("expansion collision-free", False, str(exc)))

    return ValidationReport(tuple(checks))


def require_valid_one_stage(form: OneStageForm) -> OneStageForm:
    report = validate_one_stage(form)
    if not report.ok:
        raise ValidationFailure(report)
    return form


# ---------------------------------------------------------------------------
# Reductions of one-stage forms.


def reduce_r_to_1(form: OneStageForm) -> OneStageForm:
    """Rewrite a form with r >= 2 over the base N^r with r = 1.

    New A-digits are the r-fold mixed-radix sums of old ones; the B-set
    attached to such a digit is the direct sum of the B's picked by its
    radix digits, scaled by powers of N.  The measure generated by the old
    and new digits is the same, which the caller can confirm through the
    expansion identity (tested in the suite).
    """
    if form.r == 1:
        return form
    if form.r < 1:
        raise ValueError("reduction needs r >= 1")
    n, r = form.base, form.r
    big = n**r
    a_digits = form.a_set.digits
    b_map = form.b_map

    new_pairs: dict[int, DigitSet] = {}
    for combo in _tuples(len(a_digits), r):
        a_new = sum(n**j * a_digits[i] for j, i in enumerate(combo))
        parts = [[n**j * b for b in b_map[a_digits[i]].digits] for j, i in enumerate(combo)]
        b_new = DigitSet(big, direct_sum_digits(*parts))
        if a_new in new_pairs:
            raise OverlapError(a_new, combo, combo)
        new_pairs[a_new] = b_new

    l1_new = DigitSet(big, direct_sum_digits(*[[n**j * x for x in form.l1.digits] for j in range(r)]))
    l2_new = DigitSet(big, direct_sum_digits(*[[n**j * x for x in form.l2.digits] for j in range(r)]))
    a_new_set = DigitSet(big, tuple(sorted(new_pairs)))
    out = OneStageForm(big, 1, a_new_set, tuple(sorted(new_pairs.items())), l1_new, l2_new)
    d_r = expand_one_stage(form).digits
    stacked = direct_sum_digits(*[[n**j * x for x in d_r] for j in range(r)])
    if expand_one_stage(out).digits != stacked:
        raise AssertionError("reduced form must expand to the stacked digit set")
    return require_valid_one_stage(out)


def _tuples(n: int, r: int):
    if r == 0:
        yield ()
        return
    for rest in _tuples(n, r - 1):
        for i in range(n):
            yield (i,) + rest


def translate_and_gcd_normalize(
    form: OneStageForm,
) -> tuple[OneStageForm, dict[int, int], int]:
    """Shift each B to contain 0, then divide out the gcd of the level-0 set.

    Returns (normal form, per-a translation offsets, g).  Spectra scale as
    L -> g*L, so the normalized form's L1/L2 are multiplied by g.  Any
    spectrum found for the normal form turns into one for the input after
    division by g.
    """
    n, r = form.base, form.r
    scale = n**r
    shifts: dict[int, int] = {}
    moved: dict[int, DigitSet] = {}
    for a, b_set in form.b_sets:
        bmin = b_set.digits[0]
        shifts[a] = bmin
        key = a + scale * bmin
        if key in moved:
            # possible only at r = 0, where translations can merge branches
            raise OverlapError(key, a, bmin)
        moved[key] = DigitSet(n, tuple(b - bmin for b in b_set.digits))
    level0 = set()
    for a, b_set in moved.items():
        level0.update(a + b for b in b_set.digits)
    g = 0
    for x in level0:
        g = math.gcd(g, x)
    if g == 0:
        g = 1
    if g > 1:
        for x in list(moved):
            if x % g:
                raise ValidationFailure(
                    ValidationReport(
                        (CheckResult("gcd divides all shifted a-digits", False, f"digit {x}, g={g}"),)
                    )
                )
        moved = {
            a // g: DigitSet(n, tuple(b // g for b in b_set.digits))
            for a, b_set in moved.items()
        }
    l1 = DigitSet(n, tuple(g * x for x in form.l1.digits))
    l2 = DigitSet(n, tuple(g * x for x in form.l2.digits))
    a_set = DigitSet(n, tuple(sorted(moved)))
    out = OneStageForm(n, r, a_set, tuple(sorted(moved.items())), l1, l2)
    return require_valid_one_stage(out), shifts, g


def is_normalized(form: OneStageForm) -> bool:
    """0 in every B_s and gcd of the level-0 set equal to 1."""
    if any(b.digits[0] != 0 for _, b in form.b_sets):
        return False
    g = 0
    for a, b_set in form.b_sets:
        for b in b_set.digits:
            g = math.gcd(g, a + b)
    return g in (0, 1)


# ---------------------------------------------------------------------------
# k-stage forms.


@dataclass(frozen=True)
class KStageForm:
    """Layered digit set: stage j adds N^(l_1+...+l_j) * E_j(parent).

    ``spectra`` lists L_0..L_k, one per level including level 0.
    """

    base: int
    ells: tuple[int, ...]
    e0: DigitSet
    layers: tuple[LayerSpec, ...]
    spectra: tuple[DigitSet, ...]

    def __post_init__(self):
        if len(self.layers) != len(self.ells):
            raise ValueError("one layer per stage scale")
        if len(self.spectra) != len(self.layers) + 1:
            raise ValueError("need a spectrum for level 0 and for every stage")
        if any(e < 1 for e in self.ells):
            raise ValueError("stage scales must be positive")

    @property
    def stages(self) -> int:
        return len(self.layers)


def k_stage_form(base, ells, e0, layers, spectra) -> KStageForm:
    e0 = e0 if isinstance(e0, DigitSet) else DigitSet(base, tuple(e0))
    fixed = tuple(as_layer(l) for l in layers)
    specs = tuple(s if isinstance(s, DigitSet) else DigitSet(base, tuple(s)) for s in spectra)
    return KStageForm(base, tuple(ells), e0, fixed, specs)


def expand_k_stage(form: KStageForm) -> DigitSet:
    digits, _ = _expand_with_witness(form)
    return DigitSet(form.base, tuple(sorted(digits)))


def _expand_with_witness(form: KStageForm):
    """Returns (digit list of D^(k), {digit: (parent, e)} witnesses per stage)."""
    n = form.base
    current = list(form.e0.digits)
    if len(set(current)) != len(current):
        raise OverlapError(current[0], (), (), stage=0)
    parents: list[dict[int, tuple[int, int]]] = []
    total = 0
    for j, (ell, layer) in enumerate(zip(form.ells, form.layers), start=1):
        total += ell
        scale = n**total
        seen: dict[int, tuple[int, int]] = {}
        for d in current:
            part = layer_lookup(layer, d)
            for e in part.digits:
                x = d + scale * e
                if x in seen:
                    raise OverlapError(x, seen[x], (d, e), stage=j)
                seen[x] = (d, e)
        parents.append(seen)
        current = sorted(seen)
    return current, parents


def _paths(form: KStageForm):
    """Digit of D^(k) -> the chain [d_0, d_1, ..., d_k] that produced it."""
    final, parents = _expand_with_witness(form)
    chains: dict[int, list[int]] = {}
    for x in final:
        chain = [x]
        for level in reversed(parents):
            chain.append(level[chain[-1]][0])
        chains[x] = list(reversed(chain))
    return chains


def validate_k_stage(form: KStageForm) -> ValidationReport:
    """Exact check of every per-level triple and every prefix/suffix product.

    Products are checked along every realizable path through the layer
    tree; identical digit-set products are verified once.
    """
    n = form.base
    checks: list[CheckResult] = []

    rep = check_triple(n, form.e0, form.spectra[0])
    checks.append(CheckResult("level-0 triple (N, E0, L0)", rep is None, str(rep or "")))

    try:
        chains = _paths(form)
    except OverlapError as exc:
        checks.append(CheckResult("expansion collision-free", False, str(exc)))
        return ValidationReport(tuple(checks))
    checks.append(CheckResult("expansion collision-free", True))

    k = form.stages
    # (i) each layer set used at stage j forms a triple with L_j
    for j in range(1, k + 1):
        seen_sets = set()
        parents_at_j = {chain[j - 1] for chain in chains.values()}
        for d in sorted(parents_at_j):
            part = layer_lookup(form.layers[j - 1], d)
            if part.digits in seen_sets:
                continue
            seen_sets.add(part.digits)
            rep = check_triple(n, part, form.spectra[j])
            checks.append(
                CheckResult(f"stage-{j} triple (N, E_{j}({d}), L_{j})", rep is None, str(rep or ""))
            )

    # path -> the list of layer sets it used, E_1(d_0) ... E_k(d_{k-1})
    used: set[tuple[tuple[int, ...], ...]] = set()
    for chain in chains.values():
        used.add(
            tuple(layer_lookup(form.layers[j], chain[j]).digits for j in range(k))
        )

    def _check_product(tag: str, parts: list[tuple[int, ...]], spectra: list[DigitSet]):
        try:
            s = DigitSet(n, direct_sum_digits(*parts))
            ls = DigitSet(n, direct_sum_digits(*[sp.digits for sp in spectra]))
        except OverlapError as exc:
            checks.append(CheckResult(tag, False, str(exc)))
            return
        rep = check_triple(n, s, ls)
        checks.append(CheckResult(tag, rep is None, str(rep or "")))

    for m in range(1, k + 1):
        prefix_sets = {seq[:m] for seq in used}
        for seq in sorted(prefix_sets):
            _check_product(
                f"prefix-{m} product {_short(seq)}",
                [form.e0.digits, *seq],
                list(form.spectra[: m + 1]),
            )
        suffix_sets = {seq[m - 1 :] for seq in used}
        for seq in sorted(suffix_sets):
            _check_product(
                f"suffix-{m} product {_short(seq)}",
                list(seq),
                list(form.spectra[m:]),
            )

    return ValidationReport(tuple(checks))


def _short(seq) -> str:
    body = "x".join(str(len(s)) for s in seq)
    return f"[{body}]"


def require_valid_k_stage(form: KStageForm) -> KStageForm:
    report = validate_k_stage(form)
    if not report.ok:
        raise ValidationFailure(report)
    return form


# ---------------------------------------------------------------------------
# Reduction of a k-stage form to a one-stage form over base N^k.


def _normalized_levels(form: KStageForm, k_target: int | None):
    """Rewrite so every stage scale is exactly one power of N.

    Missing levels get the layer {0} with spectrum {0}; trailing {0} levels
    may be appended to reach ``k_target``.
    """
    n = form.base
    zero = DigitSet(n, (0,))
    total = sum(form.ells)
    k = total if k_target is None else k_target
    if k < total:
        raise ValueError(f"target stage count {k} below intrinsic {total}")
    layers: list[LayerSpec] = []
    spectra: list[DigitSet] = [form.spectra[0]]
    marks = {sum(form.ells[: i + 1]): i for i in range(len(form.ells))}
    for level in range(1, k + 1):
        if level in marks:
            i = marks[level]
            layers.append(form.layers[i])
            spectra.append(form.spectra[i + 1])
        else:
            layers.append(zero)
            spectra.append(zero)
    return KStageForm(n, (1,) * k, form.e0, tuple(layers), tuple(spectra))


def k_stage_to_one_stage(form: KStageForm, k_target: int | None = None) -> OneStageForm:
    """Rebuild the k-stage digits as a one-stage form over base N^k.

    The new A is the middle aggregate of the stacked digit sets
    D + N*D + ... + N^(k-1)*D, the new B's are read off along residues mod
    N^k, and the two lifted spectra come from the stacked per-level direct
    sums.  The result is validated exactly; the error names the failing
    aggregate (A-triple, B-triple, or product).
    """
    norm = _normalized_levels(form, k_target)
    n = norm.base
    k = norm.stages
    zero = (0,)

    # D^(j) for j = 0..k; D^(j) = D^(k) beyond the top, {0} below 0.
    stagewise: list[tuple[int, ...]] = [norm.e0.digits]
    current = norm.e0.digits
    for j in range(1, k + 1):
        scale = n**j
        seen: dict[int, tuple[int, int]] = {}
        for d in current:
            part = layer_lookup(norm.layers[j - 1], d)
            for e in part.digits:
                x = d + scale * e
                if x in seen:
                    raise OverlapError(x, seen[x], (d, e), stage=j)
                seen[x] = (d, e)
        current = tuple(sorted(seen))
        stagewise.append(current)

    def level(j: int) -> tuple[int, ...]:
        if j < 0:
            return zero
        if j >= k:
            return stagewise[k]
        return stagewise[j]

    def aggregate(m: int) -> tuple[int, ...]:
        return direct_sum_digits(*[[n**j * d for d in level(m - j)] for j in range(k)])

    a_digits = aggregate(k - 1)
    d_big = aggregate(2 * k - 1)
    stacked = direct_sum_digits(*[[n**j * d for d in stagewise[k]] for j in range(k)])
    if d_big != stacked:
        raise AssertionError("aggregate(2k-1) must equal D + N*D + ... + N^(k-1)*D")

    big = n**k
    b_map: dict[int, DigitSet] = {}
    leftovers = set(d_big)
    for a in a_digits:
        picks = sorted((x - a) // big for x in d_big if (x - a) % big == 0)
        if not picks:
            raise ValidationFailure(
                ValidationReport(
                    (CheckResult("B-extraction", False, f"no digits over a={a}"),)
                )
            )
        b_map[a] = DigitSet(big, tuple(picks))
        leftovers -= {a + big * b for b in picks}
    if leftovers:
        raise AssertionError("B-extraction did not partition the stacked digits")

    cumulative: list[tuple[int, ...]] = []
    acc = norm.spectra[0].digits
    cumulative.append(acc)
    for j in range(1, k + 1):
        acc = direct_sum_digits(acc, norm.spectra[j].digits)
        cumulative.append(acc)
    l1 = direct_sum_digits(*[[n ** (k - m - 1) * x for x in cumulative[m]] for m in range(k)])

    reversed_cumulative: list[tuple[int, ...]] = [norm.spectra[k].digits]
    for j in range(k - 1, 0, -1):
        reversed_cumulative.insert(0, direct_sum_digits(reversed_cumulative[0], norm.spectra[j].digits))
    # reversed_cumulative[m] = L_k (+) ... (+) L_{m+1} for m = 0..k-1
    l2 = direct_sum_digits(
        *[[n ** (k - m - 1) * x for x in reversed_cumulative[m]] for m in range(k)]
    )

    out = OneStageForm(
        big,
        1,
        DigitSet(big, a_digits),
        tuple(sorted(b_map.items())),
        DigitSet(big, l1),
        DigitSet(big, l2),
    )
    report = validate_one_stage(out)
    if not report.ok:
        raise ValidationFailure(report)
    if expand_one_stage(out).digits != d_big:
        raise AssertionError("one-stage expansion must reproduce the stacked digits")
    return out


# ---------------------------------------------------------------------------
# The four-digit construction.


def build_four_digit_form(
    n: int, a: int, t: int, ell: int, ell2: int
) -> tuple[int, OneStageForm]:
    """One-stage form behind the digit set {0, a, 2^t*ell, a + 2^t*ell2}.

    Writes N = 2^beta * m (m odd) and t = beta*k + r; requires r != 0, odd
    positive a, ell, ell2.  Returns (m^k, form) where the form expands to
    m^k times the four-digit set, with spectra L1 = {0, N/2} and
    L2 = {0, N/2^(r+1)}, both verified exactly.
    """
    from .errors import InvalidVariantParams, TDivisibleByBeta

    if n < 2 or n % 2:
        raise InvalidVariantParams("base must be even and >= 2")
    if min(a, ell, ell2) < 1 or not all(v % 2 for v in (a, ell, ell2)):
        raise InvalidVariantParams("a, ell, ell2 must be positive odd integers")
    if t < 1:
        raise InvalidVariantParams("t must be a positive integer")
    beta = (n & -n).bit_length() - 1
    m = n >> beta
    k, r = divmod(t, beta)
    if r == 0:
        raise TDivisibleByBeta(f"t={t} divisible by beta={beta}")
    mk = m**k
    a_big = a * mk
    a_set = DigitSet(n, (0, a_big))
    b0 = DigitSet(n, (0, 2**r * ell))
    ba = DigitSet(n, (0, 2**r * ell2))
    l1 = DigitSet(n, (0, n // 2))
    l2 = DigitSet(n, (0, n // 2 ** (r + 1)))
    form = OneStageForm(n, k, a_set, ((0, b0), (a_big, ba)), l1, l2)
    require_valid_one_stage(form)
    target = sorted({0, a, 2**t * ell, a + 2**t * ell2})
    got = expand_one_stage(form).digits
    if got != tuple(x * mk for x in target):
        raise AssertionError("expansion must equal m^k times the four-digit set")
    return mk, form
