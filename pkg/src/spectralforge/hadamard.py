"""Exact Hadamard-triple verification and exhaustive spectrum search in Z_N.

(N, D, L) is a Hadamard triple when the |D| x |D| matrix
(1/sqrt(|D|)) * (e(d*l/N)) indexed by d in D, l in L is unitary.  That holds
iff |D| == |L|, both sets are distinct mod N, and every difference l - l'
of spectrum elements makes the exponential sum over D vanish.  The
orthogonality test is ``vanishing_sum_test``: pure integer arithmetic,
never floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .cyclotomic import vanishing_sum_test
from .digitsets import DigitSet, direct_sum_digits
from .errors import HadamardFailure


@dataclass(frozen=True)
class FailureReport:
    """Names the violated condition and the witnessing elements."""

    kind: str  # CardinalityMismatch | DuplicateResidue | OrthogonalityFailure
    which: str = ""
    witness: tuple = ()

    def __str__(self) -> str:
        if self.kind == "CardinalityMismatch":
            return f"cardinality mismatch: |D|={self.witness[0]} vs |L|={self.witness[1]}"
        if self.kind == "DuplicateResidue":
            return f"duplicate residue in {self.which}: {self.witness[0]} == {self.witness[1]} (mod {self.witness[2]})"
        return f"orthogonality failure in {self.which}: pair {self.witness}"


@dataclass(frozen=True)
class HadamardTriple:
    """An exactly verified triple; construct through verify_triple."""

    base: int
    digits: DigitSet
    spectrum: DigitSet


def _duplicate_residue(digits: Sequence[int], n: int):
    seen: dict[int, int] = {}
    for d in digits:
        r = d % n
        if r in seen:
            return seen[r], d
        seen[r] = d
    return None


def check_triple(n: int, d: DigitSet, l: DigitSet) -> FailureReport | None:
    """None when (n, d, l) is a Hadamard triple, else the first failure."""
    if len(d) != len(l):
        return FailureReport("CardinalityMismatch", witness=(len(d), len(l)))
    dup = _duplicate_residue(d.digits, n)
    if dup is not None:
        return FailureReport("DuplicateResidue", "digits", (dup[0], dup[1], n))
    dup = _duplicate_residue(l.digits, n)
    if dup is not None:
        return FailureReport("DuplicateResidue", "spectrum", (dup[0], dup[1], n))
    if len(d) == n:
        # complete residue system: the sum over D at any t != 0 (mod N) is a
        # full geometric sum, hence zero; no pair tests needed
        return None
    ls = l.digits
    cache: dict[int, bool] = {}
    for i in range(len(ls)):
        for j in range(i + 1, len(ls)):
            t = (ls[j] - ls[i]) % n
            ok = cache.get(t)
            if ok is None:
                ok = cache[t] = vanishing_sum_test(d, t, n)
            if not ok:
                return FailureReport("OrthogonalityFailure", "spectrum pair", (ls[i], ls[j]))
    return None


def verify_triple(n: int, d: DigitSet, l: DigitSet) -> HadamardTriple:
    """Exact verification; raises HadamardFailure with a witness report."""
    report = check_triple(n, d, l)
    if report is not None:
        raise HadamardFailure(report)
    return HadamardTriple(n, d, l)


def is_hadamard_triple(n: int, d: DigitSet, l: DigitSet) -> bool:
    return check_triple(n, d, l) is None


def zero_set(d: DigitSet, n: int) -> frozenset[int]:
    """Residues t (1 <= t < n) where the exponential sum over D vanishes."""
    return frozenset(t for t in range(1, n) if vanishing_sum_test(d, t, n))


def find_spectra(n: int, d: DigitSet, limit: int | None = None) -> list[DigitSet]:
    """All 0-anchored spectra L in {0..N-1} for (N, D), up to ``limit``.

    Spectra are shift-invariant, so anchoring at 0 loses nothing.  The
    candidates form a Cayley graph on Z_N whose connection set is the zero
    set of the mask; spectra are its |D|-cliques through 0.  Branch and
    bound with a most-constrained vertex order; N here stays small enough
    that plain Python bitsets win.
    """
    if not d.distinct_mod(n):
        raise ValueError("digit set must have distinct residues mod N")
    size = len(d)
    if size == 1:
        return [DigitSet(max(n, 2), (0,))]
    allowed = zero_set(d, n)
    if not allowed:
        return []
    # Adjacency mask per vertex: v ~ w iff (v - w) % n in the zero set.
    # The graph is vertex-transitive, so every vertex has the same degree
    # and the interesting pruning is the remaining-candidate count.
    adj = [0] * n
    for v in range(n):
        m = 0
        for t in allowed:
            m |= 1 << ((v + t) % n)
        adj[v] = m
    results: list[DigitSet] = []

    def extend(clique: list[int], cand: int):
        if len(clique) == size:
            results.append(DigitSet(max(n, 2), tuple(sorted(clique))))
            return
        need = size - len(clique)
        while cand:
            if bin(cand).count("1") < need:
                return
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            # cand now holds only vertices above v, so each clique is
            # produced exactly once, in increasing vertex order.
            extend(clique + [v], cand & adj[v])
            if limit is not None and len(results) >= limit:
                return

    extend([0], adj[0] & ~1)
    return sorted(results, key=lambda s: s.digits)


def verify_equivalent_pairs(n: int, bs: Sequence[DigitSet], l2: DigitSet) -> bool:
    """True iff every (n, B_s, l2) verifies; the pairs then share l2."""
    return all(is_hadamard_triple(n, b, l2) for b in bs)


LayerSets = DigitSet | Mapping[int, DigitSet]


def lifted_triple(
    n: int,
    layers: Sequence[tuple[LayerSets, DigitSet]],
    replicate: int | None = None,
) -> HadamardTriple:
    """Stack per-level triples (N, C_j, L_j) into one triple over N^(K+1).

    Level j contributes digits at scale N^j; layer sets may depend on the
    parent digit (pass a mapping keyed by parent).  The lifted spectrum is
    the direct sum of N^(K-j) * L_j.  The result is re-verified exactly,
    never assumed.

    ``replicate`` repeats a single (C, L) layer that many times.
    """
    if replicate is not None:
        if len(layers) != 1:
            raise ValueError("replicate expects exactly one base layer")
        layers = list(layers) * replicate
    if not layers:
        raise ValueError("need at least one layer")
    c0, _ = layers[0]
    if not isinstance(c0, DigitSet):
        raise ValueError("level 0 must be a plain digit set")
    digits = list(c0.digits)
    for j, (cj, _) in enumerate(layers[1:], start=1):
        scale = n**j
        nxt = []
        seen = {}
        for a in digits:
            part = cj[a] if isinstance(cj, Mapping) else cj
            for e in part.digits:
                x = a + scale * e
                if x in seen:
                    raise ValueError(f"lift collision at level {j}: digit {x}")
                seen[x] = (a, e)
                nxt.append(x)
        digits = nxt
    k_top = len(layers) - 1
    spectrum = direct_sum_digits(
        *[[n ** (k_top - j) * l for l in lj.digits] for j, (_, lj) in enumerate(layers)]
    )
    big_n = n ** (k_top + 1)
    return verify_triple(
        big_n,
        DigitSet(big_n, tuple(sorted(digits))),
        DigitSet(big_n, spectrum),
    )
