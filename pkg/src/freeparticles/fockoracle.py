"""Operator-level oracles that compute vacuum expectations directly.

Oracle A realizes the limit operators
    A(f) = a+(h) + a0(h) + a-(h) + (int f dsigma)(int s dnu),   h = f (x) id,
on a truncated full Fock space over L^2(cells x atoms, sigma x nu).

Oracle B realizes N freely independent particles: the free product of N
copies of L^2(single-particle space, P), on which M_i(f) acts by the
alternating-word rules, and A(Lambda, N; f) = sum_i M_i(f).

Both use the non-orthonormal basis of point indicators, so every matrix
element stays rational. Starting from the vacuum each factor moves the tensor
degree by at most one, hence depth d >= k makes the truncation exact; we also
discard components too deep to return to the vacuum in the remaining steps.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Mapping, Sequence

from .errors import ResourceLimitError, TailBoundError, TruncationError
from .space import DiscreteSpace, JumpMeasure, TestFunction, as_fraction, total_mass
from .systems import _auto_cutoff, poisson_pmf, poisson_power_tail

MAX_TERMS = 2_000_000


def _as_vector(d) -> dict:
    return {k: v for k, v in d.items() if v != 0}


def _check_size(coeffs: Mapping) -> None:
    if len(coeffs) > MAX_TERMS:
        raise ResourceLimitError(f"vector grew past {MAX_TERMS} terms")


def _points(sp: DiscreteSpace, jm: JumpMeasure | None):
    """(cell index, jump size, sigma x nu weight) for every point of positive weight."""
    atoms = ((Fraction(1), Fraction(1)),) if jm is None else jm.atoms
    return [(c, s, m * w) for c, m in enumerate(sp.sigma_mass) if m > 0 for s, w in atoms]


# --- Oracle A: full Fock space ---------------------------------------------


@dataclass(frozen=True)
class TensorVector:
    """Finitely supported vector: word of point indices -> coefficient.

    The empty word is the vacuum. Basis words are mass-weighted point
    indicators, with <e_w, e_w> = product of the letters' weights.
    """

    coeffs: Mapping[tuple[int, ...], Fraction] = field(default_factory=dict)

    @classmethod
    def vacuum(cls) -> "TensorVector":
        return cls({(): Fraction(1)})

    def depth(self) -> int:
        return max((len(w) for w in self.coeffs), default=0)

    def vacuum_coefficient(self) -> Fraction:
        return self.coeffs.get((), Fraction(0))


class FockSpace:
    def __init__(self, sp: DiscreteSpace, jm: JumpMeasure | None = None, depth: int = 6):
        self.space = sp
        self.jumps = jm
        self.depth = depth
        self.points = _points(sp, jm)
        self.weights = [w for _, _, w in self.points]
        mean_jump = Fraction(1) if jm is None else sum((s * w for s, w in jm.atoms), Fraction(0))
        self._mean_jump = mean_jump

    def symbol(self, f: TestFunction) -> list[Fraction]:
        """Values of h = f (x) id at each point."""
        if len(f.values) != len(self.space):
            raise ValueError(f"{f!r} does not live on this space")
        return [f.values[c] * s for c, s, _ in self.points]

    def scalar(self, f: TestFunction) -> Fraction:
        integral = sum((v * m for v, m in zip(f.values, self.space.sigma_mass)), Fraction(0))
        return integral * self._mean_jump

    def apply(self, f: TestFunction, v: TensorVector, keep_depth: int | None = None) -> TensorVector:
        h = self.symbol(f)
        c0 = self.scalar(f)
        out: dict = defaultdict(Fraction)
        for word, coef in v.coeffs.items():
            if c0:
                out[word] += c0 * coef
            if word:
                p = word[0]
                if h[p]:
                    out[word] += h[p] * coef  # gauge
                    out[word[1:]] += h[p] * self.weights[p] * coef  # annihilation
            if keep_depth is not None and len(word) + 1 > keep_depth:
                continue
            if len(word) + 1 > self.depth:
                if any(h):
                    raise TruncationError(f"creation would exceed depth {self.depth}")
                continue
            for p, hp in enumerate(h):
                if hp:
                    out[(p,) + word] += hp * coef
        if keep_depth is not None:
            out = {w: c for w, c in out.items() if len(w) <= keep_depth}
        _check_size(out)
        return TensorVector(_as_vector(out))

    def inner(self, v: TensorVector, w: TensorVector) -> Fraction:
        total = Fraction(0)
        for word, c in v.coeffs.items():
            d = w.coeffs.get(word)
            if d:
                wt = Fraction(1)
                for p in word:
                    wt *= self.weights[p]
                total += c * d * wt
        return total


def fock_apply(sp: DiscreteSpace, jm: JumpMeasure | None, f: TestFunction, v: TensorVector,
               depth: int) -> TensorVector:
    return FockSpace(sp, jm, depth).apply(f, v)


def fock_vacuum_expectation(sp: DiscreteSpace, jm: JumpMeasure | None, fs: Sequence[TestFunction],
                            depth: int | None = None) -> Fraction:
    """<A(f_1) ... A(f_k) Omega, Omega>."""
    fs = tuple(fs)
    k = len(fs)
    depth = k if depth is None else depth
    if depth < k:
        raise TruncationError(f"depth {depth} < word length {k} would truncate silently")
    fock = FockSpace(sp, jm, depth)
    v = TensorVector.vacuum()
    for j, f in enumerate(reversed(fs), start=1):
        v = fock.apply(f, v, keep_depth=k - j)
    return v.vacuum_coefficient()


# --- Oracle B: free product of N single-particle spaces ----------------------

Slot = tuple[Fraction, ...]
Key = tuple[tuple[int, Slot], ...]


@dataclass(frozen=True)
class FreeProductVector:
    """Alternating words (l_1, g_1) ... (l_m, g_m) -> coefficient.

    Each g_j is a mean-zero function on the single-particle points, stored by
    value; adjacent labels differ. The empty word is the vacuum Psi_N.
    """

    coeffs: Mapping[Key, Fraction] = field(default_factory=dict)

    @classmethod
    def vacuum(cls) -> "FreeProductVector":
        return cls({(): Fraction(1)})

    def depth(self) -> int:
        return max((len(w) for w in self.coeffs), default=0)

    def vacuum_coefficient(self) -> Fraction:
        return self.coeffs.get((), Fraction(0))


class FreeProductSpace:
    def __init__(self, sp: DiscreteSpace, N: int, jumps: JumpMeasure | None = None, depth: int = 5):
        if N < 1:
            raise ValueError("need at least one particle")
        self.space = sp
        self.N = N
        self.jumps = jumps
        self.depth = depth
        pts = _points(sp, jumps)
        v = sum((w for _, _, w in pts), Fraction(0))
        self.points = pts
        self.prob = [w / v for _, _, w in pts]

    def symbol(self, f: TestFunction) -> Slot:
        if len(f.values) != len(self.space):
            raise ValueError(f"{f!r} does not live on this space")
        return tuple(f.values[c] * s for c, s, _ in self.points)

    def mean(self, g: Slot) -> Fraction:
        return sum((p * x for p, x in zip(self.prob, g)), Fraction(0))

    def _split(self, g: Slot) -> tuple[Fraction, Slot | None]:
        m = self.mean(g)
        centered = tuple(x - m for x in g)
        return m, (centered if any(centered) else None)

    def apply_particle(self, i: int, f: TestFunction, v: FreeProductVector,
                       keep_depth: int | None = None) -> FreeProductVector:
        """M_i(f) v."""
        if not 1 <= i <= self.N:
            raise ValueError(f"particle index {i} outside 1..{self.N}")
        fv = self.symbol(f)
        out: dict = defaultdict(Fraction)
        for word, coef in v.coeffs.items():
            if word and word[0][0] == i:
                g = word[0][1]
                rest = word[1:]
                m, centered = self._split(tuple(a * b for a, b in zip(fv, g)))
            else:
                rest = word
                m, centered = self._split(fv)
            if m:
                out[rest] += m * coef
            if centered is None:
                continue
            new = ((i, centered),) + rest
            if keep_depth is not None and len(new) > keep_depth:
                continue
            if len(new) > self.depth:
                raise TruncationError(f"creation would exceed depth {self.depth}")
            out[new] += coef
        _check_size(out)
        return FreeProductVector(_as_vector(out))

    def apply_sum(self, f: TestFunction, v: FreeProductVector,
                  keep_depth: int | None = None) -> FreeProductVector:
        """A(Lambda, N; f) v = sum_i M_i(f) v."""
        out: dict = defaultdict(Fraction)
        for i in range(1, self.N + 1):
            for w, c in self.apply_particle(i, f, v, keep_depth).coeffs.items():
                out[w] += c
        _check_size(out)
        return FreeProductVector(_as_vector(out))

    def inner(self, v: FreeProductVector, w: FreeProductVector) -> Fraction:
        total = Fraction(0)
        for a, ca in v.coeffs.items():
            labels = tuple(l for l, _ in a)
            for b, cb in w.coeffs.items():
                if len(a) != len(b) or tuple(l for l, _ in b) != labels:
                    continue
                prod = ca * cb
                for (_, g), (_, h) in zip(a, b):
                    prod *= sum((p * x * y for p, x, y in zip(self.prob, g, h)), Fraction(0))
                total += prod
        return total


def free_product_apply(space: FreeProductSpace, i: int, f: TestFunction,
                       v: FreeProductVector) -> FreeProductVector:
    return space.apply_particle(i, f, v)


def free_product_word_expectation(sp: DiscreteSpace, N: int, factors: Sequence[tuple[int, TestFunction]],
                                  depth: int | None = None, jumps: JumpMeasure | None = None) -> Fraction:
    """<M_{i_1}(f_1) ... M_{i_k}(f_k) Psi_N, Psi_N>."""
    factors = tuple(factors)
    k = len(factors)
    depth = k if depth is None else depth
    if depth < k:
        raise TruncationError(f"depth {depth} < word length {k} would truncate silently")
    fp = FreeProductSpace(sp, N, jumps, depth)
    v = FreeProductVector.vacuum()
    for j, (i, f) in enumerate(reversed(factors), start=1):
        v = fp.apply_particle(i, f, v, keep_depth=k - j)
    return v.vacuum_coefficient()


def free_product_vacuum_expectation(sp: DiscreteSpace, N: int, fs: Sequence[TestFunction],
                                    depth: int | None = None, jumps: JumpMeasure | None = None) -> Fraction:
    """<A(Lambda,N;f_1) ... A(Lambda,N;f_k) Psi_N, Psi_N>."""
    fs = tuple(fs)
    k = len(fs)
    depth = k if depth is None else depth
    if depth < k:
        raise TruncationError(f"depth {depth} < word length {k} would truncate silently")
    fp = FreeProductSpace(sp, N, jumps, depth)
    v = FreeProductVector.vacuum()
    for j, f in enumerate(reversed(fs), start=1):
        v = fp.apply_sum(f, v, keep_depth=k - j)
    return v.vacuum_coefficient()


def poissonized_oracle(sp: DiscreteSpace, alpha, fs: Sequence[TestFunction], n_max: int | None = None,
                       depth: int | None = None, jumps: JumpMeasure | None = None,
                       tail_tol: float = 1e-9) -> float:
    """Poisson(alpha)-weighted sum of free-product vacuum expectations.

    The tail is bounded with operator norms: |<A^k Psi, Psi>| <= N^k prod ||f_j (x) id||_inf.
    """
    fs = tuple(fs)
    k = len(fs)
    a = float(as_fraction(alpha))
    norm = 1.0
    smax = 1.0 if jumps is None else float(jumps.max_jump())
    for f in fs:
        norm *= float(f.sup_norm()) * smax

    def bound(m: int) -> float:
        return norm * poisson_power_tail(a, k, m)

    if n_max is None:
        n_max = _auto_cutoff(a, bound, tail_tol)
    tail = bound(n_max)
    if tail > tail_tol:
        raise TailBoundError(f"tail bound {tail:.3e} exceeds {tail_tol:.1e} at n_max={n_max}")
    total = 0.0
    for N in range(1, n_max + 1):
        w = poisson_pmf(a, N)
        if w == 0.0:
            continue
        total += w * float(free_product_vacuum_expectation(sp, N, fs, depth, jumps))
    return total
