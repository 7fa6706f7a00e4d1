"""Creation-operator polynomials over a small set of optical modes.

A multi-particle pure state is written as ``P(a†)|Ω⟩`` where ``P`` is a
polynomial in creation operators.  Every stored monomial is kept in
canonical normal order (ascending mode index); reordering a word into that
form picks up the exchange phase ``exp(i θ)`` once per adjacent swap of an
inverted pair.  ``θ = 0`` gives bosons, ``θ = π`` fermions and anything in
between hard-core anyons.

Modes are labelled ``1..n_modes`` throughout, matching the optical circuit.

The permanent/determinant oracle at the bottom of the module shares no code
with the polynomial engine and is used to cross-check it.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

N_MODES = 10
PRUNE_TOL = 1e-14
COMPARE_TOL = 1e-10

Monomial = tuple[int, ...]


@dataclass(frozen=True)
class ExchangeStatistics:
    """Exchange phase acquired when two creation operators are transposed."""

    phase: float

    def __post_init__(self):
        if not 0.0 <= self.phase <= math.pi:
            raise ValueError(f"exchange phase must lie in [0, pi], got {self.phase}")

    @classmethod
    def bosons(cls) -> "ExchangeStatistics":
        return cls(0.0)

    @classmethod
    def fermions(cls) -> "ExchangeStatistics":
        return cls(math.pi)

    @classmethod
    def anyons(cls, phase: float) -> "ExchangeStatistics":
        return cls(float(phase))

    @classmethod
    def parse(cls, text: str) -> "ExchangeStatistics":
        """Parse ``boson``, ``fermion`` or ``anyon:<radians>``."""
        key = text.strip().lower()
        if key in ("boson", "bosons"):
            return cls.bosons()
        if key in ("fermion", "fermions"):
            return cls.fermions()
        if key.startswith("anyon:"):
            try:
                return cls.anyons(float(key.split(":", 1)[1]))
            except ValueError as exc:
                raise ValueError(f"bad anyon phase in {text!r}") from exc
        raise ValueError(f"unknown statistics {text!r}")

    @property
    def is_bosonic(self) -> bool:
        return self.phase == 0.0

    @property
    def is_fermionic(self) -> bool:
        return self.phase == math.pi

    @property
    def hard_core(self) -> bool:
        return self.phase != 0.0

    def label(self) -> str:
        if self.is_bosonic:
            return "boson"
        if self.is_fermionic:
            return "fermion"
        return f"anyon:{self.phase!r}"


BOSONS = ExchangeStatistics.bosons()
FERMIONS = ExchangeStatistics.fermions()


def _check_modes(word: Iterable[int], n_modes: int) -> None:
    for m in word:
        if not isinstance(m, (int, np.integer)) or not 1 <= m <= n_modes:
            raise ValueError(f"mode index {m!r} outside 1..{n_modes}")


@lru_cache(maxsize=None)
def _sort_word(word: Monomial, phase: float) -> tuple[Monomial, complex] | None:
    # insertion sort by adjacent swaps; each swap of an inverted pair costs exp(i*phase)
    letters = list(word)
    swaps = 0
    for i in range(1, len(letters)):
        j = i
        while j > 0 and letters[j - 1] > letters[j]:
            letters[j - 1], letters[j] = letters[j], letters[j - 1]
            swaps += 1
            j -= 1
    if phase != 0.0:
        for x, y in zip(letters, letters[1:]):
            if x == y:
                return None
    if swaps == 0 or phase == 0.0:
        factor = 1.0 + 0.0j
    elif phase == math.pi:
        factor = complex((-1) ** swaps)
    else:
        factor = cmath.exp(1j * phase * swaps)
    return tuple(letters), factor


def normal_order(
    product: Sequence[int],
    statistics: ExchangeStatistics,
    n_modes: int = N_MODES,
) -> tuple[Monomial, complex] | None:
    """Bring a word of creation operators into ascending mode order.

    Returns the sorted monomial and the accumulated exchange phase, or
    ``None`` when the word is annihilated (repeated mode, hard-core
    statistics).
    """
    word = tuple(int(m) for m in product)
    _check_modes(word, n_modes)
    return _sort_word(word, statistics.phase)


class OperatorPolynomial:
    """Linear combination of normal-ordered creation-operator monomials.

    Instances are treated as immutable; all operations return new objects.
    """

    __slots__ = ("_terms", "statistics", "n_modes")

    def __init__(
        self,
        terms: Mapping[Sequence[int], complex] | None = None,
        statistics: ExchangeStatistics = BOSONS,
        n_modes: int = N_MODES,
    ):
        self.statistics = statistics
        self.n_modes = n_modes
        acc: dict[Monomial, complex] = {}
        for word, amp in (terms or {}).items():
            ordered = normal_order(word, statistics, n_modes)
            if ordered is None:
                continue
            mono, factor = ordered
            acc[mono] = acc.get(mono, 0.0) + factor * complex(amp)
        self._terms = _pruned(acc)

    @classmethod
    def _from_ordered(cls, terms, statistics, n_modes) -> "OperatorPolynomial":
        obj = cls.__new__(cls)
        obj.statistics = statistics
        obj.n_modes = n_modes
        obj._terms = _pruned(terms)
        return obj

    @classmethod
    def vacuum(cls, statistics=BOSONS, n_modes=N_MODES) -> "OperatorPolynomial":
        return cls._from_ordered({(): 1.0 + 0.0j}, statistics, n_modes)

    @classmethod
    def creation(cls, mode: int, statistics=BOSONS, n_modes=N_MODES, amplitude=1.0):
        return cls({(mode,): amplitude}, statistics, n_modes)

    @classmethod
    def linear(cls, coefficients: Mapping[int, complex], statistics=BOSONS, n_modes=N_MODES):
        """Single-particle operator ``Σ c_m a†_m``."""
        return cls({(m,): c for m, c in coefficients.items()}, statistics, n_modes)

    @property
    def terms(self) -> dict[Monomial, complex]:
        return dict(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self):
        return iter(sorted(self._terms))

    def __getitem__(self, monomial: Sequence[int]) -> complex:
        return self._terms.get(tuple(monomial), 0.0j)

    def items(self):
        return sorted(self._terms.items())

    def __mul__(self, other: "OperatorPolynomial") -> "OperatorPolynomial":
        return multiply(self, other)

    def __add__(self, other: "OperatorPolynomial") -> "OperatorPolynomial":
        _check_compatible(self, other)
        acc = dict(self._terms)
        for mono, amp in other._terms.items():
            acc[mono] = acc.get(mono, 0.0) + amp
        return OperatorPolynomial._from_ordered(acc, self.statistics, self.n_modes)

    def scale(self, factor: complex) -> "OperatorPolynomial":
        return OperatorPolynomial._from_ordered(
            {m: factor * a for m, a in self._terms.items()}, self.statistics, self.n_modes
        )

    def norm_squared(self) -> float:
        """Squared norm of ``P(a†)|Ω⟩`` (bosonic multiplicities included)."""
        return float(sum(abs(a) ** 2 * _multiplicity_weight(m) for m, a in self._terms.items()))

    def fock_amplitudes(self) -> dict[tuple[int, ...], complex]:
        """Map occupation vectors to normalized Fock-state amplitudes."""
        out = {}
        for mono, amp in self._terms.items():
            occ = monomial_to_occupation(mono, self.n_modes)
            out[occ] = amp * math.sqrt(_multiplicity_weight(mono))
        return out

    def allclose(self, other: "OperatorPolynomial", atol: float = COMPARE_TOL) -> bool:
        keys = set(self._terms) | set(other._terms)
        return all(abs(self[k] - other[k]) <= atol for k in keys)

    def __repr__(self) -> str:
        body = " + ".join(
            f"({a:.6g})" + "".join(f"a{m}" for m in mono) for mono, a in self.items()
        )
        return f"OperatorPolynomial[{self.statistics.label()}]({body or '0'})"


def _pruned(terms: Mapping[Monomial, complex]) -> dict[Monomial, complex]:
    return {m: complex(a) for m, a in terms.items() if abs(a) >= PRUNE_TOL}


def _multiplicity_weight(mono: Monomial) -> int:
    w = 1
    for _, group in itertools.groupby(mono):
        w *= math.factorial(len(list(group)))
    return w


def _check_compatible(p: OperatorPolynomial, q: OperatorPolynomial) -> None:
    if p.statistics != q.statistics:
        raise ValueError(
            f"statistics mismatch: {p.statistics.label()} vs {q.statistics.label()}"
        )
    if p.n_modes != q.n_modes:
        raise ValueError(f"mode count mismatch: {p.n_modes} vs {q.n_modes}")


def multiply(p: OperatorPolynomial, q: OperatorPolynomial) -> OperatorPolynomial:
    """Distributive product ``p·q`` with every word re-normal-ordered."""
    _check_compatible(p, q)
    phase = p.statistics.phase
    acc: dict[Monomial, complex] = {}
    for m1, a1 in p._terms.items():
        for m2, a2 in q._terms.items():
            ordered = _sort_word(m1 + m2, phase)
            if ordered is None:
                continue
            mono, factor = ordered
            acc[mono] = acc.get(mono, 0.0) + factor * a1 * a2
    return OperatorPolynomial._from_ordered(acc, p.statistics, p.n_modes)


def images_from_matrix(T: np.ndarray) -> dict[int, dict[int, complex]]:
    """Column convention: ``a†_j -> Σ_i T[i-1, j-1] a†_i``."""
    T = np.asarray(T)
    n = T.shape[0]
    return {
        j + 1: {i + 1: complex(T[i, j]) for i in range(n) if abs(T[i, j]) >= PRUNE_TOL}
        for j in range(n)
    }


def substitute_modes(
    p: OperatorPolynomial,
    images: Mapping[int, Mapping[int, complex]] | np.ndarray,
) -> OperatorPolynomial:
    """Replace each ``a†_j`` by its image and re-expand.

    ``images`` is either a mapping ``j -> {i: T_ij}`` or a square matrix in
    the column convention of :func:`images_from_matrix`.
    """
    if isinstance(images, np.ndarray):
        images = images_from_matrix(images)
    phase = p.statistics.phase
    acc: dict[Monomial, complex] = {}
    for mono, amp in p._terms.items():
        factors = []
        for mode in mono:
            if mode not in images:
                raise KeyError(f"no image given for mode {mode}")
            factors.append(list(images[mode].items()))
        for choice in itertools.product(*factors):
            word = tuple(m for m, _ in choice)
            ordered = _sort_word(word, phase)
            if ordered is None:
                continue
            coef = amp
            for _, c in choice:
                coef *= c
            out, factor = ordered
            acc[out] = acc.get(out, 0.0) + factor * coef
    for modes in acc:
        _check_modes(modes, p.n_modes)
    return OperatorPolynomial._from_ordered(acc, p.statistics, p.n_modes)


# --- occupation-number basis -------------------------------------------------


def monomial_to_occupation(mono: Sequence[int], n_modes: int = N_MODES) -> tuple[int, ...]:
    occ = [0] * n_modes
    for m in mono:
        occ[m - 1] += 1
    return tuple(occ)


def occupation_to_monomial(occupation: Sequence[int]) -> Monomial:
    return tuple(m + 1 for m, n in enumerate(occupation) for _ in range(n))


def fock_basis(n_particles: int, n_modes: int, statistics: ExchangeStatistics):
    """All occupation vectors with ``n_particles`` in ``n_modes`` modes."""
    if statistics.hard_core:
        combos = itertools.combinations(range(1, n_modes + 1), n_particles)
    else:
        combos = itertools.combinations_with_replacement(range(1, n_modes + 1), n_particles)
    return [monomial_to_occupation(c, n_modes) for c in combos]


def product_state(modes: Sequence[int], statistics=BOSONS, n_modes=N_MODES) -> OperatorPolynomial:
    """``a†_{m1} a†_{m2} ...`` as a polynomial (normal-ordered)."""
    return OperatorPolynomial({tuple(modes): 1.0}, statistics, n_modes)


# --- independent oracle ------------------------------------------------------


def permanent(M: np.ndarray) -> complex:
    """Ryser's inclusion-exclusion formula."""
    M = np.asarray(M, dtype=complex)
    n = M.shape[0]
    if n == 0:
        return 1.0 + 0.0j
    total = 0.0j
    for r in range(1, n + 1):
        sign = (-1) ** r
        for cols in itertools.combinations(range(n), r):
            total += sign * np.prod(M[:, cols].sum(axis=1))
    return (-1) ** n * total


def determinant(M: np.ndarray) -> complex:
    """Leibniz expansion; only meant for the tiny matrices used here."""
    M = np.asarray(M, dtype=complex)
    n = M.shape[0]
    total = 0.0j
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = 1.0 + 0.0j
        for row, col in enumerate(perm):
            term *= M[row, col]
        total += -term if inversions % 2 else term
    return total


def _expand(occupation: Sequence[int]) -> list[int]:
    return [i for i, n in enumerate(occupation) for _ in range(n)]


def transition_amplitude_oracle(
    input_occupation: Sequence[int],
    output_occupation: Sequence[int],
    T: np.ndarray,
    statistics: ExchangeStatistics,
) -> complex:
    """``⟨out| Û |in⟩`` for ``Û a†_j Û† = Σ_i T_ij a†_i``.

    Bosons use the permanent of the repeated submatrix, fermions the
    determinant of the submatrix with ascending rows and columns.
    """
    if sum(input_occupation) != sum(output_occupation):
        raise ValueError("particle numbers differ")
    if statistics.is_bosonic:
        cols = _expand(input_occupation)
        rows = _expand(output_occupation)
        norm = math.prod(math.factorial(n) for n in input_occupation)
        norm *= math.prod(math.factorial(n) for n in output_occupation)
        return permanent(np.asarray(T)[np.ix_(rows, cols)]) / math.sqrt(norm)
    if statistics.is_fermionic:
        if max(input_occupation) > 1 or max(output_occupation) > 1:
            return 0.0j
        cols = _expand(input_occupation)
        rows = _expand(output_occupation)
        return determinant(np.asarray(T)[np.ix_(rows, cols)])
    raise ValueError("the oracle covers bosons and fermions only")
