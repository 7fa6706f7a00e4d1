"""SLOCC filtering from the GHZ state, for comparison with the optical scheme.

A GHZ-class state ``√K (cos χ|000⟩ + sin χ e^{iθ}|s1 s2 s3⟩)`` is reached
from GHZ by the local filter ``M = √(2K) M̃``.  Realized as a two-outcome
POVM with success operator ``M/‖M‖`` it works with probability ``1/‖M‖²``,
which collapses near ``χ = π/4, θ = π, α -> 0``.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .schmidt_canonical import ThreeQubitState, ghz_state

NormKind = Literal["spectral", "frobenius"]
NORM_KINDS = ("spectral", "frobenius")
RANGE_TOL = 1e-15
POVM_TOL = 1e-10
OPTICAL_PROBABILITY = 1.0 / 18.0


@dataclass(frozen=True)
class GhzClassParams:
    chi: float
    theta: float
    alpha1: float
    alpha2: float
    alpha3: float

    def __post_init__(self):
        if not (RANGE_TOL < self.chi <= math.pi / 4 + RANGE_TOL):
            raise ValueError(f"chi={self.chi} outside (0, pi/4]")
        if not (0.0 <= self.theta < 2 * math.pi):
            raise ValueError(f"theta={self.theta} outside [0, 2pi)")
        for name in ("alpha1", "alpha2", "alpha3"):
            v = getattr(self, name)
            if not (RANGE_TOL < v <= math.pi / 2 + RANGE_TOL):
                raise ValueError(f"{name}={v} outside (0, pi/2]")

    @classmethod
    def symmetric(cls, chi: float, alpha: float, theta: float = math.pi) -> "GhzClassParams":
        return cls(chi, theta, alpha, alpha, alpha)

    @property
    def alphas(self) -> tuple[float, float, float]:
        return (self.alpha1, self.alpha2, self.alpha3)

    @property
    def K(self) -> float:
        c = math.cos(self.chi) * math.sin(self.chi) * math.cos(self.theta)
        for a in self.alphas:
            c *= math.cos(a)
        return 1.0 / (1.0 + 2.0 * c)


def _s(alpha: float) -> np.ndarray:
    return np.array([math.cos(alpha), math.sin(alpha)], dtype=complex)


def ghz_class_state(params: GhzClassParams) -> ThreeQubitState:
    zeros = np.zeros(8, dtype=complex)
    zeros[0] = 1.0
    s123 = np.kron(np.kron(_s(params.alpha1), _s(params.alpha2)), _s(params.alpha3))
    amps = math.sqrt(params.K) * (
        math.cos(params.chi) * zeros
        + math.sin(params.chi) * np.exp(1j * params.theta) * s123
    )
    return ThreeQubitState(amps)


def filter_factors(params: GhzClassParams) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The three upper-triangular factors of ``M̃``."""
    ch, th = params.chi, params.theta
    a1, a2, a3 = params.alphas
    ph = np.exp(1j * th)
    f1 = np.array(
        [[math.cos(ch), math.sin(ch) * math.cos(a1) * ph],
         [0.0, math.sin(ch) * math.sin(a1) * ph]],
        dtype=complex,
    )
    f2 = np.array([[1.0, math.cos(a2)], [0.0, math.sin(a2)]], dtype=complex)
    f3 = np.array([[1.0, math.cos(a3)], [0.0, math.sin(a3)]], dtype=complex)
    return f1, f2, f3


@dataclass(frozen=True)
class SloccOperator:
    matrix: np.ndarray
    norm_kind: NormKind = "spectral"

    def __post_init__(self):
        if self.norm_kind not in NORM_KINDS:
            raise ValueError(f"unknown norm {self.norm_kind!r}")

    @property
    def norm(self) -> float:
        return matrix_norm(self.matrix, self.norm_kind)

    def success_operator(self) -> np.ndarray:
        return self.matrix / self.norm

    def with_norm(self, norm_kind: NormKind) -> "SloccOperator":
        return SloccOperator(self.matrix, norm_kind)


def matrix_norm(M: np.ndarray, kind: NormKind) -> float:
    if kind == "spectral":
        # largest eigenvalue of M†M; 8x8 hermitian
        return math.sqrt(max(0.0, float(np.linalg.eigvalsh(M.conj().T @ M)[-1])))
    if kind == "frobenius":
        return math.sqrt(float(np.sum(np.abs(M) ** 2)))
    raise ValueError(f"unknown norm {kind!r}")


def slocc_operator(params: GhzClassParams, norm_kind: NormKind = "spectral") -> SloccOperator:
    f1, f2, f3 = filter_factors(params)
    M = math.sqrt(2.0 * params.K) * np.kron(np.kron(f1, f2), f3)
    return SloccOperator(M, norm_kind)


def success_probability(op: SloccOperator) -> float:
    """``1/‖M‖²`` after checking that ``M/‖M‖`` is a valid POVM element."""
    P = op.success_operator()
    top = float(np.linalg.eigvalsh(P.conj().T @ P)[-1])
    if top > 1.0 + POVM_TOL:
        raise ValueError(f"P†P has eigenvalue {top:.12g} > 1; norm choice is not admissible")
    return 1.0 / op.norm**2


def filtered_state(op: SloccOperator) -> ThreeQubitState:
    """Renormalized output of the success branch acting on GHZ."""
    return ThreeQubitState.from_unnormalized(op.success_operator() @ ghz_state().amplitudes)


def symmetric_success(chi: float, alpha: float, norm_kind: NormKind = "spectral",
                      theta: float = math.pi) -> float:
    return success_probability(slocc_operator(GhzClassParams.symmetric(chi, alpha, theta), norm_kind))


@dataclass(frozen=True)
class SweepTable:
    chis: np.ndarray
    alphas: np.ndarray
    p_succ: np.ndarray  # shape (len(chis), len(alphas))
    norm_kind: str

    def rows(self):
        for i, chi in enumerate(self.chis):
            for j, alpha in enumerate(self.alphas):
                yield float(chi), float(alpha), float(self.p_succ[i, j])

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["chi", "alpha", "p_succ"])
        for row in self.rows():
            writer.writerow([f"{v:.12g}" for v in row])
        return buf.getvalue()

    def below_optical(self) -> np.ndarray:
        """Mask of grid points where filtering does worse than 1/18."""
        return self.p_succ < OPTICAL_PROBABILITY

    def corner_is_minimum(self) -> bool:
        """The χ = π/4, smallest-α cell holds the grid minimum and p falls with α there."""
        if not math.isclose(self.chis[-1], math.pi / 4):
            return False
        corner = self.p_succ[-1, 0]
        edge = self.p_succ[-1]
        return bool(corner <= self.p_succ.min() and np.all(np.diff(edge[:3]) > 0))


def default_grid(n_chi: int, n_alpha: int, chi_min: float = 1e-3,
                 alpha_min: float = 1e-3) -> tuple[np.ndarray, np.ndarray]:
    if n_chi < 2 or n_alpha < 2:
        raise ValueError("grid needs at least two points per axis")
    return (np.linspace(chi_min, math.pi / 4, n_chi),
            np.linspace(alpha_min, math.pi / 2, n_alpha))


def sweep(
    chis: Sequence[float],
    alphas: Sequence[float],
    norm_kind: NormKind = "spectral",
    theta: float = math.pi,
    workers: int = 1,
) -> SweepTable:
    """Evaluate ``p_succ`` on the (χ, α) grid with α1 = α2 = α3 = α.

    Cells are independent; with ``workers > 1`` they run on a thread pool
    and are written back by index, so the table does not depend on it.
    """
    chis = np.asarray(chis, dtype=float)
    alphas = np.asarray(alphas, dtype=float)
    if chis.size < 2 or alphas.size < 2:
        raise ValueError("grid needs at least two points per axis")
    cells = [(i, j) for i in range(chis.size) for j in range(alphas.size)]
    out = np.empty((chis.size, alphas.size))

    def cell(ij):
        i, j = ij
        return symmetric_success(chis[i], alphas[j], norm_kind, theta)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(cell, cells))
    else:
        values = [cell(ij) for ij in cells]
    for (i, j), v in zip(cells, values):
        out[i, j] = v
    return SweepTable(chis, alphas, out, norm_kind)
