"""Mode transformations of the ten-path no-touching circuit.

All matrices use the column convention ``a†_j -> Σ_i T[i, j] a†_i`` with
0-based array indices standing for modes ``1..10``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .fock_algebra import N_MODES

if TYPE_CHECKING:
    from .protocol import ProtocolParams

UNITARY_TOL = 1e-12
ORTHONORMAL_TOL = 1e-10
SKIP_TOL = 1e-8
CONSTRAINT_TOL = 1e-10

# image of each mode under the path permutation, modes 1..10
SIGMA = {1: 1, 2: 7, 3: 10, 4: 4, 5: 5, 6: 6, 7: 2, 8: 3, 9: 9, 10: 8}


@dataclass(frozen=True)
class ModeGrouping:
    inputs: tuple[frozenset, ...] = (
        frozenset(range(1, 6)),
        frozenset({6, 7}),
        frozenset({8, 9, 10}),
    )
    outputs: tuple[frozenset, ...] = (
        frozenset(range(1, 6)),
        frozenset({6, 7, 8}),
        frozenset({9, 10}),
    )
    # (|0>, |1>) mode of each dual-rail qubit
    dual_rail: tuple[tuple[int, int], ...] = ((1, 2), (6, 7), (9, 10))

    @property
    def dropped_modes(self) -> frozenset:
        """Modes that must be empty after post-selection."""
        used = {m for pair in self.dual_rail for m in pair}
        return frozenset(range(1, N_MODES + 1)) - used


GROUPING = ModeGrouping()


@dataclass(frozen=True)
class ModeUnitary:
    matrix: np.ndarray
    support: tuple[int, ...]

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (len(self.support), len(self.support)):
            raise ValueError("support size must equal the matrix dimension")
        object.__setattr__(self, "matrix", m)

    @property
    def dimension(self) -> int:
        return len(self.support)

    def embed(self, n_modes: int = N_MODES) -> np.ndarray:
        return embed({self.support: self.matrix}, n_modes)


@dataclass(frozen=True)
class ModePermutation:
    images: dict = field(default_factory=lambda: dict(SIGMA))

    def __post_init__(self):
        keys = sorted(self.images)
        if keys != sorted(self.images.values()):
            raise ValueError("permutation is not a bijection")

    def __call__(self, mode: int) -> int:
        return self.images[mode]

    def inverse(self) -> "ModePermutation":
        return ModePermutation({v: k for k, v in self.images.items()})

    def compose(self, other: "ModePermutation") -> "ModePermutation":
        """``self ∘ other``."""
        return ModePermutation({k: self.images[other.images[k]] for k in other.images})

    def matrix(self, n_modes: int = N_MODES) -> np.ndarray:
        P = np.zeros((n_modes, n_modes), dtype=complex)
        for j, i in self.images.items():
            P[i - 1, j - 1] = 1.0
        return P


@dataclass(frozen=True)
class CircuitSpec:
    stage1: np.ndarray
    sigma: ModePermutation
    stage3: np.ndarray

    def stages(self) -> list[tuple[str, np.ndarray]]:
        return [
            ("stage1", self.stage1),
            ("sigma", self.sigma.matrix()),
            ("stage3", self.stage3),
        ]

    def total(self) -> np.ndarray:
        return self.stage3 @ self.sigma.matrix() @ self.stage1

    def to_json(self, extra: Sequence[tuple[str, np.ndarray]] = ()) -> str:
        stages = [
            {"name": name, "matrix": matrix_to_pairs(m)}
            for name, m in [*self.stages(), *extra]
        ]
        return json.dumps({"modes": N_MODES, "stages": stages}, indent=2)


def matrix_to_pairs(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def matrix_from_pairs(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 3 or arr.shape[-1] != 2:
        raise ValueError("expected a matrix of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def unitarity_residual(T: np.ndarray) -> float:
    T = np.asarray(T)
    return float(np.max(np.abs(T.conj().T @ T - np.eye(T.shape[0]))))


def is_unitary(T: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    T = np.asarray(T)
    return T.ndim == 2 and T.shape[0] == T.shape[1] and unitarity_residual(T) < tol


def complete_to_unitary(partial_rows: Sequence[Sequence[complex]], dimension: int) -> np.ndarray:
    """Extend orthonormal rows to a unitary matrix.

    Canonical basis vectors are tried in ascending order, orthogonalized
    against everything accepted so far (two Gram-Schmidt passes) and
    skipped when the residual norm falls below ``1e-8``.  The result is a
    deterministic function of the input.
    """
    rows = [np.asarray(r, dtype=complex) for r in partial_rows]
    if any(r.shape != (dimension,) for r in rows):
        raise ValueError(f"rows must have length {dimension}")
    if len(rows) > dimension:
        raise ValueError("more rows than the dimension")
    if rows:
        R = np.array(rows)
        gram = R @ R.conj().T
        if np.max(np.abs(gram - np.eye(len(rows)))) > ORTHONORMAL_TOL:
            raise ValueError("given rows are not orthonormal")

    basis = list(rows)
    for k in range(dimension):
        if len(basis) == dimension:
            break
        v = np.zeros(dimension, dtype=complex)
        v[k] = 1.0
        for _ in range(2):
            for b in basis:
                v = v - np.vdot(b, v) * b
        norm = np.linalg.norm(v)
        if norm < SKIP_TOL:
            continue
        basis.append(v / norm)
    if len(basis) != dimension:
        raise RuntimeError("completion failed to span the space")
    return np.array(basis)


def embed(blocks: dict[tuple[int, ...], np.ndarray], n_modes: int = N_MODES) -> np.ndarray:
    """Place block unitaries on their (1-based) mode supports, identity elsewhere."""
    T = np.eye(n_modes, dtype=complex)
    seen: set[int] = set()
    for support, block in blocks.items():
        if seen & set(support):
            raise ValueError("block supports overlap")
        seen |= set(support)
        idx = [m - 1 for m in support]
        T[np.ix_(idx, idx)] = block
    return T


def uniform_splitter(n: int) -> np.ndarray:
    """Unitary whose first column is the uniform superposition."""
    first = np.full(n, 1.0 / np.sqrt(n), dtype=complex)
    return complete_to_unitary([first], n).T


def build_fixed_stages() -> tuple[np.ndarray, ModePermutation]:
    """First layer (U, H, U on the input groups) and the path permutation."""
    U = uniform_splitter(3)
    H = uniform_splitter(2)
    stage1 = embed({(1, 2, 3): U, (6, 7): H, (8, 9, 10): U})
    return stage1, ModePermutation(dict(SIGMA))


def output_rows(params: "ProtocolParams") -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The specified rows of V (two) and W (one)."""
    p = params
    v1 = np.array([p.kappa, 0, 0, p.delta, p.epsilon], dtype=complex)
    v2 = np.array([np.conj(p.delta), p.mu, p.nu, -np.conj(p.kappa), 0], dtype=complex)
    w1 = np.array([p.xi, p.tau], dtype=complex)
    return v1, v2, w1


def build_output_blocks(params: "ProtocolParams") -> tuple[np.ndarray, np.ndarray]:
    params.check()
    v1, v2, w1 = output_rows(params)
    V = complete_to_unitary([v1, v2], 5)
    W = complete_to_unitary([w1], 2)
    return V, W


def build_output_stage(params: "ProtocolParams") -> np.ndarray:
    """V on modes 1..5 and W on modes 7, 8; mode 6 passes through."""
    V, W = build_output_blocks(params)
    return embed({(1, 2, 3, 4, 5): V, (7, 8): W})


def build_circuit(params: "ProtocolParams") -> CircuitSpec:
    stage1, sigma = build_fixed_stages()
    return CircuitSpec(stage1=stage1, sigma=sigma, stage3=build_output_stage(params))


def local_stage(locals_: Sequence[np.ndarray]) -> np.ndarray:
    """Single-qubit unitaries realized on the dual-rail pairs."""
    blocks = {}
    for pair, L in zip(GROUPING.dual_rail, locals_):
        L = np.asarray(L, dtype=complex)
        if not is_unitary(L, 1e-10):
            raise ValueError("local operation is not unitary")
        blocks[pair] = L
    return embed(blocks)
