"""Five-term canonical form of three-qubit pure states.

Any three-qubit state can be rotated by local unitaries into

    a|000⟩ + b e^{iφ}|100⟩ + c|110⟩ + d|101⟩ + e|111⟩

with ``a..e >= 0`` and ``0 <= φ <= π``.  :func:`decompose` finds the
coefficients together with the local unitaries that undo the rotation, and
:func:`reconstruct` maps them back to a state vector.

Amplitude arrays are indexed ``4*i + 2*j + k`` for ``|ijk⟩``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

NORM_TOL = 1e-10
DEGENERATE_TOL = 1e-12
ZERO_TOL = 1e-12
PHASE_SLACK = 1e-9

LABELS = ["000", "001", "010", "011", "100", "101", "110", "111"]
# canonical-core positions of a, b, c, d, e
CORE_INDEX = {"a": 0, "b": 4, "c": 6, "d": 5, "e": 7}


def _pairs(z) -> list:
    return [[float(v.real), float(v.imag)] for v in np.ravel(z)]


def _from_pairs(data, shape) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.shape != (*shape, 2):
        raise ValueError(f"expected {shape} array of [re, im] pairs, got {arr.shape[:-1]}")
    return arr[..., 0] + 1j * arr[..., 1]


@dataclass(frozen=True)
class ThreeQubitState:
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape != (8,):
            raise ValueError("a three-qubit state needs 8 amplitudes")
        if abs(np.linalg.norm(amps) - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (norm {np.linalg.norm(amps):.12g})")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_unnormalized(cls, amplitudes) -> "ThreeQubitState":
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        return cls(amps / np.linalg.norm(amps))

    @classmethod
    def basis(cls, label: str) -> "ThreeQubitState":
        amps = np.zeros(8, dtype=complex)
        amps[int(label, 2)] = 1.0
        return cls(amps)

    @property
    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(2, 2, 2)

    def fidelity(self, other: "ThreeQubitState") -> float:
        return float(abs(np.vdot(self.amplitudes, other.amplitudes)) ** 2)

    def to_dict(self) -> dict:
        return {"amplitudes": _pairs(self.amplitudes)}

    @classmethod
    def from_dict(cls, data: dict) -> "ThreeQubitState":
        if not isinstance(data, dict) or "amplitudes" not in data:
            raise ValueError("missing 'amplitudes'")
        return cls(_from_pairs(data["amplitudes"], (8,)))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "ThreeQubitState":
        return cls.from_dict(json.loads(text))


def ghz_state() -> ThreeQubitState:
    amps = np.zeros(8, dtype=complex)
    amps[0] = amps[7] = 1 / np.sqrt(2)
    return ThreeQubitState(amps)


def w_state() -> ThreeQubitState:
    amps = np.zeros(8, dtype=complex)
    amps[[1, 2, 4]] = 1 / np.sqrt(3)
    return ThreeQubitState(amps)


def product_state(q1, q2, q3) -> ThreeQubitState:
    """Tensor product of three single-qubit vectors (normalized individually)."""
    vs = [np.asarray(q, dtype=complex) / np.linalg.norm(q) for q in (q1, q2, q3)]
    return ThreeQubitState(np.kron(np.kron(vs[0], vs[1]), vs[2]))


def random_state(seed) -> ThreeQubitState:
    """Eight complex Gaussian amplitudes, normalized."""
    rng = np.random.default_rng(seed)
    amps = rng.normal(size=8) + 1j * rng.normal(size=8)
    return ThreeQubitState(amps / np.linalg.norm(amps))


@dataclass(frozen=True)
class CanonicalParams:
    a: float
    b: float
    c: float
    d: float
    e: float
    phi: float
    locals: tuple = field(default_factory=lambda: (np.eye(2), np.eye(2), np.eye(2)))

    def __post_init__(self):
        object.__setattr__(
            self, "locals", tuple(np.asarray(L, dtype=complex) for L in self.locals)
        )

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c, self.d, self.e])

    def check(self, tol: float = NORM_TOL) -> None:
        coeffs = self.coefficients
        if np.any(coeffs < -tol):
            raise ValueError("canonical coefficients must be nonnegative")
        if not -tol <= self.phi <= np.pi + tol:
            raise ValueError(f"phase {self.phi} outside [0, pi]")
        if abs(np.sum(coeffs**2) - 1.0) > tol:
            raise ValueError("a^2 + b^2 + c^2 + d^2 + e^2 must equal 1")
        if len(self.locals) != 3:
            raise ValueError("need three local unitaries")
        for L in self.locals:
            if L.shape != (2, 2) or np.max(np.abs(L.conj().T @ L - np.eye(2))) > tol:
                raise ValueError("local operations must be 2x2 unitaries")

    def core(self) -> np.ndarray:
        """Canonical five-term vector before the local unitaries."""
        amps = np.zeros(8, dtype=complex)
        amps[CORE_INDEX["a"]] = self.a
        amps[CORE_INDEX["b"]] = self.b * np.exp(1j * self.phi)
        amps[CORE_INDEX["c"]] = self.c
        amps[CORE_INDEX["d"]] = self.d
        amps[CORE_INDEX["e"]] = self.e
        return amps

    def core_state(self) -> ThreeQubitState:
        return ThreeQubitState(self.core())

    def without_locals(self) -> "CanonicalParams":
        return CanonicalParams(self.a, self.b, self.c, self.d, self.e, self.phi)

    def to_dict(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "c": self.c,
            "d": self.d,
            "e": self.e,
            "phi": self.phi,
            "locals": [[_pairs(row) for row in L] for L in self.locals],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CanonicalParams":
        locs = tuple(_from_pairs(L, (2, 2)) for L in data["locals"])
        params = cls(*(float(data[k]) for k in ("a", "b", "c", "d", "e", "phi")), locals=locs)
        params.check()
        return params

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def local_product(locals_) -> np.ndarray:
    L1, L2, L3 = locals_
    return np.kron(np.kron(L1, L2), L3)


def reconstruct(params: CanonicalParams) -> ThreeQubitState:
    params.check()
    amps = local_product(params.locals) @ params.core()
    return ThreeQubitState(amps)


# --- decomposition -----------------------------------------------------------


def _det2(M: np.ndarray) -> complex:
    return M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]


def _first_qubit_rows(T: np.ndarray) -> list[tuple[complex, complex]]:
    """Rows ``(s, t)`` making ``s T0 + t T1`` singular.

    ``det(s T0 + t T1) = A s^2 + B s t + C t^2``; each projective root
    ``(s : t)`` is returned normalized.  An empty quadratic (every
    combination already singular) yields the identity row.
    """
    T0, T1 = T[0], T[1]
    A = _det2(T0)
    C = _det2(T1)
    B = _det2(T0 + T1) - A - C
    scale = max(abs(A), abs(B), abs(C))
    if scale < DEGENERATE_TOL:
        return [(1.0 + 0j, 0.0j)]
    A, B, C = (0.0j if abs(z) < 1e-14 * scale else z for z in (A, B, C))
    if abs(C) >= abs(A):
        xs = np.roots([C, B, A])  # x = t/s
        rows = [(1.0 + 0j, complex(x)) for x in xs]
        rows += [(0.0j, 1.0 + 0j)] * (2 - len(rows))
    else:
        ys = np.roots([A, B, C])  # y = s/t
        rows = [(complex(y), 1.0 + 0j) for y in ys]
        rows += [(1.0 + 0j, 0.0j)] * (2 - len(rows))
    out = []
    for s, t in rows:
        if not (np.isfinite(s) and np.isfinite(t)):
            s, t = (0.0j, 1.0 + 0j) if abs(C) >= abs(A) else (1.0 + 0j, 0.0j)
        big = max(abs(s), abs(t))
        s, t = s / big, t / big
        n = math.hypot(abs(s), abs(t))
        out.append((s / n, t / n))
    return out


def _gauge_phases(core: np.ndarray) -> tuple[float, float, float, float, bool]:
    """Phases (g, p1, p2, p3) making a, c, d, e real and nonnegative.

    Amplitude ``|ijk⟩`` picks up ``g + i p1 + j p2 + k p3``.  When all of
    b, c, d, e are nonzero one relative phase survives and is left on b;
    otherwise b is made real as well.  The flag reports which case applied.
    """
    coef = {
        "a": [1, 0, 0, 0],
        "b": [1, 1, 0, 0],
        "c": [1, 1, 1, 0],
        "d": [1, 1, 0, 1],
        "e": [1, 1, 1, 1],
    }
    present = {k: abs(core[i]) > ZERO_TOL for k, i in CORE_INDEX.items()}
    phase_survives = all(present[k] for k in "bcde")
    keys = [k for k in "acdeb" if present[k] and not (k == "b" and phase_survives)]
    if not keys:
        return 0.0, 0.0, 0.0, 0.0, phase_survives
    M = np.array([coef[k] for k in keys], dtype=float)
    rhs = np.array([-np.angle(core[CORE_INDEX[k]]) for k in keys])
    sol = np.linalg.lstsq(M, rhs, rcond=None)[0]
    return (*map(float, sol), phase_survives)


@dataclass
class _Candidate:
    params: CanonicalParams
    raw_phi: float
    residual: float


def _canonicalize(T: np.ndarray, s: complex, t: complex) -> _Candidate:
    U1 = np.array([[s, t], [-np.conj(t), np.conj(s)]])
    Tp = np.einsum("ai,ijk->ajk", U1, T)
    u, sv, vh = np.linalg.svd(Tp[0])
    if sv[0] < DEGENERATE_TOL:
        # nothing left in the |0> branch of qubit 1: diagonalize the |1> branch
        u, sv, vh = np.linalg.svd(Tp[1])
    U2 = u.conj().T
    U3 = vh.conj()
    core = np.einsum("bj,ck,ajk->abc", U2, U3, Tp).reshape(8)

    g, p1, p2, p3, phase_survives = _gauge_phases(core)
    D1 = np.diag([1.0, np.exp(1j * p1)])
    D2 = np.diag([1.0, np.exp(1j * p2)])
    D3 = np.diag([1.0, np.exp(1j * p3)])
    gauged = np.exp(1j * g) * (np.kron(np.kron(D1, D2), D3) @ core)

    mags = {k: float(abs(gauged[i])) for k, i in CORE_INDEX.items()}
    raw_phi = float(np.mod(np.angle(gauged[CORE_INDEX["b"]]), 2 * np.pi)) if phase_survives else 0.0
    if raw_phi > 2 * np.pi - PHASE_SLACK:
        raw_phi -= 2 * np.pi
    residual = float(np.linalg.norm(gauged[[1, 2, 3]]))

    # rescale so the dropped residual does not break normalization
    norm = np.sqrt(sum(v**2 for v in mags.values()))
    mags = {k: v / norm for k, v in mags.items()}

    G1 = np.exp(1j * g) * (D1 @ U1)
    G2 = D2 @ U2
    G3 = D3 @ U3
    locs = (G1.conj().T, G2.conj().T, G3.conj().T)
    params = CanonicalParams(
        mags["a"], mags["b"], mags["c"], mags["d"], mags["e"],
        float(np.clip(raw_phi, 0.0, np.pi)), locs,
    )
    return _Candidate(params, raw_phi, residual)


def decompose(state: ThreeQubitState) -> CanonicalParams:
    """Generalized Schmidt decomposition of a normalized three-qubit state.

    The first-qubit rotation makes the ``|0⟩`` slice rank one; singular
    vectors of that slice fix qubits 2 and 3, and diagonal phases then make
    ``a, c, d, e`` real.  Of the two roots of the determinant quadratic the
    one leaving ``φ`` in ``[0, π]`` is kept; if both qualify the smaller
    ``a`` (then smaller ``φ``) wins.
    """
    if not isinstance(state, ThreeQubitState):
        state = ThreeQubitState(state)
    T = state.tensor
    candidates = [_canonicalize(T, s, t) for s, t in _first_qubit_rows(T)]

    def in_range(c: _Candidate) -> bool:
        return -PHASE_SLACK <= c.raw_phi <= np.pi + PHASE_SLACK

    valid = [c for c in candidates if in_range(c)]
    if not valid:
        # numerically marginal; keep whichever root is closest to the range
        valid = [min(candidates, key=lambda c: min(abs(c.raw_phi - np.pi), abs(c.raw_phi)))]

    best = valid[0]
    for cand in valid[1:]:
        da = cand.params.a - best.params.a
        if da < -DEGENERATE_TOL or (abs(da) <= DEGENERATE_TOL and cand.params.phi < best.params.phi):
            best = cand
    return best.params
