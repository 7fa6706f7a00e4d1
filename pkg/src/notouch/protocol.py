"""Three particles, ten paths, coincidence post-selection.

Particles enter paths 1, 6 and 8, pass the fixed first layer and path
permutation, then the parameter-dependent output layer.  Keeping only the
branches with one particle in each dual-rail pair leaves the canonical
five-term state with probability 1/18, whatever the target and whatever
the exchange statistics (once the output layer is compensated for them).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import fock_algebra as fa
from . import interferometer as ifm
from .fock_algebra import BOSONS, ExchangeStatistics, OperatorPolynomial
from .schmidt_canonical import CanonicalParams, ThreeQubitState, decompose

INPUT_MODES = (1, 6, 8)
SUCCESS_PROBABILITY = 1.0 / 18.0
AMPLITUDE_SCALE = 1.0 / (3.0 * math.sqrt(2.0))
CONSTRAINT_TOL = 1e-10

# Order in which the three particles' creation operators multiply for each
# surviving branch, before normal ordering.  Position = input particle.
SURVIVING_WORDS = {
    "000": (1, 6, 9),
    "100": (2, 6, 9),
    "110": (7, 2, 9),
    "101": (10, 6, 2),
    "111": (10, 2, 7),
}


@dataclass(frozen=True)
class ProtocolParams:
    kappa: complex
    delta: complex
    nu: complex
    mu: complex
    epsilon: complex
    xi: complex
    tau: complex

    def constraint_residuals(self) -> tuple[float, float, float]:
        return (
            abs(abs(self.xi) ** 2 + abs(self.tau) ** 2 - 1.0),
            abs(abs(self.kappa) ** 2 + abs(self.delta) ** 2 + abs(self.epsilon) ** 2 - 1.0),
            abs(
                abs(self.delta) ** 2 + abs(self.mu) ** 2 + abs(self.nu) ** 2
                + abs(self.kappa) ** 2 - 1.0
            ),
        )

    def check(self, tol: float = CONSTRAINT_TOL) -> None:
        worst = max(self.constraint_residuals())
        if worst > tol:
            raise ValueError(f"output-layer normalization violated by {worst:.3g}")

    def term_parameters(self) -> dict[str, complex]:
        """Coefficient each surviving branch carries (bosonic reading)."""
        return {
            "000": self.kappa,
            "100": np.conj(self.delta),
            "110": self.xi * self.mu,
            "101": self.nu,
            "111": self.mu * self.tau,
        }


def exchange_phases(statistics: ExchangeStatistics) -> dict[str, complex]:
    """Normal-ordering phase picked up by each surviving branch."""
    out = {}
    for label, word in SURVIVING_WORDS.items():
        _, phase = fa.normal_order(word, statistics)
        out[label] = phase
    return out


def solve_params(
    canonical: CanonicalParams,
    statistics: ExchangeStatistics = BOSONS,
    compensate: bool = True,
) -> ProtocolParams:
    """Output-layer parameters that produce the canonical core.

    With ``compensate`` each branch coefficient is divided by its exchange
    phase so the post-selected state is the target for any statistics; for
    fermions this amounts to flipping the signs of ``ν`` and ``ξ``.
    """
    canonical.check()
    a, b, c, d, e, phi = (canonical.a, canonical.b, canonical.c,
                          canonical.d, canonical.e, canonical.phi)
    ph = exchange_phases(statistics) if compensate else exchange_phases(BOSONS)
    mu = math.sqrt(c * c + e * e)
    kappa = a * np.conj(ph["000"])
    delta = b * np.exp(-1j * phi) * ph["100"]
    nu = d * np.conj(ph["101"])
    epsilon = math.sqrt(max(0.0, 1.0 - a * a - b * b))
    if mu == 0.0:
        # branches 110 and 111 vanish; any normalized (xi, tau) will do
        xi, tau = 1.0 + 0j, 0.0j
    else:
        xi = c / mu * np.conj(ph["110"])
        tau = e / mu * np.conj(ph["111"])
    params = ProtocolParams(
        kappa=complex(kappa), delta=complex(delta), nu=complex(nu), mu=complex(mu),
        epsilon=complex(epsilon), xi=complex(xi), tau=complex(tau),
    )
    params.check()
    return params


@dataclass(frozen=True)
class PostSelectionResult:
    qubit_state: ThreeQubitState
    success_probability: float
    raw_terms: tuple  # ((modes, amplitude), ...) in ascending mode order

    def to_dict(self) -> dict:
        return {
            "state": self.qubit_state.to_dict(),
            "probability": self.success_probability,
            "terms": [
                {"modes": list(modes), "amp": [float(amp.real), float(amp.imag)]}
                for modes, amp in self.raw_terms
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> "PostSelectionResult":
        terms = tuple(
            (tuple(t["modes"]), complex(t["amp"][0], t["amp"][1])) for t in data["terms"]
        )
        return cls(ThreeQubitState.from_dict(data["state"]), float(data["probability"]), terms)


def _qubit_index(mono: tuple[int, ...]) -> int | None:
    """Basis index for a monomial with one particle per dual-rail pair."""
    if len(mono) != 3:
        return None
    idx = 0
    for mode, (zero, one) in zip(mono, ifm.GROUPING.dual_rail):
        if mode == zero:
            idx = 2 * idx
        elif mode == one:
            idx = 2 * idx + 1
        else:
            return None
    return idx


def _passes(mono: tuple[int, ...]) -> bool:
    occ = fa.monomial_to_occupation(mono)
    dropped_empty = all(occ[m - 1] == 0 for m in ifm.GROUPING.dropped_modes)
    one_each = all(occ[p0 - 1] + occ[p1 - 1] == 1 for p0, p1 in ifm.GROUPING.dual_rail)
    # with three particles, one per pair forces the other modes empty;
    # the converse fails (e.g. two particles in one pair)
    if one_each and not dropped_empty:
        raise AssertionError(f"inconsistent occupation {mono}")
    return one_each and dropped_empty


def post_select(final: OperatorPolynomial) -> PostSelectionResult:
    """Keep one particle in each dual-rail pair and read out the qubits."""
    amps = np.zeros(8, dtype=complex)
    kept = []
    for mono, amp in final.items():
        if not _passes(mono):
            continue
        idx = _qubit_index(mono)
        amps[idx] = amp
        kept.append((mono, amp))
    prob = float(np.sum(np.abs(amps) ** 2))
    if prob == 0.0:
        raise RuntimeError("no branch survived post-selection")
    state = ThreeQubitState(amps / math.sqrt(prob))
    return PostSelectionResult(state, prob, tuple(kept))


def evolve(
    params: ProtocolParams,
    statistics: ExchangeStatistics = BOSONS,
    extra_stages=(),
) -> OperatorPolynomial:
    """Push ``a†_1 a†_6 a†_8|Ω⟩`` through the circuit stage by stage."""
    circuit = ifm.build_circuit(params)
    state = fa.product_state(INPUT_MODES, statistics)
    for _, T in circuit.stages():
        state = fa.substitute_modes(state, T)
    for T in extra_stages:
        state = fa.substitute_modes(state, T)
    return state


def run_circuit(params: ProtocolParams, statistics: ExchangeStatistics = BOSONS) -> PostSelectionResult:
    return post_select(evolve(params, statistics))


def run(
    canonical: CanonicalParams,
    statistics: ExchangeStatistics = BOSONS,
    compensate: bool = True,
) -> PostSelectionResult:
    """Prepare the canonical core (local unitaries are ignored here)."""
    return run_circuit(solve_params(canonical, statistics, compensate), statistics)


def prepare(
    target: ThreeQubitState,
    statistics: ExchangeStatistics = BOSONS,
    compensate: bool = True,
) -> tuple[PostSelectionResult, tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Prepare an arbitrary state: canonical core plus optical local stage."""
    canonical = decompose(target)
    params = solve_params(canonical, statistics, compensate)
    final = evolve(params, statistics, extra_stages=[ifm.local_stage(canonical.locals)])
    return post_select(final), canonical.locals


def oracle_post_selection(params: ProtocolParams, statistics: ExchangeStatistics) -> PostSelectionResult:
    """Same post-selected branches computed from permanents/determinants."""
    T = ifm.build_circuit(params).total()
    source = fa.monomial_to_occupation(INPUT_MODES)
    amps = np.zeros(8, dtype=complex)
    kept = []
    for idx in range(8):
        bits = [(idx >> 2) & 1, (idx >> 1) & 1, idx & 1]
        mono = tuple(pair[bit] for pair, bit in zip(ifm.GROUPING.dual_rail, bits))
        amp = fa.transition_amplitude_oracle(source, fa.monomial_to_occupation(mono), T, statistics)
        if abs(amp) >= fa.PRUNE_TOL:
            amps[idx] = amp
            kept.append((mono, amp))
    prob = float(np.sum(np.abs(amps) ** 2))
    return PostSelectionResult(ThreeQubitState(amps / math.sqrt(prob)), prob, tuple(kept))
