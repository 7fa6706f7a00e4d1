import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize

from notouch import schmidt_canonical as sc
from notouch.schmidt_canonical import CanonicalParams, ThreeQubitState, decompose, reconstruct

FORBIDDEN = [1, 2, 3]  # |001>, |010>, |011>
# seed 0, pinned after the first run of random_state
SEED0 = np.array([
    0.03422154 - 0.19154427j, -0.0359566 - 0.34442531j,
    0.1743117 - 0.16964427j, 0.02855195 + 0.0112482j,
    -0.14579972 - 0.6328322j, 0.09841977 - 0.05955122j,
    0.35492572 - 0.33911489j, 0.25777866 - 0.19931021j,
])


def assert_canonical(p: CanonicalParams):
    assert np.all(p.coefficients >= 0)
    assert 0 <= p.phi <= math.pi
    assert abs(np.sum(p.coefficients**2) - 1) < 1e-10
    core = p.core()
    assert np.all(np.abs(core[FORBIDDEN]) < 1e-10)


def round_trip_infidelity(state):
    p = decompose(state)
    assert_canonical(p)
    return 1 - state.fidelity(reconstruct(p))


def edge_states():
    bell = np.zeros(4, complex)
    bell[[0, 3]] = 1 / math.sqrt(2)
    zero = np.array([1, 0])
    return {
        "000": ThreeQubitState.basis("000"),
        "111": ThreeQubitState.basis("111"),
        "ghz": sc.ghz_state(),
        "w": sc.w_state(),
        "product": sc.product_state([0.3, 1 - 2j], [1j, 0.4], [2, -1 + 1j]),
        "bell_0": ThreeQubitState(np.kron(bell, zero)),
        "0_bell": ThreeQubitState(np.kron(zero, bell)),
        "bell_13": ThreeQubitState.from_unnormalized([1, 0, 0, 0, 0, 1, 0, 0]),
        "1_product": sc.product_state([0, 1], [1, 1], [1, 2j]),
    }


def test_state_requires_normalization():
    with pytest.raises(ValueError):
        ThreeQubitState(np.ones(8))
    with pytest.raises(ValueError):
        ThreeQubitState(np.ones(4) / 2)


def test_random_state_regression():
    np.testing.assert_allclose(sc.random_state(0).amplitudes, SEED0, atol=1e-8)


def test_random_state_deterministic_and_normalized():
    for seed in range(50):
        s = sc.random_state(seed)
        assert abs(np.linalg.norm(s.amplitudes) - 1) < 1e-12
        assert s.amplitudes.tobytes() == sc.random_state(seed).amplitudes.tobytes()
    assert sc.random_state(1).fidelity(sc.random_state(2)) < 1 - 1e-6


def test_ghz_is_already_canonical():
    p = decompose(sc.ghz_state())
    assert p.a == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    assert p.e == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    assert max(p.b, p.c, p.d) < 1e-12
    for L in p.locals:
        np.testing.assert_allclose(L, np.eye(2), atol=1e-12)


def test_basis_state():
    p = decompose(ThreeQubitState.basis("000"))
    assert p.a == pytest.approx(1, abs=1e-12)
    assert max(p.b, p.c, p.d, p.e) < 1e-12


# W-state canonical values, pinned from the optimization oracle below
W_CANONICAL = (1 / math.sqrt(3), 0.0, 1 / math.sqrt(3), 1 / math.sqrt(3), 0.0)


def test_w_state_pinned():
    p = decompose(sc.w_state())
    np.testing.assert_allclose(p.coefficients, W_CANONICAL, atol=1e-10)
    assert p.phi == 0.0


def _su2(x):
    a, b, c = x
    return np.array([
        [np.cos(a) * np.exp(1j * b), np.sin(a) * np.exp(1j * c)],
        [-np.sin(a) * np.exp(-1j * c), np.cos(a) * np.exp(-1j * b)],
    ])


def test_w_state_optimization_oracle():
    """Search local unitaries that clear |001>, |010>, |011> without the det-quadratic."""
    w = sc.w_state().amplitudes

    def rotated(x):
        return np.kron(np.kron(_su2(x[:3]), _su2(x[3:6])), _su2(x[6:])) @ w

    def loss(x):
        return float(np.sum(np.abs(rotated(x)[FORBIDDEN]) ** 2))

    rng = np.random.default_rng(0)
    found = []
    for _ in range(8):
        res = minimize(loss, rng.uniform(0, 2 * np.pi, 9), method="BFGS", options={"gtol": 1e-14})
        if res.fun < 1e-14:
            v = rotated(res.x)
            found.append(np.abs(v[[0, 4, 6, 5, 7]]))
    assert found
    for mags in found:
        np.testing.assert_allclose(mags, W_CANONICAL, atol=1e-5)


@pytest.mark.parametrize("name", list(edge_states()))
def test_edge_round_trip(name):
    assert round_trip_infidelity(edge_states()[name]) < 1e-9


def test_random_round_trip():
    worst = max(round_trip_infidelity(sc.random_state(s)) for s in range(1000))
    assert worst < 1e-9


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.floats(-1, 1), st.floats(-1, 1)), min_size=8, max_size=8))
def test_round_trip_property(pairs):
    amps = np.array([complex(r, i) for r, i in pairs])
    if np.linalg.norm(amps) < 1e-3:
        return
    assert round_trip_infidelity(ThreeQubitState.from_unnormalized(amps)) < 1e-9


def test_reconstruct_simple():
    np.testing.assert_allclose(
        reconstruct(CanonicalParams(1, 0, 0, 0, 0, 0)).amplitudes, np.eye(8)[0], atol=1e-15
    )
    r = math.sqrt(0.5)
    np.testing.assert_allclose(
        reconstruct(CanonicalParams(r, 0, 0, 0, r, 0)).amplitudes, sc.ghz_state().amplitudes
    )


def test_reconstruct_checks_constraints():
    with pytest.raises(ValueError):
        reconstruct(CanonicalParams(1, 1, 0, 0, 0, 0))
    with pytest.raises(ValueError):
        reconstruct(CanonicalParams(1, 0, 0, 0, 0, 4.0))
    with pytest.raises(ValueError):
        reconstruct(CanonicalParams(1, 0, 0, 0, 0, 0, (np.eye(2), 2 * np.eye(2), np.eye(2))))


def test_decompose_rejects_unnormalized():
    with pytest.raises(ValueError):
        decompose(np.ones(8))


def test_phase_lands_in_range_for_conjugate_pairs():
    # a state and its complex conjugate usually need different roots
    for seed in range(200):
        s = sc.random_state(seed)
        for state in (s, ThreeQubitState(np.conj(s.amplitudes))):
            p = decompose(state)
            assert 0 <= p.phi <= math.pi
            assert 1 - state.fidelity(reconstruct(p)) < 1e-9


def test_canonical_form_invariant_under_local_unitaries():
    rng = np.random.default_rng(4)
    for seed in range(30):
        s = sc.random_state(seed)
        locs = [_su2(rng.uniform(0, 2 * np.pi, 3)) for _ in range(3)]
        moved = ThreeQubitState(sc.local_product(locs) @ s.amplitudes)
        p, q = decompose(s), decompose(moved)
        np.testing.assert_allclose(p.coefficients, q.coefficients, atol=1e-8)
        assert abs(p.phi - q.phi) < 1e-7


def test_json_round_trip():
    s = sc.random_state(3)
    assert ThreeQubitState.from_json(s.to_json()).amplitudes.tobytes() == s.amplitudes.tobytes()
    p = decompose(s)
    q = CanonicalParams.from_dict(json.loads(p.to_json()))
    assert 1 - s.fidelity(reconstruct(q)) < 1e-12
    assert set(json.loads(p.to_json())) == {"a", "b", "c", "d", "e", "phi", "locals"}
