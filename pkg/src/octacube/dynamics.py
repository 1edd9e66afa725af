"""Event-driven hard-core dynamics of the four particles between two walls.

Natural units m3 = L = 1 by default. Momenta are p_i = m_i v_i.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable

import numpy as np

from .invariants import classical_I
from .jacobi import CANONICAL_MASSES, canonical_transforms
from .roots import Group, f4_group

MASSES = np.array(CANONICAL_MASSES[1:5])
SEPARATION_GUARD = 1e-13

# left-to-right order; simultaneous contacts resolve to the leftmost
KINDS = ("left-wall", "pair-12", "pair-23", "pair-34", "right-wall")


class DynamicsError(RuntimeError):
    pass


@dataclass(frozen=True)
class ParticleState:
    x: np.ndarray
    p: np.ndarray
    t: float = 0.0
    L: float = 1.0
    masses: np.ndarray = field(default_factory=lambda: MASSES.copy())

    @property
    def v(self) -> np.ndarray:
        return self.p / self.masses

    def kinetic_energy(self) -> float:
        return float(np.sum(self.p**2 / (2 * self.masses)))

    def ordered(self, tol: float = 1e-12) -> bool:
        t = tol * self.L
        x = self.x
        return bool(x[0] >= -self.L - t and x[3] <= t and np.all(np.diff(x) >= -t))


@dataclass(frozen=True)
class Event:
    time: float  # measured from the current state
    kind: str

    @property
    def pair(self) -> tuple[int, int] | None:
        if self.kind.startswith("pair-"):
            i = int(self.kind[5]) - 1
            return (i, i + 1)
        return None


def next_event(state: ParticleState) -> Event:
    """Earliest contact under free flight among the five candidates."""
    x, v, L = state.x, state.v, state.L
    times = np.full(5, math.inf)
    if v[0] < 0:
        times[0] = max(x[0] + L, 0.0) / -v[0]
    for i in range(3):
        closing = v[i] - v[i + 1]
        if closing > 0:
            times[i + 1] = max(x[i + 1] - x[i], 0.0) / closing
    if v[3] > 0:
        times[4] = max(-x[3], 0.0) / v[3]
    t_min = times.min()
    if not math.isfinite(t_min):
        raise DynamicsError("no future contact: state is static or corrupted")
    # ties within the separation guard go to the leftmost contact
    speed = float(np.max(np.abs(v)))
    window = SEPARATION_GUARD * L / speed if speed > 0 else 0.0
    k = int(np.flatnonzero(times <= t_min + window)[0])
    return Event(float(times[k]), KINDS[k])


def collision_matrix(kind: str, masses=MASSES) -> np.ndarray:
    """Linear map on particle momenta applied by a contact of this kind."""
    C = np.eye(4)
    if kind == "left-wall":
        C[0, 0] = -1.0
    elif kind == "right-wall":
        C[3, 3] = -1.0
    elif kind.startswith("pair-"):
        i = int(kind[5]) - 1
        j = i + 1
        mi, mj = masses[i], masses[j]
        s = mi + mj
        # p_i' = ((mi - mj) p_i + 2 mi p_j) / (mi + mj), and symmetrically
        C[i, i] = (mi - mj) / s
        C[i, j] = 2 * mi / s
        C[j, i] = 2 * mj / s
        C[j, j] = (mj - mi) / s
    else:
        raise ValueError(f"unknown event kind {kind!r}")
    return C


def z_frame_map(kind: str) -> np.ndarray:
    """The collision map carried to z-frame momenta: T^-T C T^T."""
    tf = canonical_transforms()
    return tf.T_zx_inv_T @ collision_matrix(kind) @ tf.T_zx.T


def advance(state: ParticleState, dt: float) -> ParticleState:
    return replace(state, x=state.x + state.v * dt, t=state.t + dt)


def collide(state: ParticleState, event: Event, tol: float = 1e-9) -> ParticleState:
    """Apply the contact; ``state`` must already sit at the event time."""
    x = state.x.copy()
    L = state.L
    pair = event.pair
    if event.kind == "left-wall":
        if abs(x[0] + L) > tol * L:
            raise DynamicsError("left-wall event but particle 1 is not at the wall")
        x[0] = -L
    elif event.kind == "right-wall":
        if abs(x[3]) > tol * L:
            raise DynamicsError("right-wall event but particle 4 is not at the wall")
        x[3] = 0.0
    elif pair is not None:
        i, j = pair
        if abs(x[j] - x[i]) > tol * L:
            raise DynamicsError(f"{event.kind} event but the particles are not in contact")
        x[i] = x[j] = 0.5 * (x[i] + x[j])
    else:
        raise DynamicsError(f"unknown event kind {event.kind!r}")
    p = collision_matrix(event.kind, state.masses) @ state.p
    return replace(state, x=x, p=p)


def invariants_of(state: ParticleState) -> np.ndarray:
    return np.array([classical_I(M, state.p) for M in range(1, 5)])


@dataclass
class RunSummary:
    n_events: int
    t_final: float
    final_state: ParticleState
    max_drift: np.ndarray  # relative drift of I_1..I_4
    max_energy_drift: float
    max_step_drift: np.ndarray  # worst single-event change of I_1..I_4, relative
    ordering_ok: bool
    event_counts: dict
    times: list = field(default_factory=list)
    kinds: list = field(default_factory=list)
    trace: list = field(default_factory=list)


Observer = Callable[[ParticleState, Event], None]


def run(
    state: ParticleState, n_events: int, observers: Iterable[Observer] = (), record_trace: bool = False
) -> RunSummary:
    """Advance through ``n_events`` contacts, tracking the four invariants."""
    if n_events < 1:
        raise ValueError("n_events must be at least 1")
    I0 = invariants_of(state)
    E0 = state.kinetic_energy()
    drift = np.zeros(4)
    step = np.zeros(4)
    e_drift = 0.0
    ordering_ok = state.ordered()
    counts = {k: 0 for k in KINDS}
    times, kinds, trace = [], [], []
    prev = I0
    for _ in range(n_events):
        ev = next_event(state)
        state = collide(advance(state, ev.time), ev)
        I = invariants_of(state)
        drift = np.maximum(drift, np.abs(I - I0) / np.abs(I0))
        step = np.maximum(step, np.abs(I - prev) / np.abs(prev))
        prev = I
        e_drift = max(e_drift, abs(state.kinetic_energy() - E0) / E0)
        ordering_ok &= state.ordered()
        counts[ev.kind] += 1
        times.append(ev.time)
        kinds.append(ev.kind)
        if record_trace:
            trace.append((state.t, ev.kind, *state.x, *state.p, *I))
        for obs in observers:
            obs(state, ev)
    return RunSummary(n_events, state.t, state, drift, e_drift, step, ordering_ok, counts, times, kinds, trace)


def random_state(seed: int, L: float = 1.0, energy: float = 1.0) -> ParticleState:
    """Uniform ordered positions, isotropic momenta scaled to a kinetic energy."""
    rng = np.random.Generator(np.random.Philox(seed))
    x = -L + L * np.sort(rng.random(4))
    v = rng.normal(size=4) / np.sqrt(MASSES)
    p = MASSES * v
    st = ParticleState(x, p, 0.0, L)
    p = p * math.sqrt(energy / st.kinetic_energy())
    return ParticleState(x, p, 0.0, L)


def match_group_element(kind: str, group: Group | None = None, tol: float = 1e-10) -> int | None:
    return (group or f4_group()).match(z_frame_map(kind), tol)


TRACE_HEADER = ["t", "event_kind", "x1", "x2", "x3", "x4", "p1", "p2", "p3", "p4", "I1", "I2", "I3", "I4"]
