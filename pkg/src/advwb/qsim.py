"""Exact small-dimension simulator for the phase-oracle query model.

An algorithm is a sequence of unitaries interleaved with an
input-dependent oracle that flips the sign of basis state |i, z> when
the i-th input variable is 1 (the i = 0 states are left alone).  The
simulator evolves every relevant input's state vector, measures the
designated output bit, and tracks the weighted sum of pairwise inner
products that any valid weight scheme guarantees can only shrink
slowly: each query moves it by at most 2 * v_max * W_0, and a
low-error algorithm must finish with it below 2 sqrt(eps(1-eps)) * W_0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .adversary import loads
from .weights import ExactWeight

DIMENSION_CAP = 64
INPUT_CAP = 4096
UNITARY_TOL = 1e-9
CHECK_TOL = 1e-9


class QsimError(ValueError):
    """Bad algorithm data: dimensions, unitarity, or cap violations."""


class AlgorithmErrorTooLarge(QsimError):
    """The algorithm misses the allowed error on some inputs.

    Raised by the final-bound check when its precondition fails; carries
    the offending inputs so the caller can report them.
    """

    def __init__(self, bad_inputs: list[tuple[int, float]], eps: float):
        self.bad_inputs = bad_inputs
        self.eps = eps
        shown = ", ".join(f"x={x} err={e:.6f}" for x, e in bad_inputs[:8])
        more = "" if len(bad_inputs) <= 8 else f" (+{len(bad_inputs) - 8} more)"
        super().__init__(
            f"algorithm exceeds error {eps} on {len(bad_inputs)} inputs: {shown}{more}"
        )


def _default_selector(i: int, z: int) -> bool:
    """Accept when the rightmost bit of the work label is 1."""
    return z % 2 == 1


@dataclass(frozen=True, eq=False)
class QueryAlgorithm:
    """T-query algorithm: unitaries U_0..U_T on the (n+1)*work space.

    Basis states are |i, z> with query label i in 0..n and work label
    z in 0..work-1, laid out as index i*work + z.  The selector marks
    accepting basis labels; by default the rightmost bit of z.
    """

    n: int
    unitaries: tuple[np.ndarray, ...]
    work: int = 2
    selector: object = _default_selector
    seed: int | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise QsimError(f"need n >= 1, got {self.n}")
        if self.work < 1:
            raise QsimError(f"need work >= 1, got {self.work}")
        dim = self.dimension
        if dim > DIMENSION_CAP:
            raise QsimError(f"dimension {dim} exceeds cap {DIMENSION_CAP}")
        if not self.unitaries:
            raise QsimError("need at least one unitary")
        mats = []
        for t, u in enumerate(self.unitaries):
            m = np.asarray(u, dtype=np.complex128)
            if m.shape != (dim, dim):
                raise QsimError(
                    f"unitary {t} has shape {m.shape}, expected {(dim, dim)}"
                )
            defect = np.abs(m.conj().T @ m - np.eye(dim)).max()
            if defect > UNITARY_TOL:
                raise QsimError(
                    f"matrix {t} is not unitary (defect {defect:.3e} > {UNITARY_TOL})"
                )
            mats.append(m)
        object.__setattr__(self, "unitaries", tuple(mats))

    @property
    def dimension(self) -> int:
        return (self.n + 1) * self.work

    @property
    def queries(self) -> int:
        return len(self.unitaries) - 1

    def accept_mask(self) -> np.ndarray:
        sel = self.selector
        return np.array(
            [bool(sel(i, z)) for i in range(self.n + 1) for z in range(self.work)]
        )

    def phase_vector(self, x: int) -> np.ndarray:
        """Diagonal of the oracle for input x: -1 on |i, z> with x_i = 1."""
        phases = np.ones(self.dimension)
        for i in range(1, self.n + 1):
            if (x >> (self.n - i)) & 1:
                s = i * self.work
                phases[s : s + self.work] = -1.0
        return phases


def apply_oracle(state: np.ndarray, x: int, n: int, work: int = 2) -> np.ndarray:
    """Flip the sign of every |i, z> amplitude with i >= 1 and x_i = 1."""
    state = np.asarray(state, dtype=np.complex128)
    if state.shape != ((n + 1) * work,):
        raise QsimError(
            f"state has shape {state.shape}, expected {((n + 1) * work,)}"
        )
    phases = np.ones((n + 1) * work)
    for i in range(1, n + 1):
        if (x >> (n - i)) & 1:
            phases[i * work : (i + 1) * work] = -1.0
    return state * phases


def run(alg: QueryAlgorithm, x: int) -> tuple[np.ndarray, float]:
    """Full evolution on input x: final state and acceptance probability."""
    state = np.zeros(alg.dimension, dtype=np.complex128)
    state[0] = 1.0
    phases = alg.phase_vector(x)
    for t, u in enumerate(alg.unitaries):
        state = u @ state
        if t < alg.queries:
            state = state * phases
    p = float(np.sum(np.abs(state[alg.accept_mask()]) ** 2))
    return state, p


@dataclass(frozen=True, eq=False)
class ProgressTrace:
    """Weighted inner-product sums W_0..W_T and their per-step drops."""

    scheme: object
    v_max: object
    values: tuple[float, ...]
    drops: tuple[float, ...]

    @property
    def w0(self) -> float:
        return self.values[0]

    @property
    def final(self) -> float:
        return self.values[-1]


def _evolve_all(alg: QueryAlgorithm, inputs: list[int], workers: int = 1):
    """States of every input after 0..T queries, as one matrix per step.

    Row order follows `inputs`.  Yields T+1 matrices; the t-th holds the
    states right after the t-th oracle call (pairwise inner products are
    unchanged by the unitary that follows, so these determine W_t).
    """
    dim = alg.dimension
    states = np.zeros((len(inputs), dim), dtype=np.complex128)
    states[:, 0] = 1.0
    phases = np.stack([alg.phase_vector(x) for x in inputs])
    yield states.copy()
    for t in range(alg.queries):
        u_t = alg.unitaries[t].T
        if workers > 1 and len(inputs) >= 2 * workers:
            from concurrent.futures import ThreadPoolExecutor

            chunks = np.array_split(np.arange(len(inputs)), workers)
            with ThreadPoolExecutor(max_workers=workers) as pool:
                list(
                    pool.map(
                        lambda idx: states.__setitem__(idx, states[idx] @ u_t),
                        chunks,
                    )
                )
        else:
            states = states @ u_t
        states = states * phases
        yield states.copy()


def progress_trace(alg: QueryAlgorithm, scheme, *, workers: int = 1) -> ProgressTrace:
    """W_t for t = 0..T against the scheme's weighted pair relation."""
    if scheme.f.arity != alg.n:
        raise QsimError(
            f"scheme arity {scheme.f.arity} does not match algorithm n = {alg.n}"
        )
    inputs = sorted(set(scheme.a_side) | set(scheme.b_side))
    if len(inputs) > INPUT_CAP:
        raise QsimError(f"{len(inputs)} inputs exceed the cap {INPUT_CAP}")
    pos = {x: r for r, x in enumerate(inputs)}
    pair_rows = []
    weights = []
    for x, y in scheme.iter_pairs():
        pair_rows.append((pos[x], pos[y]))
        weights.append(float(scheme.weight(x, y)))
    w_arr = np.array(weights)
    xi = np.array([r for r, _ in pair_rows])
    yi = np.array([r for _, r in pair_rows])
    values = []
    for states in _evolve_all(alg, inputs, workers=workers):
        inner = np.abs(np.sum(states[xi].conj() * states[yi], axis=1))
        values.append(float(np.dot(w_arr, inner)))
    report = loads(scheme, keep_maps=False)
    drops = tuple(
        abs(values[t] - values[t - 1]) for t in range(1, len(values))
    )
    return ProgressTrace(
        scheme=scheme, v_max=report.v_max, values=tuple(values), drops=drops
    )


def check_drop_bound(trace: ProgressTrace) -> bool:
    """Every per-query change obeys |W_t - W_(t-1)| <= 2 v_max W_0."""
    limit = 2.0 * float(trace.v_max) * trace.w0 + CHECK_TOL
    return all(d <= limit for d in trace.drops)


def algorithm_errors(alg: QueryAlgorithm, scheme) -> dict[int, float]:
    """Per-input error of the algorithm on the scheme's inputs."""
    table = scheme.f.table
    errors = {}
    for x in sorted(set(scheme.a_side) | set(scheme.b_side)):
        _, p = run(alg, x)
        errors[x] = 1.0 - p if table[x] else p
    return errors


def check_final_bound(alg: QueryAlgorithm, scheme, eps: float) -> bool:
    """W_T <= 2 sqrt(eps(1-eps)) W_0 for an algorithm meeting error eps.

    Raises AlgorithmErrorTooLarge when the algorithm's actual error
    exceeds eps somewhere (the inequality's precondition, not a
    violation of the inequality itself).
    """
    if not 0.0 <= eps < 0.5:
        raise ValueError(f"eps must lie in [0, 1/2), got {eps}")
    errors = algorithm_errors(alg, scheme)
    bad = [(x, e) for x, e in errors.items() if e > eps + CHECK_TOL]
    if bad:
        raise AlgorithmErrorTooLarge(bad, eps)
    trace = progress_trace(alg, scheme)
    limit = 2.0 * float(np.sqrt(eps * (1.0 - eps))) * trace.w0 + CHECK_TOL
    return trace.final <= limit


def query_lower_bound(eps: float, v_max) -> float:
    """Queries any eps-error algorithm needs: (1 - 2 sqrt(eps(1-eps))) / (2 v_max)."""
    if not 0.0 <= eps < 0.5:
        raise ValueError(f"eps must lie in [0, 1/2), got {eps}")
    v = float(v_max) if isinstance(v_max, ExactWeight) else float(v_max)
    return (1.0 - 2.0 * float(np.sqrt(eps * (1.0 - eps)))) / (2.0 * v)


def random_algorithm(
    n: int, queries: int, *, work: int = 2, seed: int | None = None
) -> QueryAlgorithm:
    """Seeded algorithm with Haar-ish unitaries (QR of complex Gaussians)."""
    rng = np.random.default_rng(seed)
    dim = (n + 1) * work
    mats = []
    for _ in range(queries + 1):
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        q, r = np.linalg.qr(g)
        # fix the phase convention so the factorization is unique
        q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
        mats.append(q)
    return QueryAlgorithm(n=n, unitaries=tuple(mats), work=work, seed=seed)


def identity_algorithm(n: int, queries: int, *, work: int = 2) -> QueryAlgorithm:
    """Does nothing: every unitary is the identity."""
    dim = (n + 1) * work
    return QueryAlgorithm(
        n=n, unitaries=tuple(np.eye(dim) for _ in range(queries + 1)), work=work
    )


def parity2_algorithm() -> QueryAlgorithm:
    """One query decides the parity of two bits exactly.

    Splits the start state over the two query labels, queries, and
    recombines so the relative sign lands in the output bit.
    """
    s = 1.0 / np.sqrt(2.0)
    u0 = np.zeros((6, 6))
    u0[2, 0] = u0[4, 0] = s  # |0,0> -> (|1,0> + |2,0>)/sqrt(2)
    u0[2, 2], u0[4, 2] = s, -s
    u0[0, 4] = 1.0
    u0[1, 1] = u0[3, 3] = u0[5, 5] = 1.0
    u1 = np.zeros((6, 6))
    u1[0, 2], u1[1, 2] = s, s  # |1,0> -> (|0,0> + |0,1>)/sqrt(2)
    u1[0, 4], u1[1, 4] = s, -s
    u1[2, 0] = 1.0
    u1[4, 1] = 1.0
    u1[3, 3] = u1[5, 5] = 1.0
    return QueryAlgorithm(n=2, unitaries=(u0, u1), work=2)


def save_algorithm(alg: QueryAlgorithm, path: str | Path) -> None:
    """Write the algorithm as JSON (unitaries as row-major [re, im] pairs)."""
    doc = {
        "n": alg.n,
        "work": alg.work,
        "unitaries": [
            [[float(v.real), float(v.imag)] for v in u.ravel(order="C")]
            for u in alg.unitaries
        ],
    }
    Path(path).write_text(json.dumps(doc))


def load_algorithm(path: str | Path) -> QueryAlgorithm:
    """Read an algorithm from JSON, rejecting non-unitary matrices."""
    doc = json.loads(Path(path).read_text())
    try:
        n = int(doc.get("n", doc.get("N")))
        work = int(doc["work"])
        raw = doc["unitaries"]
    except (KeyError, TypeError) as exc:
        raise QsimError(f"malformed algorithm file {path}: {exc}") from None
    dim = (n + 1) * work
    mats = []
    for t, flat in enumerate(raw):
        if len(flat) != dim * dim:
            raise QsimError(
                f"unitary {t} has {len(flat)} entries, expected {dim * dim}"
            )
        vals = np.array([complex(re, im) for re, im in flat])
        mats.append(vals.reshape(dim, dim))
    return QueryAlgorithm(n=n, unitaries=tuple(mats), work=work)
