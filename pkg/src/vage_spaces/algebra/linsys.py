"""
Matrices over the truncated ring, realizations R(z) = D + z C (I - z A)^{-1} B,
rational-function evaluation and observability.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from src.vage_spaces.errors import (
    DimensionMismatchError, EvaluationDomainError, NotInvertibleError, PreconditionError, WindowError
)
from src.vage_spaces.algebra.series import Series
from src.vage_spaces.monoid.multi_index import MultiIndex, TruncationSpec
from src.vage_spaces.monoid.window import basis_for

logger = logging.getLogger(__name__)

SINGULAR_RATIO = 1e-12
RANK_RATIO = 1e-10
WITNESS_TOLERANCE = 1e-12


def _condition_check(matrix: np.ndarray) -> Optional[float]:
    """Condition number of a square complex matrix, None when it counts as singular."""
    if matrix.shape[0] == 0:
        return 1.0
    singular_values = np.linalg.svd(matrix, compute_uv=False)
    largest, smallest = singular_values[0], singular_values[-1]
    if largest == 0.0 or smallest < SINGULAR_RATIO * largest:
        return None
    return float(largest / smallest)


class RingMatrix:
    """Dense rows x cols grid of Series sharing one window, stored as (rows, cols, size)."""

    __slots__ = ("_window", "_data")

    def __init__(self, window: TruncationSpec, data: np.ndarray):
        size = basis_for(window).size
        values = np.array(data, dtype=np.complex128)
        if values.ndim != 3 or values.shape[2] != size:
            raise DimensionMismatchError(
                f"ring matrix data must have shape (rows, cols, {size}), got {values.shape}"
            )
        values.flags.writeable = False
        self._window = window
        self._data = values

    @classmethod
    def zeros(cls, rows: int, cols: int, window: TruncationSpec) -> "RingMatrix":
        return cls(window, np.zeros((rows, cols, basis_for(window).size), dtype=np.complex128))

    @classmethod
    def identity(cls, n: int, window: TruncationSpec) -> "RingMatrix":
        return cls.constant(np.eye(n), window)

    @classmethod
    def constant(cls, matrix, window: TruncationSpec) -> "RingMatrix":
        """Embed a complex matrix as degree-zero entries."""
        matrix = np.atleast_2d(np.asarray(matrix, dtype=np.complex128))
        data = np.zeros(matrix.shape + (basis_for(window).size,), dtype=np.complex128)
        data[:, :, 0] = matrix
        return cls(window, data)

    @classmethod
    def from_series(cls, grid: Sequence[Sequence[Series]], window: Optional[TruncationSpec] = None,
                    cols: int = 0) -> "RingMatrix":
        """Build from nested rows of Series; empty grids need an explicit window."""
        rows = len(grid)
        if window is None:
            if rows == 0 or not grid[0]:
                raise DimensionMismatchError("cannot infer the window of an empty matrix")
            window = grid[0][0].window
        width = len(grid[0]) if rows else cols
        data = np.zeros((rows, width, basis_for(window).size), dtype=np.complex128)
        for i, row in enumerate(grid):
            if len(row) != width:
                raise DimensionMismatchError(f"row {i} has {len(row)} entries, expected {width}")
            for j, entry in enumerate(row):
                if entry.window != window:
                    raise WindowError(f"entry ({i}, {j}) lives on {entry.window}, expected {window}")
                data[i, j] = entry.coefficients
        return cls(window, data)

    @property
    def window(self) -> TruncationSpec:
        return self._window

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def rows(self) -> int:
        return self._data.shape[0]

    @property
    def cols(self) -> int:
        return self._data.shape[1]

    @property
    def shape(self):
        return self._data.shape[:2]

    def entry(self, i: int, j: int) -> Series:
        return Series(self._window, self._data[i, j])

    def to_grid(self) -> List[List[Series]]:
        return [[self.entry(i, j) for j in range(self.cols)] for i in range(self.rows)]

    def expectation(self) -> np.ndarray:
        """E[M], the entrywise expectation."""
        return np.array(self._data[:, :, 0])

    def _require_window(self, other: "RingMatrix") -> None:
        if self._window != other._window:
            raise WindowError(f"window mismatch: {self._window} vs {other._window}")

    def __add__(self, other: "RingMatrix") -> "RingMatrix":
        return mat_add(self, other)

    def __sub__(self, other: "RingMatrix") -> "RingMatrix":
        return mat_add(self, other.scale(-1.0))

    def __neg__(self) -> "RingMatrix":
        return self.scale(-1.0)

    def __matmul__(self, other: "RingMatrix") -> "RingMatrix":
        return mat_mul(self, other)

    def scale(self, c: complex) -> "RingMatrix":
        return mat_scale(c, self)

    def times_series(self, f: Series) -> "RingMatrix":
        """f * M, entrywise convolution with a ring scalar."""
        if f.window != self._window:
            raise WindowError(f"window mismatch: {f.window} vs {self._window}")
        return RingMatrix(self._window, basis_for(self._window).convolve_stack(f.coefficients, self._data))

    def derive(self, n: int) -> "RingMatrix":
        """Entrywise D_n."""
        data = np.zeros_like(self._data)
        if 1 <= n <= self._window.max_generator:
            sources, targets, multipliers = basis_for(self._window).derivation(n)
            data[:, :, targets] = self._data[:, :, sources] * multipliers
        return RingMatrix(self._window, data)

    def max_abs_difference(self, other: "RingMatrix") -> float:
        self._require_window(other)
        if self.shape != other.shape:
            raise DimensionMismatchError(f"shapes {self.shape} and {other.shape} differ")
        return float(np.max(np.abs(self._data - other._data), initial=0.0))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RingMatrix):
            return NotImplemented
        return (self._window == other._window and self.shape == other.shape
                and self.max_abs_difference(other) <= 1e-14)

    __hash__ = None

    def __repr__(self) -> str:
        return f"RingMatrix({self.rows}x{self.cols}, window={self._window})"


def mat_add(x: RingMatrix, y: RingMatrix) -> RingMatrix:
    x._require_window(y)
    if x.shape != y.shape:
        raise DimensionMismatchError(f"cannot add {x.shape} and {y.shape} matrices")
    return RingMatrix(x.window, x.data + y.data)


def mat_scale(c: complex, x: RingMatrix) -> RingMatrix:
    return RingMatrix(x.window, c * x.data)


def mat_mul(x: RingMatrix, y: RingMatrix) -> RingMatrix:
    """(XY)_ij = sum_l X_il * Y_lj with convolution as the scalar product."""
    x._require_window(y)
    if x.cols != y.rows:
        raise DimensionMismatchError(f"cannot multiply {x.shape} by {y.shape}")
    basis = basis_for(x.window)
    products = x.data[:, :, basis.left][:, :, None, :] * y.data[:, :, basis.right][None, :, :, :]
    return RingMatrix(x.window, basis.reduce_pairs(products.sum(axis=1)))


def hstack(blocks: Sequence[RingMatrix]) -> RingMatrix:
    rows = {block.rows for block in blocks}
    if len(rows) != 1:
        raise DimensionMismatchError(f"horizontal blocks need equal row counts, got {sorted(rows)}")
    _same_window(blocks)
    return RingMatrix(blocks[0].window, np.concatenate([block.data for block in blocks], axis=1))


def vstack(blocks: Sequence[RingMatrix]) -> RingMatrix:
    cols = {block.cols for block in blocks}
    if len(cols) != 1:
        raise DimensionMismatchError(f"vertical blocks need equal column counts, got {sorted(cols)}")
    _same_window(blocks)
    return RingMatrix(blocks[0].window, np.concatenate([block.data for block in blocks], axis=0))


def block_diag(first: RingMatrix, second: RingMatrix) -> RingMatrix:
    first._require_window(second)
    window = first.window
    return vstack([
        hstack([first, RingMatrix.zeros(first.rows, second.cols, window)]),
        hstack([RingMatrix.zeros(second.rows, first.cols, window), second]),
    ])


def _same_window(blocks: Sequence[RingMatrix]) -> None:
    windows = {block.window for block in blocks}
    if len(windows) != 1:
        raise WindowError(f"blocks live on different windows: {sorted(map(str, windows))}")


def mat_invert(m: RingMatrix) -> RingMatrix:
    """
    Exact truncated inverse of a square ring matrix.

    Writes M = E[M](I - K) with E[K] = 0; K^n vanishes on the window for n > N,
    so M^{-1} = (sum_{n <= N} K^n) E[M]^{-1}.

    Raises:
        NotInvertibleError: E[M] is singular (smallest singular value below 1e-12 of the largest)
    """
    if m.rows != m.cols:
        raise DimensionMismatchError(f"only square matrices can be inverted, got {m.shape}")
    n = m.rows
    expectation = m.expectation()
    condition = _condition_check(expectation)
    if condition is None:
        raise NotInvertibleError("E[M] is singular, so M is not invertible")
    logger.debug("inverting %dx%d ring matrix, cond(E[M]) = %.3g", n, n, condition)

    inverse_expectation = RingMatrix.constant(np.linalg.inv(expectation) if n else np.zeros((0, 0)), m.window)
    identity = RingMatrix.identity(n, m.window)
    k = identity - inverse_expectation @ m
    neumann = identity
    for _ in range(m.window.max_degree):
        neumann = identity + k @ neumann
    return neumann @ inverse_expectation


@dataclass(frozen=True)
class Realization:
    """R(z) = D + z C (I - z A)^{-1} B with ring-valued A (n x n), B (n x m), C (p x n), D (p x m)."""
    a: RingMatrix
    b: RingMatrix
    c: RingMatrix
    d: RingMatrix

    def __post_init__(self):
        n = self.a.rows
        if self.a.cols != n:
            raise DimensionMismatchError(f"A must be square, got {self.a.shape}")
        if self.b.rows != n or self.c.cols != n:
            raise DimensionMismatchError(
                f"B needs {n} rows and C needs {n} columns, got B {self.b.shape}, C {self.c.shape}"
            )
        if self.d.shape != (self.c.rows, self.b.cols):
            raise DimensionMismatchError(
                f"D must be {self.c.rows}x{self.b.cols}, got {self.d.shape}"
            )
        _same_window([self.a, self.b, self.c, self.d])

    @property
    def window(self) -> TruncationSpec:
        return self.a.window

    @property
    def state_dim(self) -> int:
        return self.a.rows

    @property
    def inputs(self) -> int:
        return self.b.cols

    @property
    def outputs(self) -> int:
        return self.c.rows

    @classmethod
    def constant(cls, d: RingMatrix) -> "Realization":
        window = d.window
        return cls(RingMatrix.zeros(0, 0, window), RingMatrix.zeros(0, d.cols, window),
                   RingMatrix.zeros(d.rows, 0, window), d)


def realization_sum(r1: Realization, r2: Realization) -> Realization:
    """R1 + R2: block-diagonal state, stacked B, concatenated C, D1 + D2."""
    if (r1.outputs, r1.inputs) != (r2.outputs, r2.inputs):
        raise DimensionMismatchError("sum needs realizations with equal input and output counts")
    return Realization(
        block_diag(r1.a, r2.a), vstack([r1.b, r2.b]), hstack([r1.c, r2.c]), r1.d + r2.d
    )


def realization_product(r1: Realization, r2: Realization) -> Realization:
    """R1 R2 with A = [[A1, B1 C2], [0, A2]], B = [B1 D2; B2], C = [C1, D1 C2], D = D1 D2."""
    if r1.inputs != r2.outputs:
        raise DimensionMismatchError(
            f"product needs R1 inputs == R2 outputs, got {r1.inputs} and {r2.outputs}"
        )
    window = r1.window
    a = vstack([
        hstack([r1.a, r1.b @ r2.c]),
        hstack([RingMatrix.zeros(r2.state_dim, r1.state_dim, window), r2.a]),
    ])
    b = vstack([r1.b @ r2.d, r2.b])
    c = hstack([r1.c, r1.d @ r2.c])
    return Realization(a, b, c, r1.d @ r2.d)


def realization_concat_col(r1: Realization, r2: Realization) -> Realization:
    """[R1; R2], sharing the inputs."""
    if r1.inputs != r2.inputs:
        raise DimensionMismatchError("column concatenation needs equal input counts")
    return Realization(
        block_diag(r1.a, r2.a), vstack([r1.b, r2.b]), block_diag(r1.c, r2.c), vstack([r1.d, r2.d])
    )


def realization_concat_row(r1: Realization, r2: Realization) -> Realization:
    """[R1, R2], sharing the outputs."""
    if r1.outputs != r2.outputs:
        raise DimensionMismatchError("row concatenation needs equal output counts")
    return Realization(
        block_diag(r1.a, r2.a), block_diag(r1.b, r2.b), hstack([r1.c, r2.c]), hstack([r1.d, r2.d])
    )


def realization_inverse(r: Realization) -> Realization:
    """
    Pointwise inverse: state matrix A - B D^{-1} C, B D^{-1}, -D^{-1} C, D^{-1}.

    Raises:
        NotInvertibleError: E[D] is singular
    """
    if r.d.rows != r.d.cols:
        raise DimensionMismatchError(f"inverse needs a square D, got {r.d.shape}")
    d_inverse = mat_invert(r.d)
    return Realization(
        r.a - r.b @ d_inverse @ r.c, r.b @ d_inverse, -(d_inverse @ r.c), d_inverse
    )


def eval_realization(r: Realization, f: Series) -> RingMatrix:
    """
    D + f C (I - f A)^{-1} B.

    Raises:
        EvaluationDomainError: I - E[f] E[A] is singular
    """
    if f.window != r.window:
        raise WindowError(f"window mismatch: {f.window} vs {r.window}")
    if r.state_dim == 0:
        return r.d
    n = r.state_dim
    if _condition_check(np.eye(n) - f.expectation() * r.a.expectation()) is None:
        raise EvaluationDomainError(
            f"I - E[f] E[A] is singular at E[f] = {f.expectation()}, outside the evaluation domain"
        )
    resolvent = mat_invert(RingMatrix.identity(n, r.window) - r.a.times_series(f))
    return r.d + (r.c @ resolvent @ r.b).times_series(f)


def eval_rational_pq(p: Sequence[RingMatrix], q: Sequence[Series], f: Series) -> RingMatrix:
    """
    p(f) q(f)^{-1} with Horner evaluation of both polynomials.

    Raises:
        EvaluationDomainError: sum_m E[q_m] E[f]^m == 0
    """
    if not p or not q:
        raise PreconditionError("numerator and denominator need at least one coefficient")
    f0 = f.expectation()
    denominator = sum(coefficient.expectation() * f0 ** m for m, coefficient in enumerate(q))
    if abs(denominator) <= 1e-300:
        raise EvaluationDomainError("sum_m E[q_m] E[f]^m vanishes, q(f) is not invertible")

    numerator = RingMatrix.zeros(p[0].rows, p[0].cols, f.window)
    for coefficient in reversed(list(p)):
        numerator = numerator.times_series(f) + coefficient
    denominator_series = Series.zero(f.window)
    for coefficient in reversed(list(q)):
        denominator_series = denominator_series.convolve(f) + coefficient
    return numerator.times_series(denominator_series.invert())


def _rank(matrix: np.ndarray) -> int:
    if matrix.size == 0:
        return 0
    singular_values = np.linalg.svd(matrix, compute_uv=False)
    if singular_values[0] == 0.0:
        return 0
    return int(np.sum(singular_values > RANK_RATIO * singular_values[0]))


def observability_matrix(ce: np.ndarray, ae: np.ndarray) -> np.ndarray:
    """[Ce; Ce Ae; ...; Ce Ae^{N-1}]."""
    ce = np.atleast_2d(np.asarray(ce, dtype=np.complex128))
    ae = np.atleast_2d(np.asarray(ae, dtype=np.complex128))
    n = ae.shape[0]
    if ae.shape != (n, n) or ce.shape[1] != n:
        raise DimensionMismatchError(f"Ce {ce.shape} and Ae {ae.shape} do not fit together")
    blocks, current = [], ce
    for _ in range(n):
        blocks.append(current)
        current = current @ ae
    return np.vstack(blocks) if blocks else np.zeros((0, 0), dtype=np.complex128)


def observability_rank(ce: np.ndarray, ae: np.ndarray) -> int:
    """Rank of the observability matrix, singular values below 1e-10 of the largest dropped."""
    return _rank(observability_matrix(ce, ae))


def kalman_observable(ce: np.ndarray, ae: np.ndarray) -> bool:
    """Kalman rank test: the observability matrix has rank N."""
    ae = np.atleast_2d(np.asarray(ae, dtype=np.complex128))
    return observability_rank(ce, ae) == ae.shape[0]


@dataclass
class WitnessHit:
    trial: int
    power: int
    output: int
    alpha: MultiIndex
    value: complex


@dataclass
class ObservabilityReport:
    status: str
    seed: int
    trials: int
    horizon: int
    expectation_observable: bool
    hits: List[WitnessHit] = field(default_factory=list)
    zero_inputs: int = 0
    missed: int = 0


def observability_witness(r: Realization, trials: int, seed: int,
                          inputs: Optional[Sequence[RingMatrix]] = None) -> ObservabilityReport:
    """
    Certify C A^k f != 0 for nonzero state vectors f.

    For each trial a random state vector (or the next of ``inputs``) is pushed
    through A until some coefficient of C A^k f is nonzero, with k below
    N * (window size). The status is INCONCLUSIVE when the expectation pair
    fails the Kalman test and VACUOUS when every input is zero.
    """
    basis = basis_for(r.window)
    horizon = max(1, r.state_dim * basis.size)
    observable = kalman_observable(r.c.expectation(), r.a.expectation())
    report = ObservabilityReport("OK", seed, trials, horizon, observable)
    if not observable:
        logger.warning("expectation pair (E[C], E[A]) is not observable; witness is inconclusive")
        report.status = "INCONCLUSIVE"
        return report

    rng = np.random.default_rng(seed)
    samples = list(inputs) if inputs is not None else [
        _random_state(rng, r.state_dim, r.window) for _ in range(trials)
    ]
    report.trials = len(samples)
    for trial, state in enumerate(samples):
        scale = float(np.max(np.abs(state.data), initial=0.0))
        if scale == 0.0:
            report.zero_inputs += 1
            continue
        hit = _first_nonzero_output(r, state, horizon, WITNESS_TOLERANCE * scale)
        if hit is None:
            report.missed += 1
            continue
        power, output, position, value = hit
        report.hits.append(WitnessHit(trial, power, output, basis.indices[position], value))

    if report.zero_inputs == report.trials:
        report.status = "VACUOUS"
    elif report.missed:
        logger.warning("%d of %d inputs produced no nonzero output coefficient", report.missed, report.trials)
        report.status = "NOT_FOUND"
    return report


def _random_state(rng: np.random.Generator, n: int, window: TruncationSpec) -> RingMatrix:
    size = basis_for(window).size
    radius = np.sqrt(rng.uniform(0.0, 1.0, (n, 1, size)))
    angle = rng.uniform(0.0, 2.0 * np.pi, (n, 1, size))
    return RingMatrix(window, radius * np.exp(1j * angle))


def _first_nonzero_output(r: Realization, state: RingMatrix, horizon: int, tolerance: float):
    current = state
    for power in range(horizon):
        output = (r.c @ current).data
        above = np.argwhere(np.abs(output) > tolerance)
        if above.size:
            # first output row, then first graded position inside it
            row, _, position = (int(v) for v in min(above.tolist(), key=lambda item: (item[0], item[2])))
            return power, row, position, complex(output[row, 0, position])
        current = r.a @ current
    return None


def impulse_response(r: Realization, count: int) -> List[RingMatrix]:
    """Markov parameters h_0 = D, h_k = C A^{k-1} B for k < count."""
    if count < 0:
        raise PreconditionError(f"impulse response length must be >= 0, got {count}")
    response = [r.d][:count]
    current = r.b
    for _ in range(1, count):
        response.append(r.c @ current)
        current = r.a @ current
    return response


def simulate(h: Sequence[RingMatrix], u: Sequence[RingMatrix]) -> List[RingMatrix]:
    """y_n = sum_{k <= n} h_k u_{n-k}, with terms beyond the impulse response dropped."""
    if not h:
        raise PreconditionError("simulation needs at least one Markov parameter")
    outputs = []
    for n in range(len(u)):
        total = None
        for k in range(min(n + 1, len(h))):
            term = h[k] @ u[n - k]
            total = term if total is None else total + term
        outputs.append(total)
    return outputs
