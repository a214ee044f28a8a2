"""Reconstruction of a signal ray from magnitude measurements.

Real case: the coefficient vector of any preimage is a sign flip of the
measured magnitudes, so a depth-first search over sign assignments with
least-squares feasibility pruning enumerates every preimage ray exactly.
The prefix residual is monotone in the depth, so pruning at the final
acceptance threshold discards no solution and the search matches
exhaustive enumeration.

Complex case: the phases live on a torus and no finite enumeration exists;
an alternating projection heuristic (project onto the coefficient range,
then restore the measured magnitudes) is run from random phase starts.
Returned results are always re-verified against the measurements.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field

import numpy as np

from .frames import COMPLEX, REAL, Frame, analysis_matrix, coefficient_range, encode_vector
from .linalg import DEFAULT_TOL, Tolerance, least_squares
from .magnitude import canonical_ray, magnitude_map, ray_equal

__all__ = [
    "STATUS_UNIQUE",
    "STATUS_AMBIGUOUS",
    "STATUS_NO_SOLUTION",
    "STATUS_HEURISTIC_SUCCESS",
    "STATUS_HEURISTIC_FAIL",
    "ReconstructionResult",
    "SearchBudgetExceeded",
    "reconstruct_real",
    "enumerate_ambiguities",
    "error_reduction",
    "reconstruct_complex",
    "result_to_dict",
]

STATUS_UNIQUE = "unique"
STATUS_AMBIGUOUS = "ambiguous"
STATUS_NO_SOLUTION = "no_solution"
STATUS_HEURISTIC_SUCCESS = "heuristic_success"
STATUS_HEURISTIC_FAIL = "heuristic_fail"


@dataclass
class ReconstructionResult:
    """Outcome of a reconstruction attempt.

    rays holds canonical ray representatives, each verified to reproduce
    the measurements within residual_eps * (1 + ||a||); residuals holds the
    corresponding measurement residuals. patterns_explored counts search
    nodes evaluated (one prefix least-squares solve each) for the real
    search, and 0 for the complex heuristic. best_residual reports the best
    measurement residual seen (meaningful for heuristic failures, where no
    ray is returned).
    """

    status: str
    rays: list = dataclass_field(default_factory=list)
    residuals: list = dataclass_field(default_factory=list)
    patterns_explored: int = 0
    restarts_used: int = 0
    best_residual: float | None = None


class SearchBudgetExceeded(RuntimeError):
    """Raised when the sign search visits more nodes than allowed; carries
    the partial result found so far."""

    def __init__(self, message: str, partial: ReconstructionResult):
        super().__init__(message)
        self.partial = partial


def _check_magnitudes(frame: Frame, magnitudes) -> np.ndarray:
    a = np.asarray(magnitudes, dtype=np.float64)
    if a.shape != (frame.m,):
        raise ValueError(f"expected {frame.m} magnitudes, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("magnitudes must be finite")
    if np.any(a < 0.0):
        raise ValueError("magnitudes must be nonnegative")
    return a


def _finalize_real(
    frame: Frame,
    a: np.ndarray,
    solutions: list[np.ndarray],
    nodes: int,
    tol: Tolerance,
) -> ReconstructionResult:
    """Canonicalize, verify, deduplicate, and sort the found solutions."""
    threshold = tol.residual_eps * (1.0 + float(np.linalg.norm(a)))
    rays: list[np.ndarray] = []
    residuals: list[float] = []
    for x in solutions:
        r = canonical_ray(x, tol)
        resid = float(np.linalg.norm(magnitude_map(frame, r) - a))
        if resid > threshold:
            continue
        if any(ray_equal(r, kept, tol) for kept in rays):
            continue
        rays.append(r)
        residuals.append(resid)
    order = sorted(range(len(rays)), key=lambda i: tuple(rays[i]))
    rays = [rays[i] for i in order]
    residuals = [residuals[i] for i in order]
    if not rays:
        status = STATUS_NO_SOLUTION
    elif len(rays) == 1:
        status = STATUS_UNIQUE
    else:
        status = STATUS_AMBIGUOUS
    return ReconstructionResult(
        status=status,
        rays=rays,
        residuals=residuals,
        patterns_explored=nodes,
        best_residual=min(residuals) if residuals else None,
    )


def reconstruct_real(
    frame: Frame,
    magnitudes,
    tol: Tolerance = DEFAULT_TOL,
    node_budget: int = 1_000_000,
) -> ReconstructionResult:
    """Enumerate every ray consistent with real magnitude measurements.

    Indices are processed in descending magnitude order. The first index
    with a significant magnitude keeps a fixed + sign (quotienting out the
    global sign); entries at or below residual_eps * ||a|| are treated as
    sign-free and targeted at their measured value with a + sign. A branch
    is pruned as soon as the least-squares residual of its signed prefix
    exceeds residual_eps * (1 + ||a||); the prefix residual only grows with
    depth, so no admissible assignment is lost. Statuses: Unique (one ray),
    Ambiguous (several), NoSolution (measurements inconsistent with the
    frame). Raises SearchBudgetExceeded (with partial findings) if more
    than node_budget nodes are evaluated.
    """
    if frame.field != REAL:
        raise ValueError("reconstruct_real requires a real frame")
    a = _check_magnitudes(frame, magnitudes)
    m = frame.m
    t = analysis_matrix(frame)
    norm_a = float(np.linalg.norm(a))
    threshold = tol.residual_eps * (1.0 + norm_a)

    order = np.argsort(-a, kind="stable")
    t_ord = t[order]
    a_ord = a[order]
    significant = a_ord > tol.residual_eps * norm_a
    first_significant = int(np.argmax(significant)) if significant.any() else None

    nodes = 0
    solutions: list[np.ndarray] = []
    # Stack entries: (depth, signs decided so far). Children are pushed with
    # the - branch first so the + branch is explored first.
    stack: list[tuple[int, tuple[int, ...]]] = [(0, ())]
    while stack:
        depth, signs = stack.pop()
        if depth > 0:
            nodes += 1
            if nodes > node_budget:
                partial = _finalize_real(frame, a, solutions, nodes, tol)
                raise SearchBudgetExceeded(
                    f"sign search exceeded {node_budget} nodes", partial
                )
            target = np.array(signs, dtype=np.float64) * a_ord[:depth]
            sol = least_squares(t_ord[:depth], target, tol)
            if sol.residual > threshold:
                continue
            if depth == m:
                solutions.append(sol.x)
                continue
        if significant[depth] and depth != first_significant:
            stack.append((depth + 1, signs + (-1,)))
        stack.append((depth + 1, signs + (1,)))
    return _finalize_real(frame, a, solutions, nodes, tol)


def enumerate_ambiguities(
    frame: Frame, x, tol: Tolerance = DEFAULT_TOL, node_budget: int = 1_000_000
) -> list[np.ndarray]:
    """All rays sharing the magnitude measurements of x (x's own included)."""
    result = reconstruct_real(frame, magnitude_map(frame, x), tol, node_budget)
    return list(result.rays)


def error_reduction(
    basis: np.ndarray,
    magnitudes: np.ndarray,
    start: np.ndarray,
    max_iters: int,
    tol: Tolerance = DEFAULT_TOL,
    stall_window: int = 30,
) -> tuple[np.ndarray, list[float]]:
    """Alternating projection between the coefficient range and the
    magnitude torus, from a given starting coefficient vector.

    Each sweep projects onto the range (orthonormal basis columns) and then
    rescales every entry to the measured magnitude, keeping entries whose
    modulus is at or below residual_eps unchanged (their phase is not
    determined). The measurement residual of the projected iterate is
    non-increasing; returns the best projected iterate and the residual
    history. Stops early on success or when ``stall_window`` sweeps bring
    no meaningful improvement.
    """
    a = np.asarray(magnitudes, dtype=np.float64)
    threshold = tol.residual_eps * (1.0 + float(np.linalg.norm(a)))
    stall_eps = 1e-12 * (1.0 + float(np.linalg.norm(a)))
    c = np.asarray(start, dtype=np.complex128)
    best_res = np.inf
    best_p = None
    history: list[float] = []
    for _ in range(max_iters):
        p = basis @ (basis.conj().T @ c)
        mags = np.abs(p)
        res = float(np.linalg.norm(mags - a))
        history.append(res)
        if res < best_res:
            best_res = res
            best_p = p
        if res <= threshold:
            break
        if len(history) > stall_window and history[-stall_window - 1] - res < stall_eps:
            break
        safe = np.where(mags > tol.residual_eps, mags, 1.0)
        c = np.where(mags > tol.residual_eps, a * p / safe, p)
    if best_p is None:
        best_p = np.zeros(basis.shape[0], dtype=np.complex128)
    return best_p, history


def reconstruct_complex(
    frame: Frame,
    magnitudes,
    restarts: int = 20,
    max_iters: int = 500,
    seed=0,
    tol: Tolerance = DEFAULT_TOL,
) -> ReconstructionResult:
    """Heuristic ray recovery for complex frames via alternating projection.

    Each restart draws uniform random phases (deterministically from
    (seed, restart index)), runs error reduction, and accepts as soon as
    the measurement residual drops below residual_eps * (1 + ||a||); the
    recovered ray is then re-verified against the measurements. All-zero
    measurements identify the zero ray exactly (Unique). Exhausting every
    restart yields HeuristicFail with the best residual seen; a failure is
    evidence, not proof, that no preimage exists.
    """
    if frame.field != COMPLEX:
        raise ValueError("reconstruct_complex requires a complex frame")
    a = _check_magnitudes(frame, magnitudes)
    norm_a = float(np.linalg.norm(a))
    threshold = tol.residual_eps * (1.0 + norm_a)
    if norm_a <= tol.residual_eps:
        zero = np.zeros(frame.n, dtype=np.complex128)
        return ReconstructionResult(
            status=STATUS_UNIQUE,
            rays=[zero],
            residuals=[norm_a],
            patterns_explored=0,
            restarts_used=0,
            best_residual=norm_a,
        )
    basis = coefficient_range(frame, tol).basis
    t = analysis_matrix(frame)
    best_overall = np.inf
    for attempt in range(restarts):
        rng = np.random.default_rng([seed, attempt])
        phases = rng.uniform(0.0, 2.0 * np.pi, frame.m)
        start = a * np.exp(1j * phases)
        p, history = error_reduction(basis, a, start, max_iters, tol)
        res = min(history) if history else np.inf
        best_overall = min(best_overall, res)
        if res <= threshold:
            sol = least_squares(t, p, tol)
            ray = canonical_ray(sol.x, tol)
            final = float(np.linalg.norm(magnitude_map(frame, ray) - a))
            if final <= threshold:
                return ReconstructionResult(
                    status=STATUS_HEURISTIC_SUCCESS,
                    rays=[ray],
                    residuals=[final],
                    patterns_explored=0,
                    restarts_used=attempt + 1,
                    best_residual=final,
                )
    return ReconstructionResult(
        status=STATUS_HEURISTIC_FAIL,
        rays=[],
        residuals=[],
        patterns_explored=0,
        restarts_used=restarts,
        best_residual=float(best_overall) if np.isfinite(best_overall) else None,
    )


def result_to_dict(result: ReconstructionResult, field: str) -> dict:
    """JSON-ready form of a result; rays follow the frame file number
    encoding (complex entries as [re, im] pairs)."""
    return {
        "status": result.status,
        "rays": [encode_vector(r, field) for r in result.rays],
        "residuals": [float(r) for r in result.residuals],
        "patterns_explored": result.patterns_explored,
        "restarts_used": result.restarts_used,
        "best_residual": float(result.best_residual)
        if result.best_residual is not None
        else None,
    }
