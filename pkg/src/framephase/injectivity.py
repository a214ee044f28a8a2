"""Injectivity certificates for the magnitude map, with explicit witnesses.

For a real frame, the magnitude map is injective on rays exactly when for
every index subset S, the vectors indexed by S or those indexed by its
complement span the whole space. A violating pair (S, S-complement) yields
a constructive ambiguity witness: pick u orthogonal to the S-vectors and v
orthogonal to the complement vectors; then u+v and u-v have identical
magnitude measurements but generate different rays.

For a complex frame the same subset condition is only necessary, and there
is an unconditional size obstruction: fewer than 2N measurements can never
be injective (for N >= 2). Verdicts therefore come in three kinds:
Injective (real, subset condition holds), NotInjective (with a verified
witness), and NecessaryConditionsPass (complex, no obstruction found).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .frames import (
    COMPLEX,
    REAL,
    Frame,
    analysis_matrix,
    coefficient_range,
    encode_vector,
    gen_random,
)
from .linalg import DEFAULT_TOL, Tolerance, least_squares, null_space, rank
from .magnitude import SignPattern, canonical_ray, magnitude_map, ray_equal

__all__ = [
    "VERDICT_INJECTIVE",
    "VERDICT_NOT_INJECTIVE",
    "VERDICT_NECESSARY",
    "InjectivityCertificate",
    "FullSpark",
    "FullSparkEquivalence",
    "complement_property",
    "full_spark_test",
    "witness_pair",
    "verify_witness",
    "sharpness_check",
    "complex_size_check",
    "necessary_condition_for_M_2N_minus_1",
    "certify",
    "certificate_to_dict",
]

VERDICT_INJECTIVE = "injective"
VERDICT_NOT_INJECTIVE = "not_injective"
VERDICT_NECESSARY = "necessary_conditions_pass"


@dataclass(frozen=True)
class InjectivityCertificate:
    """Outcome of an injectivity check.

    NotInjective verdicts always carry a failing subset (when one was
    found by subset enumeration) and a verified witness pair (x, y) with
    equal magnitude measurements and distinct rays. checked_subsets counts
    the {S, complement} pairs examined.
    """

    verdict: str
    failing_subset: SignPattern | None
    witness: tuple[np.ndarray, np.ndarray] | None
    checked_subsets: int


def verify_witness(frame: Frame, x, y, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Confirm that (x, y) is a genuine ambiguity: equal magnitudes within
    residual_eps * (1 + ||a||), and distinct rays."""
    a = magnitude_map(frame, x)
    b = magnitude_map(frame, y)
    scale = 1.0 + max(float(np.linalg.norm(a)), float(np.linalg.norm(b)))
    if np.linalg.norm(a - b) > tol.residual_eps * scale:
        return False
    return not ray_equal(np.asarray(x), np.asarray(y), tol)


def witness_pair(
    frame: Frame, pattern: SignPattern, tol: Tolerance = DEFAULT_TOL
) -> tuple[np.ndarray, np.ndarray]:
    """Ambiguity witness from a subset whose two sides both fail to span.

    Returns (u+v, u-v) where u is a unit vector orthogonal to every frame
    vector indexed by the subset and v is orthogonal to the rest. The
    measurements agree coordinate by coordinate (each index sees only u or
    only v, up to sign), while the rays differ because u and v are nonzero.
    Raises ValueError when either side spans (no such u or v exists).
    """
    if pattern.size != frame.m:
        raise ValueError(f"pattern size {pattern.size} does not match M={frame.m}")
    t = analysis_matrix(frame)
    idx_s = list(pattern.indices())
    idx_c = list(pattern.complement().indices())
    basis_u = null_space(t[idx_s], tol) if idx_s else np.eye(frame.n, dtype=t.dtype)
    basis_v = null_space(t[idx_c], tol) if idx_c else np.eye(frame.n, dtype=t.dtype)
    if basis_u.shape[1] == 0:
        raise ValueError("subset spans the space; no witness from this side")
    if basis_v.shape[1] == 0:
        raise ValueError("complement spans the space; no witness from this side")
    u = basis_u[:, 0]
    v = basis_v[:, 0]
    return u + v, u - v


def complement_property(
    frame: Frame, tol: Tolerance = DEFAULT_TOL, max_vectors: int = 24
) -> InjectivityCertificate:
    """Check every subset/complement pair for the spanning condition.

    Pairs are enumerated once each via bitmasks with index 0 fixed inside
    S, in ascending mask order, so the lowest failing mask wins. A side
    with fewer than N vectors is rank deficient without further work. On
    failure the certificate carries the subset and a verified witness; on
    success the verdict is Injective for real frames and
    NecessaryConditionsPass for complex ones (where the condition is
    necessary but not sufficient).
    """
    m, n = frame.m, frame.n
    if m > max_vectors:
        raise ValueError(
            f"M={m} exceeds the subset enumeration budget ({max_vectors} vectors)"
        )
    vectors = frame.vectors
    pairs = 1 << (m - 1)
    for rest in range(pairs):
        smask = (rest << 1) | 1
        if smask.bit_count() >= n:
            idx_s = [i for i in range(m) if smask >> i & 1]
            if rank(vectors[idx_s], tol) >= n:
                continue
        cmask = smask ^ ((1 << m) - 1)
        if cmask.bit_count() >= n:
            idx_c = [i for i in range(m) if cmask >> i & 1]
            if rank(vectors[idx_c], tol) >= n:
                continue
        pattern = SignPattern(smask, m)
        x, y = witness_pair(frame, pattern, tol)
        if not verify_witness(frame, x, y, tol):
            raise RuntimeError(
                f"witness for failing subset {pattern.indices()} did not verify"
            )
        return InjectivityCertificate(
            verdict=VERDICT_NOT_INJECTIVE,
            failing_subset=pattern,
            witness=(x, y),
            checked_subsets=rest + 1,
        )
    verdict = VERDICT_INJECTIVE if frame.field == REAL else VERDICT_NECESSARY
    return InjectivityCertificate(
        verdict=verdict, failing_subset=None, witness=None, checked_subsets=pairs
    )


class FullSpark(NamedTuple):
    is_full_spark: bool
    dependent_subset: tuple[int, ...] | None


def full_spark_test(
    frame: Frame, tol: Tolerance = DEFAULT_TOL, max_subsets: int = 2_000_000
) -> FullSpark:
    """Whether every subset of N frame vectors is linearly independent.

    Subsets are visited in lexicographic order; the first dependent one is
    reported. Full spark together with M >= 2N-1 forces the subset
    spanning condition: any side of a split with at least N vectors spans,
    and one side always has at least N of the M >= 2N-1 indices.
    """
    m, n = frame.m, frame.n
    total = math.comb(m, n)
    if total > max_subsets:
        raise ValueError(
            f"C({m},{n}) = {total} subsets exceeds the budget ({max_subsets})"
        )
    vectors = frame.vectors
    for subset in itertools.combinations(range(m), n):
        if rank(vectors[list(subset)], tol) < n:
            return FullSpark(False, subset)
    return FullSpark(True, None)


def sharpness_check(
    n: int, seed=0, tol: Tolerance = DEFAULT_TOL
) -> InjectivityCertificate:
    """Demonstrate that M = 2N-2 real measurements are never injective.

    Draws a random real frame with M = 2N-2 and splits the indices at
    k = N-1: both halves have N-1 < N vectors, so neither spans, and
    witness_pair produces a verified ambiguity. This is the boundary case
    showing the M >= 2N-1 requirement is sharp.
    """
    if n < 2:
        raise ValueError(f"need N >= 2, got N={n}")
    frame = gen_random(REAL, n, 2 * n - 2, seed)
    pattern = SignPattern.from_indices(range(n - 1), 2 * n - 2)
    x, y = witness_pair(frame, pattern, tol)
    if not verify_witness(frame, x, y, tol):
        raise RuntimeError("sharpness witness did not verify")
    return InjectivityCertificate(
        verdict=VERDICT_NOT_INJECTIVE,
        failing_subset=pattern,
        witness=(x, y),
        checked_subsets=1,
    )


def complex_size_check(frame: Frame) -> bool:
    """Size test for complex frames: injectivity requires M >= 2N.

    Returns False when M <= 2N-1 (certainly not injective for N >= 2), True
    when the count is large enough for injectivity to be possible.
    """
    if frame.field != COMPLEX:
        raise ValueError("complex_size_check applies to complex frames")
    return frame.m >= 2 * frame.n


@dataclass(frozen=True)
class FullSparkEquivalence:
    """Both sides of the M = 2N-1 equivalence, for cross-checking.

    At exactly M = 2N-1 a real frame is injective if and only if it is
    full spark: a dependent N-subset leaves its complement with only N-1
    vectors, so neither side spans.
    """

    is_full_spark: bool
    dependent_subset: tuple[int, ...] | None
    certificate: InjectivityCertificate

    @property
    def consistent(self) -> bool:
        return self.is_full_spark == (self.certificate.verdict == VERDICT_INJECTIVE)


def necessary_condition_for_M_2N_minus_1(
    frame: Frame, tol: Tolerance = DEFAULT_TOL
) -> FullSparkEquivalence:
    """Run full_spark_test and complement_property side by side at M = 2N-1.

    The two verdicts must agree; the returned report carries whichever
    side failed (dependent subset, or failing split with witness) so a
    disagreement can be traced to its tolerance decision.
    """
    if frame.field != REAL:
        raise ValueError("the full-spark equivalence is a real-frame statement")
    if frame.m != 2 * frame.n - 1:
        raise ValueError(f"requires M = 2N-1, got N={frame.n}, M={frame.m}")
    spark = full_spark_test(frame, tol)
    cert = complement_property(frame, tol)
    return FullSparkEquivalence(
        is_full_spark=spark.is_full_spark,
        dependent_subset=spark.dependent_subset,
        certificate=cert,
    )


def _pullback(frame: Frame, coeff: np.ndarray, tol: Tolerance) -> np.ndarray:
    """Recover x with T x = coeff for a coefficient vector known to lie in W."""
    sol = least_squares(analysis_matrix(frame), coeff, tol)
    scale = 1.0 + float(np.linalg.norm(coeff))
    if sol.residual > tol.residual_eps * scale:
        raise RuntimeError(
            f"coefficient vector is not in the range (residual {sol.residual:.3e})"
        )
    return sol.x


def _complex_minimal_count_witness(
    frame: Frame, tol: Tolerance
) -> tuple[np.ndarray, np.ndarray]:
    """Witness for a complex frame with M = 2N-1 whose subset check passes.

    The coefficient range W is N-dimensional inside C^(2N-1), so it meets
    both the span of the first N coordinates and the span of the last N in
    nonzero vectors u and w; the two overlap only at the pivot coordinate
    N-1. Because the subset condition holds, both have a nonzero pivot
    entry. Rescaling so the pivot entries become 1 and i makes |z + w'| and
    |z - w'| agree coordinate by coordinate (|1+i| = |1-i| at the pivot,
    disjoint supports elsewhere), while the rays differ.
    """
    n, m = frame.n, frame.m
    basis = coefficient_range(frame, tol).basis
    xi = null_space(basis[n:, :], tol)
    eta = null_space(basis[: n - 1, :], tol)
    if xi.shape[1] == 0 or eta.shape[1] == 0:
        raise RuntimeError("range basis lost rank; cannot build size witness")
    u = basis @ xi[:, 0]  # supported on coordinates 0..n-1
    w = basis @ eta[:, 0]  # supported on coordinates n-1..m-1
    pivot = n - 1
    gate = 0.25 * tol.residual_eps
    if abs(u[pivot]) <= gate or abs(w[pivot]) <= gate:
        # Supports are already (essentially) disjoint; the pair u+w, u-w
        # mismatches only through the sub-gate pivot entry.
        plus, minus = u + w, u - w
    else:
        z = u / u[pivot]
        w_rot = 1j * w / w[pivot]
        plus, minus = z + w_rot, z - w_rot
    x = _pullback(frame, plus, tol)
    y = _pullback(frame, minus, tol)
    if not verify_witness(frame, x, y, tol):
        raise RuntimeError("complex size witness did not verify")
    return x, y


def certify(
    frame: Frame, tol: Tolerance = DEFAULT_TOL, max_vectors: int = 24
) -> InjectivityCertificate:
    """Full decision procedure combining subset and size obstructions.

    Real frames: the subset condition decides injectivity outright.
    Complex frames with N >= 2 and M <= 2N-1: never injective; the
    certificate carries an explicit verified witness (a balanced-split
    pair when M <= 2N-2, the pivot construction at M = 2N-1). Otherwise
    the subset check runs and a pass means NecessaryConditionsPass only.
    """
    if frame.field == REAL:
        return complement_property(frame, tol, max_vectors)
    n, m = frame.n, frame.m
    if n >= 2 and m <= 2 * n - 2:
        pattern = SignPattern.from_indices(range(m // 2), m)
        x, y = witness_pair(frame, pattern, tol)
        if not verify_witness(frame, x, y, tol):
            raise RuntimeError("balanced-split witness did not verify")
        return InjectivityCertificate(
            verdict=VERDICT_NOT_INJECTIVE,
            failing_subset=pattern,
            witness=(x, y),
            checked_subsets=1,
        )
    if n >= 2 and m == 2 * n - 1:
        cert = complement_property(frame, tol, max_vectors)
        if cert.verdict == VERDICT_NOT_INJECTIVE:
            return cert
        x, y = _complex_minimal_count_witness(frame, tol)
        return InjectivityCertificate(
            verdict=VERDICT_NOT_INJECTIVE,
            failing_subset=None,
            witness=(x, y),
            checked_subsets=cert.checked_subsets,
        )
    return complement_property(frame, tol, max_vectors)


def certificate_to_dict(cert: InjectivityCertificate, field: str) -> dict:
    """JSON-ready form of a certificate; witness vectors follow the frame
    file number encoding (complex entries as [re, im] pairs)."""
    witness = None
    if cert.witness is not None:
        x, y = cert.witness
        witness = {
            "x": encode_vector(canonical_ray(x), field),
            "y": encode_vector(canonical_ray(y), field),
        }
    return {
        "verdict": cert.verdict,
        "failing_subset": list(cert.failing_subset.indices())
        if cert.failing_subset is not None
        else None,
        "witness": witness,
        "checked_subsets": cert.checked_subsets,
    }
