"""Second-order non-optimality test for bang-bang words.

In a step-2 nilpotent algebra the conjugation operators e^{t ad X} act on
first-layer fields as Z -> Z + t [X, Z] exactly (the series truncates),
so the conjugated fields along a word, the quadratic form built from
their brackets, and its restriction to the admissible-variation subspace
are all available in closed form.  A positive eigenvalue of the
restriction certifies that the word is not optimal; otherwise the test
is inconclusive.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .adjoint import AdjointCovector, synthesize
from .words import InvariantViolation, Word, canonicalize

__all__ = [
    "AlgebraElement",
    "SecondOrderReport",
    "basis_field",
    "bracket",
    "conjugated_fields",
    "ag_test",
]

NULLSPACE_CUTOFF = 1e-10
POSITIVE_EIG_TOL = 1e-10


@dataclass(frozen=True)
class AlgebraElement:
    """Lie algebra element: a on the first layer (X_i), b on the second (Y_12, Y_13, Y_23)."""

    a: tuple[float, float, float]
    b: tuple[float, float, float]

    def as_array(self) -> np.ndarray:
        return np.array(self.a + self.b)


def basis_field(letter: int) -> AlgebraElement:
    a = [0.0, 0.0, 0.0]
    a[letter - 1] = 1.0
    return AlgebraElement(tuple(a), (0.0, 0.0, 0.0))


def bracket(u: AlgebraElement, v: AlgebraElement) -> AlgebraElement:
    """Lie bracket; depends only on the first-layer parts (step 2)."""
    a, c = u.a, v.a
    return AlgebraElement(
        (0.0, 0.0, 0.0),
        (
            a[0] * c[1] - a[1] * c[0],
            a[0] * c[2] - a[2] * c[0],
            a[1] * c[2] - a[2] * c[1],
        ),
    )


def _add_scaled(u: AlgebraElement, t: float, v: AlgebraElement) -> AlgebraElement:
    return AlgebraElement(
        tuple(ui + t * vi for ui, vi in zip(u.a, v.a)),
        tuple(ui + t * vi for ui, vi in zip(u.b, v.b)),
    )


def conjugated_fields(w: Word) -> list[AlgebraElement]:
    """Fields Z_i = P_i V_i along a canonical word with arcs V_0 .. V_k.

    P_i conjugates by the flows of the interior arcs 1 .. i-1, and in a
    step-2 algebra each conjugation contributes the single bracket term
    tau_m [V_{m-1}, V_i]; the first and last arc durations never enter.
    """
    w = canonicalize(w)
    if not w.arcs:
        raise InvariantViolation("empty-word", "cannot conjugate along an empty word")
    fields = [basis_field(l) for l, _ in w.arcs]
    durations = [t for _, t in w.arcs]
    out = []
    for i, vi in enumerate(fields):
        z = vi
        for m in range(1, i):  # interior arcs 1 .. i-1 (durations tau_2 .. tau_i)
            z = _add_scaled(z, durations[m], bracket(fields[m], vi))
        out.append(z)
    return out


@dataclass(frozen=True)
class SecondOrderReport:
    """Outcome of the second-order test."""

    W_basis: np.ndarray  # (k+1, dim W), orthonormal columns
    G_restricted: np.ndarray  # (dim W, dim W) symmetric
    verdict: str  # "not-optimal" | "inconclusive"


def _check_consistency(w: Word, a: AdjointCovector, tol: float) -> None:
    synthesized, _ = synthesize(a, w.total_duration)
    if len(synthesized.arcs) != len(w.arcs):
        raise InvariantViolation(
            "word-covector",
            f"word has {len(w.arcs)} arcs but the covector synthesizes {len(synthesized.arcs)}",
        )
    for (l1, t1), (l2, t2) in zip(w.arcs, synthesized.arcs):
        if l1 != l2 or abs(t1 - t2) > tol:
            raise InvariantViolation(
                "word-covector",
                f"word arc ({l1}, {t1}) does not match synthesized arc ({l2}, {t2})",
            )


def ag_test(
    w: Word,
    a: AdjointCovector,
    check_consistency: bool = True,
    consistency_tol: float = 1e-8,
) -> SecondOrderReport:
    """Second-order test of the word against its covector.

    Builds G(alpha) = sum_{i<j} alpha_i alpha_j <R, [Z_i, Z_j]>, restricts
    it to the subspace W cut out by sum alpha_i = 0 and
    sum alpha_i Z_i = 0, and reports "not-optimal" iff the restriction has
    a positive eigenvalue.
    """
    w = canonicalize(w)
    k = len(w.arcs) - 1
    if k < 2:
        raise InvariantViolation("switch-count", f"need at least 2 switchings, got {k}")
    if check_consistency:
        _check_consistency(w, a, consistency_tol)

    z = conjugated_fields(w)
    n = k + 1

    # pairing of a second-layer element with the covector.  The flow
    # convention h' = R u fixes R_ij = <lambda, [X_j, X_i]>, so the
    # pairing with Y_ij = [X_i, X_j] is -h_ij.
    hvec = -np.array(a.skew)

    g = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            gij = float(np.dot(hvec, bracket(z[i], z[j]).b))
            g[i, j] = g[j, i] = gij / 2.0  # alpha^T g alpha reproduces the double sum

    # constraint rows: sum alpha_i = 0 and sum alpha_i Z_i = 0 (6 components)
    rows = np.zeros((7, n))
    rows[0, :] = 1.0
    for i in range(n):
        rows[1:, i] = z[i].as_array()

    _, s, vt = np.linalg.svd(rows)
    cutoff = NULLSPACE_CUTOFF * (s[0] if s.size else 1.0)
    rank = int(np.sum(s > cutoff))
    basis = vt[rank:].T  # orthonormal columns spanning W

    if basis.shape[1] == 0:
        return SecondOrderReport(basis, np.zeros((0, 0)), "inconclusive")

    restricted = basis.T @ g @ basis
    restricted = (restricted + restricted.T) / 2.0
    eigs = np.linalg.eigvalsh(restricted)
    verdict = "not-optimal" if eigs.max() > POSITIVE_EIG_TOL else "inconclusive"
    return SecondOrderReport(basis, restricted, verdict)
