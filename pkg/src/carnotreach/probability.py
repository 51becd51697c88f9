"""Precedence probabilities of independent discrete random variables.

For independent dice with pairwise tie-free supports, the point
(P(x1 < x2), P(x2 < x3), P(x3 < x1)) is computed by exact double sums,
and the Monte Carlo harness confronts such points with the witness-word
solver: every dice triple should be reported attained.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from . import attainability
from .words import InvariantViolation, PqrPoint

__all__ = [
    "DiscreteDistribution",
    "DiceCheckReport",
    "dice_pqr",
    "random_dice_triple",
    "random_dice_check",
]

TIE_TOL = 1e-12


@dataclass(frozen=True)
class DiscreteDistribution:
    """Finitely supported distribution: atoms (value, mass), values increasing."""

    atoms: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not self.atoms:
            raise InvariantViolation("atoms", "distribution needs at least one atom")
        values = [v for v, _ in self.atoms]
        masses = [m for _, m in self.atoms]
        if any(m <= 0 for m in masses):
            raise InvariantViolation("mass-positive", f"masses must be positive, got {masses}")
        if abs(sum(masses) - 1.0) > TIE_TOL:
            raise InvariantViolation("mass-sum", f"masses must sum to 1, got {sum(masses)}")
        if any(values[i] >= values[i + 1] for i in range(len(values) - 1)):
            raise InvariantViolation("values-increasing", f"values must be strictly increasing, got {values}")

    @staticmethod
    def of(pairs) -> "DiscreteDistribution":
        return DiscreteDistribution(tuple((float(v), float(m)) for v, m in pairs))

    @staticmethod
    def constant(value: float) -> "DiscreteDistribution":
        return DiscreteDistribution(((float(value), 1.0),))


def _precedence(d1: DiscreteDistribution, d2: DiscreteDistribution) -> float:
    return float(sum(m1 * m2 for v1, m1 in d1.atoms for v2, m2 in d2.atoms if v1 < v2))


def _tie_mass(d1: DiscreteDistribution, d2: DiscreteDistribution) -> tuple[float, list[float]]:
    m2 = dict(d2.atoms)
    shared = [(v, m * m2[v]) for v, m in d1.atoms if v in m2]
    return sum(m for _, m in shared), [v for v, _ in shared]


def dice_pqr(
    d1: DiscreteDistribution,
    d2: DiscreteDistribution,
    d3: DiscreteDistribution,
) -> PqrPoint:
    """Exact (P(x1 < x2), P(x2 < x3), P(x3 < x1)).

    Each cyclic pair must be tie-free, so that the two orderings of a pair
    have complementary probabilities.
    """
    dice = (d1, d2, d3)
    for i, j in ((1, 2), (2, 3), (3, 1)):
        mass, values = _tie_mass(dice[i - 1], dice[j - 1])
        if mass > TIE_TOL:
            raise InvariantViolation(
                "tie-mass",
                f"dice pair ({i}, {j}) has tie mass {mass} at shared values {values}",
            )
    return PqrPoint(_precedence(d1, d2), _precedence(d2, d3), _precedence(d3, d1))


def random_dice_triple(
    atoms_max: int,
    rng: np.random.Generator,
) -> tuple[DiscreteDistribution, DiscreteDistribution, DiscreteDistribution]:
    """Independent triple with disjoint supports (no ties by construction)."""
    counts = rng.integers(1, atoms_max + 1, size=3)
    values = np.sort(rng.uniform(0.0, 1.0, size=int(counts.sum())))
    owner = rng.permutation(np.repeat([0, 1, 2], counts))
    out = []
    for i in range(3):
        vals = values[owner == i]
        masses = rng.dirichlet(np.ones(len(vals)))
        out.append(DiscreteDistribution.of(zip(vals, masses)))
    return tuple(out)


@dataclass
class DiceCheckReport:
    """Outcome of the dice-vs-solver confrontation."""

    n_trials: int
    n_attained: int
    worst_residual: float
    failures: list[int] = field(default_factory=list)
    rows: list[tuple[float, float, float, str, float]] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("p,q,r,status,residual\n")
        for p, q, r, status, res in self.rows:
            buf.write(f"{p!r},{q!r},{r!r},{status},{res!r}\n")
        return buf.getvalue()


def random_dice_check(
    n_trials: int,
    atoms_max: int = 4,
    seed: int = 0,
    **fit_kwargs,
) -> DiceCheckReport:
    """Sample dice triples, compute their (p, q, r), and run the solver on each."""
    if n_trials < 1:
        raise InvariantViolation("n-trials", f"n_trials must be >= 1, got {n_trials}")
    rng = np.random.default_rng(seed)
    report = DiceCheckReport(n_trials, 0, 0.0)
    for trial in range(n_trials):
        d1, d2, d3 = random_dice_triple(atoms_max, rng)
        point = dice_pqr(d1, d2, d3)
        try:
            result = attainability.fit(point, **fit_kwargs)
        except Exception:
            report.failures.append(trial)
            report.rows.append((point.p, point.q, point.r, "error", float("nan")))
            continue
        if result.status == "attained":
            report.n_attained += 1
            report.worst_residual = max(report.worst_residual, result.residual)
        report.rows.append((point.p, point.q, point.r, result.status, result.residual))
    return report
