"""Global numeric policy: every tolerance used by the package in one place."""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class NumericPolicy:
    """Tolerances for structural checks, clamping and verdicts.

    Attributes
    ----------
    norm_tol : float
        Allowed deviation of a pure-state 2-norm from 1.
    structural_tol : float
        Allowed deviation for Hermiticity, unit trace, positive
        semidefiniteness, probability sums and isometry checks.
    reconstruction_tol : float
        Elementwise tolerance when an ensemble must reproduce its
        density matrix.
    clamp_tol : float
        Measure values in [-clamp_tol, 0) are treated as roundoff and
        clamped to 0; anything more negative raises
        :class:`~entmono.exceptions.NumericalIntegrityError`.
    verdict_tol : float
        Default tolerance for monogamy/polygamy verdicts (distinct from
        the linear-algebra tolerances above).
    rank_tol : float
        Eigenvalues below this count as zero when ranking a state.
    """

    norm_tol: float = 1e-12
    structural_tol: float = 1e-10
    reconstruction_tol: float = 1e-8
    clamp_tol: float = 1e-10
    verdict_tol: float = 1e-9
    rank_tol: float = 1e-12

    def with_(self, **kwargs) -> "NumericPolicy":
        """Return a copy with the given fields replaced."""
        return replace(self, **kwargs)


_active = NumericPolicy()


def get_policy() -> NumericPolicy:
    """Return the policy currently in effect."""
    return _active


def set_policy(policy: NumericPolicy) -> None:
    """Install ``policy`` as the global default."""
    global _active
    if not isinstance(policy, NumericPolicy):
        raise ValueError("set_policy expects a NumericPolicy")
    _active = policy
