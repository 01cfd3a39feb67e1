"""Matrix-product-state models given as Kraus families with an invariant state.

A model is a family of D x D complex matrices ``A_1 .. A_d`` together with a
density matrix ``rho`` on the bond space satisfying

    sum_i A_i A_i^dag = I        (completeness)
    sum_i A_i^dag rho A_i = rho  (invariance)

Builders are provided for the two spin chains analysed in closed form
elsewhere in this package: the spin-1 AKLT chain (d=3, D=2) and the
Majumdar-Ghosh chain (d=2, D=3).  Arbitrary models can be loaded from JSON.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np

#: Tolerance used by the structural validity checks.
DEFAULT_TOL = 1e-12

#: Angle at which the AKLT family is the ground state of the standard
#: bilinear-biquadratic Hamiltonian (sin^2 theta = 1/3).
AKLT_GROUND_THETA = math.acos(math.sqrt(2.0 / 3.0))

#: Coupling at which the Majumdar-Ghosh family is the ground state.
MG_GROUND_G = 0.5


class ConvergenceError(RuntimeError):
    """Fixed-point iteration failed to reach the requested tolerance."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return a.conj().T


def max_abs(a: np.ndarray) -> float:
    """Largest entrywise modulus; 0 for empty input."""
    return float(np.max(np.abs(a))) if a.size else 0.0


def _as_complex_matrix(a: Any, name: str) -> np.ndarray:
    m = np.ascontiguousarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {m.shape}")
    m.setflags(write=False)
    return m


@dataclass(frozen=True)
class MPSModel:
    """A validated MPS triple: Kraus family, invariant state, parameters.

    Construction checks structure only (dimensions and dtypes); whether the
    completeness/invariance conditions actually hold is reported by
    :func:`validate_model`, so deliberately broken models can be built for
    testing.
    """

    local_dim: int
    bond_dim: int
    kraus: tuple[np.ndarray, ...]
    invariant_state: np.ndarray
    label: str = "custom"
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.local_dim < 1 or self.bond_dim < 1:
            raise ValueError("local_dim and bond_dim must be positive")
        if len(self.kraus) != self.local_dim:
            raise ValueError(
                f"expected {self.local_dim} Kraus operators, got {len(self.kraus)}"
            )
        ops = tuple(
            _as_complex_matrix(a, f"kraus[{i}]") for i, a in enumerate(self.kraus)
        )
        for i, a in enumerate(ops):
            if a.shape != (self.bond_dim, self.bond_dim):
                raise ValueError(
                    f"kraus[{i}] has shape {a.shape}, expected "
                    f"({self.bond_dim}, {self.bond_dim})"
                )
        rho = _as_complex_matrix(self.invariant_state, "invariant_state")
        if rho.shape != (self.bond_dim, self.bond_dim):
            raise ValueError(
                f"invariant_state has shape {rho.shape}, expected "
                f"({self.bond_dim}, {self.bond_dim})"
            )
        object.__setattr__(self, "kraus", ops)
        object.__setattr__(self, "invariant_state", rho)
        object.__setattr__(self, "params", dict(self.params))

    def kraus_stack(self) -> np.ndarray:
        """Kraus family as a (d, D, D) contiguous array (kernel input form)."""
        return np.ascontiguousarray(np.stack(self.kraus))


@dataclass(frozen=True)
class ValidationReport:
    """Named max-abs residuals of the model conditions."""

    residuals: Mapping[str, float]
    tol: float = DEFAULT_TOL

    @property
    def passed(self) -> bool:
        return all(r < self.tol for r in self.residuals.values())

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values())

    def __str__(self) -> str:
        worst = max(self.residuals, key=self.residuals.get)
        status = "ok" if self.passed else "FAIL"
        return f"{status} (worst: {worst} = {self.residuals[worst]:.3e})"


def aklt_model(theta: float) -> MPSModel:
    """Spin-1 AKLT chain with one tunable angle (d=3, D=2).

    The Kraus family is ``A_1 = -sin(theta) diag(1, -1)``,
    ``A_2 = cos(theta) |0><1|``, ``A_3 = -cos(theta) |1><0|`` with invariant
    state I/2.  Any finite angle is accepted; theta = pi/2 gives
    A_2 = A_3 = 0, which is still a valid (unitary-like) model.
    """
    if not math.isfinite(theta):
        raise ValueError("theta must be finite")
    s, c = math.sin(theta), math.cos(theta)
    a1 = np.array([[-s, 0.0], [0.0, s]], dtype=complex)
    a2 = np.array([[0.0, c], [0.0, 0.0]], dtype=complex)
    a3 = np.array([[0.0, 0.0], [-c, 0.0]], dtype=complex)
    rho = np.eye(2, dtype=complex) / 2.0
    return MPSModel(3, 2, (a1, a2, a3), rho, label="aklt", params={"theta": theta})


def mg_model(g: float) -> MPSModel:
    """Majumdar-Ghosh chain with coupling g in [0, 1) (d=2, D=3).

    Invariant state diag((1-g)/2, 1/2, g/2); the physical ground point is
    g = 1/2.
    """
    if not (0.0 <= g < 1.0):
        raise ValueError(f"g must lie in [0, 1), got {g}")
    sq_g = math.sqrt(g)
    sq_1mg = math.sqrt(1.0 - g)
    a1 = np.array(
        [[0.0, 1.0, 0.0], [0.0, 0.0, -sq_g], [0.0, 0.0, 0.0]], dtype=complex
    )
    a2 = np.array(
        [[0.0, 0.0, 0.0], [sq_1mg, 0.0, 0.0], [0.0, 1.0, 0.0]], dtype=complex
    )
    rho = np.diag([(1.0 - g) / 2.0, 0.5, g / 2.0]).astype(complex)
    return MPSModel(2, 3, (a1, a2), rho, label="mg", params={"g": g})


def validate_model(model: MPSModel, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Residuals of completeness, invariance and the state properties of rho.

    Passes iff every residual is below ``tol`` (positivity is measured as the
    amount by which the lowest eigenvalue of rho dips under zero).
    """
    d_id = np.eye(model.bond_dim)
    rho = model.invariant_state
    completeness = sum(a @ dagger(a) for a in model.kraus) - d_id
    invariance = sum(dagger(a) @ rho @ a for a in model.kraus) - rho
    herm = rho - dagger(rho)
    eigs = np.linalg.eigvalsh((rho + dagger(rho)) / 2.0)
    residuals = {
        "completeness": max_abs(completeness),
        "invariance": max_abs(invariance),
        "state_hermiticity": max_abs(herm),
        "state_trace": abs(float(np.trace(rho).real) - 1.0),
        "state_positivity": max(0.0, -float(eigs[0])),
    }
    return ValidationReport(residuals=residuals, tol=tol)


def solve_invariant_state(
    kraus: Sequence[np.ndarray],
    tol: float = 1e-12,
    max_iter: int = 10000,
) -> np.ndarray:
    """Solve sum_i A_i^dag rho A_i = rho for a trace-1 PSD rho.

    Uses the averaged map rho <- (rho + T(rho))/2 starting from I/D.  Plain
    iteration of T alone can oscillate indefinitely (the Majumdar-Ghosh
    transfer map has a -1 eigenvalue at every coupling); averaging maps that
    eigenvalue to 0 and converges geometrically whenever 1 is the only
    peripheral eigenvalue reachable from I/D.  Raises
    :class:`ConvergenceError` after ``max_iter`` sweeps, carrying the last
    fixed-point residual.
    """
    ops = [np.asarray(a, dtype=complex) for a in kraus]
    if not ops:
        raise ValueError("need at least one Kraus operator")
    dim = ops[0].shape[0]
    completeness = sum(a @ dagger(a) for a in ops) - np.eye(dim)
    if max_abs(completeness) > 1e-10:
        raise ValueError(
            "Kraus family is not complete (sum A A^dag != I); "
            f"residual {max_abs(completeness):.3e}"
        )

    def step(x: np.ndarray) -> np.ndarray:
        return sum(dagger(a) @ x @ a for a in ops)

    rho = np.eye(dim, dtype=complex) / dim
    residual = math.inf
    for _ in range(max_iter):
        image = step(rho)
        residual = max_abs(image - rho)
        if residual < tol:
            return rho
        rho = (rho + image) / 2.0
        rho = (rho + dagger(rho)) / 2.0
        rho = rho / float(np.trace(rho).real)
    raise ConvergenceError(
        f"invariant state iteration did not reach {tol:.1e} "
        f"within {max_iter} sweeps (residual {residual:.3e})",
        residual=residual,
    )


# ---------------------------------------------------------------------------
# JSON interchange.
#
# A model document looks like
#   {"d": 2, "D": 3, "kraus": [matrix, ...], "rho": matrix}
# where a matrix is a list of rows and every entry is a [re, im] pair.
# "rho" may be omitted, in which case the invariant state is solved for.
# ---------------------------------------------------------------------------


def _matrix_from_json(rows: Any, name: str) -> np.ndarray:
    try:
        mat = np.array(
            [[complex(re, im) for re, im in row] for row in rows], dtype=complex
        )
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{name}: entries must be [re, im] pairs") from exc
    return mat


def _matrix_to_json(a: np.ndarray) -> list[list[list[float]]]:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(a)]


def model_from_dict(data: Mapping[str, Any]) -> MPSModel:
    """Build a model from its JSON-style dictionary form."""
    try:
        d = int(data["d"])
        big_d = int(data["D"])
        kraus_rows = data["kraus"]
    except KeyError as exc:
        raise ValueError(f"model document is missing key {exc}") from exc
    kraus = tuple(
        _matrix_from_json(rows, f"kraus[{i}]") for i, rows in enumerate(kraus_rows)
    )
    if "rho" in data and data["rho"] is not None:
        rho = _matrix_from_json(data["rho"], "rho")
    else:
        rho = solve_invariant_state(kraus)
    label = str(data.get("label", "custom"))
    params = {str(k): float(v) for k, v in dict(data.get("params", {})).items()}
    return MPSModel(d, big_d, kraus, rho, label=label, params=params)


def model_to_dict(model: MPSModel) -> dict[str, Any]:
    """Dictionary form of a model, invertible by :func:`model_from_dict`."""
    return {
        "d": model.local_dim,
        "D": model.bond_dim,
        "kraus": [_matrix_to_json(a) for a in model.kraus],
        "rho": _matrix_to_json(model.invariant_state),
        "label": model.label,
        "params": dict(model.params),
    }


def load_model(path: str | Path) -> MPSModel:
    """Load a model from a JSON file."""
    with open(path, encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))
