"""Quantum model: Hermitian matrices ordered by positive semidefiniteness.

States are unit-trace positive semidefinite matrices, the inner product is
the trace of the product, and the order unit is the identity matrix.  On
the storage side everything is a real coordinate vector against a fixed
orthonormal Hermitian basis; this module owns the bridge between that
representation and complex matrix arithmetic.

Operations are completely positive maps given by Kraus operators, checked
via positive semidefiniteness of the Choi matrix.  Measurements come from
spectral decompositions: outcome probabilities are traces against spectral
projectors, conditioning is the projector sandwich, and closed-system
dynamics is unitary conjugation generated by a Hamiltonian, with fourth
order Runge-Kutta integrators for the corresponding differential equations
on densities and on amplitude vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    NotNormalizedError,
    NotProjectorError,
    UnsupportedSpaceError,
    ZeroProbabilityError,
    ZeroStateError,
)
from .hermitian import (
    coords_to_matrix,
    hermitian_basis,
    matrix_to_coords,
    require_hermitian,
)
from .operational import EvolutionGroup, MeasurementSpec, OperationMap
from .spaces import DEFAULT_TOL, Element, ModelSpace


def make_quantum_space(d: int, space_id: str | None = None) -> ModelSpace:
    """Model space of ``d x d`` Hermitian matrices with the trace inner product.

    Storage coordinates are taken against an orthonormal Hermitian basis, so
    the metric is the identity and inner products of elements are traces of
    matrix products.  The order unit is the identity matrix; normalized
    states are exactly the unit-trace positive semidefinite matrices.
    """
    if d < 1:
        raise ValueError("matrix dimension must be positive")
    if space_id is None:
        space_id = f"quantum{d}"
    return ModelSpace(
        space_id=space_id,
        dim=d * d,
        metric=np.eye(d * d),
        cone_kind="psd",
        unit=matrix_to_coords(np.eye(d)),
        psd_dim=d,
    )


def _require_psd_space(space: ModelSpace) -> int:
    if space.cone_kind != "psd":
        raise UnsupportedSpaceError(
            f"space {space.space_id!r} does not hold Hermitian matrices"
        )
    return space.psd_dim


def from_matrix(space: ModelSpace, mat: np.ndarray) -> Element:
    """Element of a psd space holding the given Hermitian matrix."""
    d = _require_psd_space(space)
    mat = require_hermitian(mat)
    if mat.shape[0] != d:
        raise UnsupportedSpaceError(
            f"matrix size {mat.shape[0]} does not match the space's {d}"
        )
    return Element(space, matrix_to_coords(mat))


def to_matrix(x: Element) -> np.ndarray:
    """Hermitian matrix held by an element of a psd space."""
    _require_psd_space(x.space)
    return coords_to_matrix(x.coords)


@dataclass(frozen=True, eq=False)
class StateVector:
    """A normalized complex amplitude vector."""

    d: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.shape != (self.d,):
            raise ValueError(f"expected {self.d} amplitudes, got shape {amps.shape}")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > 1e-12:
            raise NotNormalizedError(f"amplitude norm is {norm!r}, expected 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)


def _amplitudes(psi) -> np.ndarray:
    if isinstance(psi, StateVector):
        return psi.amplitudes
    return np.asarray(psi, dtype=complex)


def pure_state(psi) -> np.ndarray:
    """Density matrix of an amplitude vector (normalized internally)."""
    amps = _amplitudes(psi)
    norm = float(np.linalg.norm(amps))
    if norm <= 1e-12:
        raise ZeroStateError("zero amplitude vector has no associated state")
    amps = amps / norm
    return np.outer(amps, amps.conj())


# ---------------------------------------------------------------------------
# Kraus operations and complete positivity
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class KrausSet:
    """A nonempty family of equally sized complex matrices."""

    operators: tuple

    def __post_init__(self) -> None:
        ops = tuple(np.array(k, dtype=complex) for k in self.operators)
        if not ops:
            raise ValueError("a Kraus set needs at least one operator")
        d = ops[0].shape[0] if ops[0].ndim == 2 else 0
        for k in ops:
            if k.ndim != 2 or k.shape != (d, d):
                raise ValueError("Kraus operators must be square and equally sized")
            k.setflags(write=False)
        object.__setattr__(self, "operators", ops)

    @property
    def d(self) -> int:
        return self.operators[0].shape[0]


def apply_kraus(kraus: KrausSet, b: Element) -> Element:
    """Image ``sum_i K_i b K_i^dagger`` of a state element."""
    mat = to_matrix(b)
    if mat.shape[0] != kraus.d:
        raise UnsupportedSpaceError(
            f"matrix size {mat.shape[0]} does not match Kraus size {kraus.d}"
        )
    ops = np.stack(kraus.operators)
    return from_matrix(b.space, np.einsum("rij,jk,rlk->il", ops, mat, ops.conj()))


def kraus_nonselective_check(kraus: KrausSet, tol: float = 1e-10) -> bool:
    """Whether the Kraus operators resolve the identity.

    The operator identity ``sum_i K_i^dagger K_i = 1`` is exactly the
    condition for the induced map to preserve traces, hence the pairing
    with the order unit.
    """
    ops = np.stack(kraus.operators)
    total = np.einsum("rji,rjk->ik", ops.conj(), ops)
    return bool(np.abs(total - np.eye(kraus.d)).max() <= tol)


def _operation_from_images(
    space: ModelSpace, images: np.ndarray, selectivity: str, provenance: str
) -> OperationMap:
    # images[a] = image matrix of the a-th storage basis element
    d = space.psd_dim
    matrix = np.real(np.einsum("pij,aji->pa", hermitian_basis(d), images))
    return OperationMap(space, matrix, selectivity, provenance)


def kraus_operation(
    space: ModelSpace,
    kraus: KrausSet,
    selectivity: str | None = None,
) -> OperationMap:
    """Operation map acting on storage coordinates by the Kraus sandwich.

    With ``selectivity=None`` the flag is set from
    :func:`kraus_nonselective_check`.
    """
    d = _require_psd_space(space)
    if kraus.d != d:
        raise UnsupportedSpaceError(
            f"Kraus size {kraus.d} does not match the space's {d}"
        )
    if selectivity is None:
        selectivity = (
            "nonselective" if kraus_nonselective_check(kraus) else "selective"
        )
    ops = np.stack(kraus.operators)
    images = np.einsum("rij,ajk,rlk->ail", ops, hermitian_basis(d), ops.conj())
    return _operation_from_images(space, images, selectivity, "kraus")


class ChoiReport(NamedTuple):
    choi: np.ndarray
    is_cp: bool
    min_eigenvalue: float


def choi_cp_check(op: OperationMap, tol: float = DEFAULT_TOL) -> ChoiReport:
    """Complete positivity via the block matrix of images of matrix units.

    The map on real coordinates extends complex-linearly to all matrices;
    the Choi matrix collects the images of the matrix units into one
    ``d**2 x d**2`` Hermitian block matrix, and the map is completely
    positive exactly when that matrix is positive semidefinite.
    """
    d = _require_psd_space(op.space)
    basis = hermitian_basis(d)
    # image of each storage basis element under the map
    images = np.einsum("pa,pij->aij", op.matrix, basis)
    # unit_images[i, j] = image of the matrix unit E_ij, using the complex
    # expansion E_ij = sum_a B_a[j, i] B_a
    unit_images = np.einsum("aji,amn->ijmn", basis, images)
    choi = unit_images.transpose(2, 0, 3, 1).reshape(d * d, d * d)
    herm_defect = float(np.abs(choi - choi.conj().T).max())
    if herm_defect > 1e-10 * max(1.0, float(np.abs(choi).max())):
        raise ValueError(
            "map does not preserve Hermiticity; Choi matrix is not Hermitian"
        )
    choi = (choi + choi.conj().T) / 2.0
    min_eig = float(np.linalg.eigvalsh(choi).min())
    return ChoiReport(choi, bool(min_eig >= -tol), min_eig)


# ---------------------------------------------------------------------------
# spectral measurements, Born rule, and conditioning
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ObservableDecomposition:
    """Spectral data: ascending eigenvalues with orthogonal projectors."""

    pairs: tuple

    def __post_init__(self) -> None:
        pairs = tuple((float(a), require_hermitian(p)) for a, p in self.pairs)
        if not pairs:
            raise ValueError("a decomposition needs at least one spectral pair")
        values = [a for a, _ in pairs]
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("eigenvalues must be strictly increasing")
        object.__setattr__(self, "pairs", pairs)

    @property
    def eigenvalues(self) -> tuple:
        return tuple(a for a, _ in self.pairs)

    @property
    def projectors(self) -> tuple:
        return tuple(p for _, p in self.pairs)


def spectral_measurement(
    a: np.ndarray,
    degeneracy_tol: float | None = None,
    space: ModelSpace | None = None,
    name: str = "spectral",
) -> tuple:
    """Projective measurement of a Hermitian observable.

    Eigenvalues closer than ``degeneracy_tol`` (default ``1e-9`` times the
    spectral radius) merge into one outcome with a higher rank projector.
    Outcome labels are ``"0", "1", ...`` in ascending eigenvalue order.
    Returns the measurement together with its spectral decomposition.
    """
    a = require_hermitian(a)
    d = a.shape[0]
    if space is None:
        space = make_quantum_space(d)
    elif _require_psd_space(space) != d:
        raise UnsupportedSpaceError(
            f"observable size {d} does not match the space's {space.psd_dim}"
        )
    w, v = np.linalg.eigh(a)
    if degeneracy_tol is None:
        degeneracy_tol = 1e-9 * float(np.abs(w).max()) if w.size else 0.0
    clusters = [[0]]
    for i in range(1, d):
        if w[i] - w[i - 1] > degeneracy_tol:
            clusters.append([])
        clusters[-1].append(i)
    pairs = []
    for idx in clusters:
        block = v[:, idx]
        pairs.append((float(np.mean(w[idx])), block @ block.conj().T))
    decomposition = ObservableDecomposition(tuple(pairs))
    outcomes = {
        str(k): kraus_operation(space, KrausSet((p,)), "selective")
        for k, (_, p) in enumerate(pairs)
    }
    parent = kraus_operation(
        space, KrausSet(tuple(p for _, p in pairs)), "nonselective"
    )
    spec = MeasurementSpec(name=name, outcomes=outcomes, parent=parent)
    return spec, decomposition


def _require_projector(p: np.ndarray, tol: float) -> np.ndarray:
    p = require_hermitian(p)
    scale = max(1.0, float(np.abs(p).max()))
    if np.abs(p @ p - p).max() > tol * scale:
        raise NotProjectorError("matrix is not idempotent within tolerance")
    return p


def born(b: Element, p_k: np.ndarray, tol: float = DEFAULT_TOL) -> float:
    """Outcome probability ``tr(P_k b)`` for a unit-trace state."""
    mat = to_matrix(b)
    p_k = _require_projector(p_k, tol)
    return float(np.real(np.einsum("ij,ji->", p_k, mat)))


def born_pure(psi, eta) -> float:
    """Pure-state outcome probability: squared overlap of the two vectors."""
    return float(np.abs(np.vdot(_amplitudes(eta), _amplitudes(psi))) ** 2)


def luders(b: Element, p_k: np.ndarray, tol: float = DEFAULT_TOL) -> Element:
    """State after conditioning on a projector: renormalized sandwich."""
    mat = to_matrix(b)
    p_k = _require_projector(p_k, tol)
    weight = float(np.real(np.einsum("ij,ji->", p_k, mat)))
    if weight <= tol:
        raise ZeroProbabilityError(
            "cannot condition on a projector of probability zero"
        )
    return from_matrix(b.space, (p_k @ mat @ p_k) / weight)


def luders_pure(psi, p_k: np.ndarray, tol: float = DEFAULT_TOL) -> StateVector:
    """Pure-state conditioning: project, renormalize, fix the phase.

    The phase convention makes the largest-modulus amplitude real and
    nonnegative, so results are reproducible; any other phase describes the
    same state.
    """
    amps = _amplitudes(psi)
    p_k = _require_projector(p_k, tol)
    image = p_k @ amps
    weight = float(np.real(np.vdot(image, image)))
    if weight <= tol:
        raise ZeroProbabilityError(
            "cannot condition on a projector of probability zero"
        )
    image = image / np.sqrt(weight)
    lead = image[int(np.argmax(np.abs(image)))]
    image = image * (lead.conj() / abs(lead))
    return StateVector(image.size, image)


# ---------------------------------------------------------------------------
# evolution
# ---------------------------------------------------------------------------

def hamiltonian_evolution(
    h: np.ndarray, space: ModelSpace | None = None
) -> EvolutionGroup:
    """Continuous evolution group of unitary conjugations generated by ``h``."""
    h = require_hermitian(h)
    if space is None:
        space = make_quantum_space(h.shape[0])
    return EvolutionGroup(space=space, kind="hamiltonian", hamiltonian=h)


def unitary_operation(space: ModelSpace, u: np.ndarray) -> OperationMap:
    """Conjugation ``b -> U b U^dagger`` as an operation map."""
    d = _require_psd_space(space)
    u = np.asarray(u, dtype=complex)
    if u.shape != (d, d):
        raise UnsupportedSpaceError(f"unitary shape {u.shape} does not fit size {d}")
    if np.abs(u.conj().T @ u - np.eye(d)).max() > 1e-10:
        raise ValueError("matrix is not unitary within tolerance")
    images = np.einsum("ij,ajk,lk->ail", u, hermitian_basis(d), u.conj())
    return _operation_from_images(space, images, "nonselective", "unitary")


def _rk4(f, y, t: float, dt: float):
    if dt <= 0:
        raise ValueError("step size must be positive")
    if t < 0:
        raise ValueError("integration time must be nonnegative")
    remaining = float(t)
    while remaining > 1e-15:
        h = min(dt, remaining)
        k1 = f(y)
        k2 = f(y + 0.5 * h * k1)
        k3 = f(y + 0.5 * h * k2)
        k4 = f(y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        remaining -= h
    return y


def liouville_integrate(
    h: np.ndarray, b0: Element, t: float, dt: float = 1e-3
) -> Element:
    """Integrate ``db/dt = -i [H, b]`` with classical fourth order steps.

    The exact path is unitary conjugation; the integrator exists to exhibit
    the differential form of the same dynamics, so its output should track
    the exact path within the integrator's order, not replace it.
    """
    h = require_hermitian(h)
    mat = to_matrix(b0)

    def rhs(b):
        return -1j * (h @ b - b @ h)

    return from_matrix(b0.space, _rk4(rhs, mat, t, dt))


def schrodinger_integrate(
    h: np.ndarray, psi0, t: float, dt: float = 1e-3
) -> np.ndarray:
    """Integrate ``dpsi/dt = -i H psi`` with classical fourth order steps."""
    h = require_hermitian(h)
    psi = np.array(_amplitudes(psi0), dtype=complex)

    def rhs(v):
        return -1j * (h @ v)

    return _rk4(rhs, psi, t, dt)
