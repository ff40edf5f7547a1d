"""Operations on a model space: prediction, update, sequences, evolution.

An :class:`OperationMap` is a linear map on storage coordinates that sends
the cone into itself.  Non-selective operations additionally leave the
pairing with the order unit untouched; that normalization is what makes
probabilities of later outcomes insensitive to earlier unread measurements.

A :class:`MeasurementSpec` groups selective outcome maps under a
non-selective parent.  :func:`predict`, :func:`update_state`, and
:func:`run_sequence` chain these into sequential-outcome probabilities with
optional post-selection.  :class:`EvolutionGroup` supplies one-parameter
families of cone automorphisms (permutations of phase-space points, or
unitary conjugation generated by a Hamiltonian).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidEvolutionError,
    NotNormalizedError,
    SpaceMismatchError,
    UnknownOutcomeError,
    ZeroProbabilityError,
)
from .hermitian import (
    coords_to_matrix,
    hermitian_basis,
    matrix_to_coords,
    require_hermitian,
)
from .spaces import (
    DEFAULT_TOL,
    Element,
    ModelSpace,
    inner,
    is_positive,
    require_same_space,
    sample_cone,
    scaled_tol,
    unit_element,
)

SELECTIVITIES = ("selective", "nonselective")
PROVENANCES = ("generic", "kraus", "permutation", "indicator", "unitary", "evolution")

#: Outcome label wildcard: perform the measurement, discard the result.
UNOBSERVED = "unobserved"


@dataclass(frozen=True, eq=False)
class OperationMap:
    """A linear cone-preserving map on one model space.

    ``matrix`` acts on storage coordinates.  ``selectivity`` records the
    intended role ("nonselective" maps must fix the order-unit pairing, see
    :func:`is_nonselective`); ``provenance`` records how the map was built.
    Neither flag is re-derived from the matrix at construction time; numeric
    certification lives in :func:`is_nonselective`,
    :func:`check_positivity_sampled`, and the model-specific checks.
    """

    space: ModelSpace
    matrix: np.ndarray
    selectivity: str = "selective"
    provenance: str = "generic"

    def __post_init__(self) -> None:
        matrix = np.array(self.matrix, dtype=float)
        n = self.space.dim
        if matrix.shape != (n, n):
            raise SpaceMismatchError(
                f"operation matrix shape {matrix.shape} does not fit space "
                f"{self.space.space_id!r} of dimension {n}"
            )
        if self.selectivity not in SELECTIVITIES:
            raise ValueError(f"unknown selectivity {self.selectivity!r}")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    def __repr__(self) -> str:
        return (
            f"OperationMap({self.space.space_id!r}, {self.selectivity}, "
            f"{self.provenance})"
        )


def identity_operation(
    space: ModelSpace, provenance: str = "generic"
) -> OperationMap:
    return OperationMap(space, np.eye(space.dim), "nonselective", provenance)


def apply_operation(op: OperationMap, b: Element) -> Element:
    require_same_space(op.space, b.space)
    return Element(b.space, op.matrix @ b.coords)


def is_nonselective(op: OperationMap, tol: float = DEFAULT_TOL) -> bool:
    """Whether the adjoint of the map fixes the order unit.

    Checks ``M^T g = g`` for ``g = metric @ unit``, which is the matrix form
    of requiring the pairing with ``e`` to be preserved on every element.
    """
    g = op.space.metric @ op.space.unit
    defect = np.abs(op.matrix.T @ g - g).max()
    return bool(defect <= scaled_tol(tol, g))


def conditioned_probability(
    b1: Element,
    b2: Element,
    m_a: OperationMap,
    m_star: OperationMap,
    tol: float = DEFAULT_TOL,
) -> float:
    """Probability of the selective branch given preparation and post-selection.

    Ratio of ``<b2, M_A b1>`` to ``<b2, M_* b1>``.  A vanishing denominator
    means the post-selection is incompatible with the non-selective branch.
    """
    denom = inner(b2, apply_operation(m_star, b1))
    if denom <= scaled_tol(tol, b2.coords):
        raise ZeroProbabilityError(
            "post-selection is incompatible: the non-selective branch has "
            "vanishing overlap with the final boundary condition"
        )
    return inner(b2, apply_operation(m_a, b1)) / denom


@dataclass(frozen=True, eq=False)
class MeasurementSpec:
    """Named selective outcome maps under one non-selective parent."""

    name: str
    outcomes: dict
    parent: OperationMap

    def __post_init__(self) -> None:
        if not self.outcomes:
            raise ValueError(f"measurement {self.name!r} has no outcomes")
        for label, op in self.outcomes.items():
            if not isinstance(label, str):
                raise TypeError("outcome labels must be strings")
            if label == UNOBSERVED:
                raise ValueError(
                    f"outcome label {UNOBSERVED!r} is reserved for discarded results"
                )
            require_same_space(op.space, self.parent.space)
            if op.selectivity != "selective":
                raise ValueError(
                    f"outcome {label!r} of {self.name!r} must be flagged selective"
                )
        if self.parent.selectivity != "nonselective":
            raise ValueError(
                f"parent of measurement {self.name!r} must be flagged nonselective"
            )
        object.__setattr__(self, "outcomes", dict(self.outcomes))

    @property
    def space(self) -> ModelSpace:
        return self.parent.space


def measurement_defects(
    spec: MeasurementSpec,
    completeness_tol: float = 1e-10,
    causality_tol: float = DEFAULT_TOL,
) -> list:
    """Numeric defects of a measurement, as human-readable strings.

    Empty list means the outcome maps sum to the parent and the parent
    fixes the order-unit pairing.
    """
    defects = []
    total = sum(op.matrix for op in spec.outcomes.values())
    gap = np.abs(total - spec.parent.matrix).max()
    if gap > scaled_tol(completeness_tol, spec.parent.matrix):
        defects.append(
            f"outcome maps of {spec.name!r} sum to the parent only up to {gap:.3e}"
        )
    if not is_nonselective(spec.parent, causality_tol):
        defects.append(
            f"parent of {spec.name!r} does not preserve the order-unit pairing"
        )
    return defects


def predict(
    b: Element, spec: MeasurementSpec, outcome: str, tol: float = DEFAULT_TOL
) -> float:
    """Probability of one outcome on a normalized state.

    Evaluates the pairing of the order unit with the selected branch.  The
    state must come in normalized; this function does not renormalize.
    """
    require_same_space(b.space, spec.space)
    total = inner(unit_element(b.space), b)
    if abs(total - 1.0) > max(tol, 1e-9):
        raise NotNormalizedError(
            f"state pairing with the order unit is {total!r}, expected 1"
        )
    try:
        op = spec.outcomes[outcome]
    except KeyError:
        raise UnknownOutcomeError(
            f"unknown outcome {outcome!r} for measurement {spec.name!r}; "
            f"known: {sorted(spec.outcomes)}"
        ) from None
    return inner(unit_element(b.space), apply_operation(op, b))


def update_state(b: Element, m_a: OperationMap, tol: float = DEFAULT_TOL) -> Element:
    """Renormalized state after a selective operation fired."""
    image = apply_operation(m_a, b)
    weight = inner(unit_element(b.space), image)
    if weight <= scaled_tol(tol, b.coords):
        raise ZeroProbabilityError(
            "cannot condition on an outcome of probability zero"
        )
    return Element(b.space, image.coords / weight)


# ---------------------------------------------------------------------------
# evolution groups
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class EvolutionGroup:
    """A one-parameter group of cone automorphisms of one space.

    ``kind`` is ``"permutation"`` (discrete; ``permutation[i]`` is the image
    point of ``i``, integer time steps only) or ``"hamiltonian"`` (continuous;
    unitary conjugation generated by a Hermitian matrix).
    """

    space: ModelSpace
    kind: str
    permutation: np.ndarray | None = None
    hamiltonian: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.kind == "permutation":
            if self.permutation is None:
                raise ValueError("permutation kind requires an image table")
            perm = np.array(self.permutation, dtype=int)
            if self.space.cone_kind != "componentwise":
                raise InvalidEvolutionError(
                    "permutation evolution needs a componentwise space"
                )
            if sorted(perm.tolist()) != list(range(self.space.dim)):
                raise InvalidEvolutionError(
                    "image table is not a permutation of the point indices"
                )
            # the pairing with the order unit must survive the shift, which
            # for g = metric @ unit means g is constant on every orbit
            g = self.space.metric @ self.space.unit
            drift = float(np.abs(g[perm] - g).max())
            if drift > 1e-12 * max(1.0, float(np.abs(g).max())):
                raise InvalidEvolutionError(
                    "permutation does not preserve the reference measure"
                )
            perm.setflags(write=False)
            object.__setattr__(self, "permutation", perm)
        elif self.kind == "hamiltonian":
            if self.hamiltonian is None:
                raise ValueError("hamiltonian kind requires a generator matrix")
            h = require_hermitian(self.hamiltonian)
            if self.space.cone_kind != "psd" or h.shape[0] != self.space.psd_dim:
                raise InvalidEvolutionError(
                    "hamiltonian size does not match the psd space"
                )
            h = h.copy()
            h.setflags(write=False)
            object.__setattr__(self, "hamiltonian", h)
        else:
            raise ValueError(f"unknown evolution kind {self.kind!r}")


def _invert_permutation(perm: np.ndarray) -> np.ndarray:
    inv = np.empty_like(perm)
    inv[perm] = np.arange(perm.size)
    return inv


def _permutation_power(perm: np.ndarray, steps: int) -> np.ndarray:
    result = np.arange(perm.size)
    base = perm if steps >= 0 else _invert_permutation(perm)
    steps = abs(steps)
    while steps:
        if steps & 1:
            result = base[result]
        base = base[base]
        steps >>= 1
    return result


def propagator(hamiltonian: np.ndarray, delta: float) -> np.ndarray:
    """Unitary ``exp(-i * delta * H)`` via Hermitian eigendecomposition."""
    h = require_hermitian(hamiltonian)
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * delta * w)) @ v.conj().T


def evolve(group: EvolutionGroup, delta: float, b: Element) -> Element:
    """Apply the time-``delta`` member of the group to an element."""
    require_same_space(group.space, b.space)
    if group.kind == "permutation":
        steps = int(round(delta))
        if abs(delta - steps) > 1e-9:
            raise InvalidEvolutionError(
                f"permutation evolution needs integer steps, got {delta!r}"
            )
        image_of = _permutation_power(group.permutation, steps)
        out = np.empty_like(b.coords)
        out[image_of] = b.coords
        return Element(b.space, out)
    u = propagator(group.hamiltonian, delta)
    mat = coords_to_matrix(b.coords)
    return Element(b.space, matrix_to_coords(u @ mat @ u.conj().T))


def evolution_operation(group: EvolutionGroup, delta: float) -> OperationMap:
    """The time-``delta`` member of the group as an explicit operation map."""
    if group.kind == "permutation":
        steps = int(round(delta))
        if abs(delta - steps) > 1e-9:
            raise InvalidEvolutionError(
                f"permutation evolution needs integer steps, got {delta!r}"
            )
        image_of = _permutation_power(group.permutation, steps)
        matrix = np.zeros((group.space.dim, group.space.dim))
        matrix[image_of, np.arange(group.space.dim)] = 1.0
    else:
        d = group.space.psd_dim
        u = propagator(group.hamiltonian, delta)
        basis = hermitian_basis(d)
        images = np.einsum("ij,ajk,lk->ail", u, basis, u.conj())
        matrix = np.real(np.einsum("pij,aji->pa", basis, images))
    return OperationMap(group.space, matrix, "nonselective", "evolution")


# ---------------------------------------------------------------------------
# sequential runs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MeasureStep:
    """One measurement in a sequence; ``outcome None`` means unread."""

    spec: MeasurementSpec
    outcome: str | None = None

    def __post_init__(self) -> None:
        if self.outcome == UNOBSERVED:
            object.__setattr__(self, "outcome", None)


@dataclass(frozen=True)
class EvolveStep:
    """Free evolution for a time ``delta`` between measurements."""

    group: EvolutionGroup
    delta: float


@dataclass(frozen=True)
class StepRecord:
    name: str
    outcome: str | None
    conditional_probability: float


@dataclass(frozen=True)
class SequenceResult:
    probability: float
    final_state: Element
    records: tuple


def _coerce_step(step):
    if isinstance(step, (MeasureStep, EvolveStep)):
        return step
    if isinstance(step, tuple) and len(step) == 2 and isinstance(step[0], MeasurementSpec):
        return MeasureStep(step[0], step[1])
    raise TypeError(f"cannot interpret sequence step {step!r}")


def run_sequence(
    b: Element,
    steps,
    post_selection: Element | None = None,
    tol: float = DEFAULT_TOL,
) -> SequenceResult:
    """Chain measurements and evolutions, conditioning on recorded outcomes.

    The total probability is the product of the per-step conditional
    probabilities.  Steps with ``outcome None`` apply the parent map and
    contribute a factor of one.  With post-selection the final factor is the
    ratio of the overlap of the final boundary condition with the selected
    branch to its overlap with the fully non-selective branch, so the total
    remains the joint probability of all recorded outcomes given preparation
    and post-selection.
    """
    total = inner(unit_element(b.space), b)
    if abs(total - 1.0) > max(tol, 1e-9):
        raise NotNormalizedError(
            f"initial state pairing with the order unit is {total!r}, expected 1"
        )
    state = b
    # reference branch with every measurement unread, for the
    # post-selection denominator
    reference = b if post_selection is not None else None
    probability = 1.0
    records = []
    for raw in steps:
        step = _coerce_step(raw)
        if isinstance(step, EvolveStep):
            state = evolve(step.group, step.delta, state)
            if reference is not None:
                reference = evolve(step.group, step.delta, reference)
            records.append(StepRecord("evolve", None, 1.0))
            continue
        spec = step.spec
        if step.outcome is None:
            state = apply_operation(spec.parent, state)
            if reference is not None:
                reference = apply_operation(spec.parent, reference)
            records.append(StepRecord(spec.name, UNOBSERVED, 1.0))
            continue
        p = predict(state, spec, step.outcome, tol)
        if p <= scaled_tol(tol, state.coords):
            raise ZeroProbabilityError(
                f"outcome {step.outcome!r} of measurement {spec.name!r} has "
                "probability zero; cannot condition on it"
            )
        state = update_state(state, spec.outcomes[step.outcome], tol)
        if reference is not None:
            reference = apply_operation(spec.parent, reference)
        probability *= p
        records.append(StepRecord(spec.name, step.outcome, p))
    if post_selection is not None:
        denom = inner(post_selection, reference)
        if denom <= scaled_tol(tol, post_selection.coords):
            raise ZeroProbabilityError(
                "post-selection has vanishing overlap with the non-selective "
                "branch; the conditional probability is undefined"
            )
        factor = inner(post_selection, state) / denom
        probability *= factor
        records.append(StepRecord("post_selection", None, factor))
    return SequenceResult(probability, state, tuple(records))


def check_positivity_sampled(
    op: OperationMap,
    rng: np.random.Generator,
    samples: int = 1000,
    tol: float = DEFAULT_TOL,
) -> bool:
    """Whether the map sends sampled cone elements into the cone."""
    for _ in range(samples):
        x = sample_cone(op.space, rng)
        if not is_positive(apply_operation(op, x), tol):
            return False
    return True
