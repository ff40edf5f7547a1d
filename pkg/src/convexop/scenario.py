"""Declarative scenario files: parsing, validation, execution, reports.

A scenario document describes one experiment: a model (classical phase
space or quantum dimension), an initial state, an optional evolution
generator, an ordered list of measurement and evolution steps, and an
optional post-selection.  Documents are YAML mappings with a strict
schema; unknown fields are rejected.

Complex numbers are written as ``[re, im]`` pairs wherever a matrix or
amplitude entry allows them.  Reports are rendered to a canonical JSON
text with reals at 17 significant digits, so identical documents produce
byte-identical reports.

Measurement forms
-----------------
``observable``      Hermitian matrix; projective outcomes labeled "0", "1",
                    ... in ascending eigenvalue order (quantum).
``projectors``      mapping label -> Hermitian projector (quantum).
``kraus``           mapping label -> list of Kraus matrices (quantum).
``coords_matrix``   mapping label -> real matrix acting on storage
                    coordinates, any model; optional explicit ``parent``.
``subset``          list of point indices; outcomes "in"/"out" (classical).

Without an explicit ``parent`` the parent operation is the sum of the
outcome maps (for ``subset`` it is the identity).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
import yaml

from .classical import (
    PhaseSpace,
    indicator_measurement,
    make_classical_space,
    permutation_evolution,
)
from .errors import (
    ConvexOpError,
    ScenarioSchemaError,
    ScenarioSyntaxError,
    ScenarioValidationError,
)
from .hermitian import require_hermitian
from .operational import (
    UNOBSERVED,
    EvolveStep,
    MeasureStep,
    MeasurementSpec,
    OperationMap,
    is_nonselective,
    run_sequence,
)
from .quantum import (
    KrausSet,
    choi_cp_check,
    from_matrix,
    hamiltonian_evolution,
    kraus_operation,
    make_quantum_space,
    pure_state,
    spectral_measurement,
    to_matrix,
)
from .spaces import (
    DEFAULT_TOL,
    Element,
    inner,
    normalize_state,
    scaled_tol,
    unit_element,
)

MEASURE_FORMS = ("observable", "projectors", "kraus", "coords_matrix", "subset")


# ---------------------------------------------------------------------------
# schema checks (shape and type only; semantics live in bind_scenario)
# ---------------------------------------------------------------------------

def _require_mapping(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise ScenarioSchemaError(
            f"{path}: expected a mapping, got {type(value).__name__}"
        )
    return value


def _require_keys(mapping: dict, path: str, required, optional=()) -> None:
    for key in mapping:
        if key not in required and key not in optional:
            raise ScenarioSchemaError(f"{path}: unknown field {key!r}")
    for key in required:
        if key not in mapping:
            raise ScenarioSchemaError(f"{path}: missing field {key!r}")


def _check_real(value, path: str) -> None:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioSchemaError(f"{path}: expected a real number")
    if not math.isfinite(value):
        raise ScenarioSchemaError(f"{path}: expected a finite number")


def _check_int(value, path: str) -> None:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioSchemaError(f"{path}: expected an integer")


def _check_str(value, path: str) -> None:
    if not isinstance(value, str):
        raise ScenarioSchemaError(f"{path}: expected a string")


def _check_complex(value, path: str) -> None:
    if isinstance(value, list):
        if len(value) != 2:
            raise ScenarioSchemaError(f"{path}: complex entries are [re, im] pairs")
        _check_real(value[0], f"{path}[0]")
        _check_real(value[1], f"{path}[1]")
        return
    _check_real(value, path)


def _check_matrix(value, path: str, complex_ok: bool = True) -> None:
    if not isinstance(value, list) or not value:
        raise ScenarioSchemaError(f"{path}: expected a nonempty list of rows")
    width = None
    for r, row in enumerate(value):
        if not isinstance(row, list) or not row:
            raise ScenarioSchemaError(f"{path}[{r}]: expected a nonempty row")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ScenarioSchemaError(f"{path}[{r}]: rows have unequal lengths")
        for c, entry in enumerate(row):
            if complex_ok:
                _check_complex(entry, f"{path}[{r}][{c}]")
            else:
                _check_real(entry, f"{path}[{r}][{c}]")


def _check_state(value, path: str) -> None:
    state = _require_mapping(value, path)
    forms = [key for key in ("pure", "matrix", "values") if key in state]
    if len(forms) != 1:
        raise ScenarioSchemaError(
            f"{path}: exactly one of 'pure', 'matrix', 'values' is required"
        )
    _require_keys(state, path, required=forms)
    form = forms[0]
    if form == "pure":
        if not isinstance(state["pure"], list) or not state["pure"]:
            raise ScenarioSchemaError(f"{path}.pure: expected a nonempty list")
        for k, entry in enumerate(state["pure"]):
            _check_complex(entry, f"{path}.pure[{k}]")
    elif form == "matrix":
        _check_matrix(state["matrix"], f"{path}.matrix")
    else:
        if not isinstance(state["values"], list) or not state["values"]:
            raise ScenarioSchemaError(f"{path}.values: expected a nonempty list")
        for k, entry in enumerate(state["values"]):
            _check_real(entry, f"{path}.values[{k}]")


def _check_model(value, path: str) -> None:
    model = _require_mapping(value, path)
    kind = model.get("kind")
    if kind == "quantum":
        _require_keys(model, path, required=("kind", "d"))
        _check_int(model["d"], f"{path}.d")
    elif kind == "classical":
        _require_keys(model, path, required=("kind", "n", "mu"))
        _check_int(model["n"], f"{path}.n")
        if not isinstance(model["mu"], list) or not model["mu"]:
            raise ScenarioSchemaError(f"{path}.mu: expected a nonempty list")
        for k, entry in enumerate(model["mu"]):
            _check_real(entry, f"{path}.mu[{k}]")
    else:
        raise ScenarioSchemaError(
            f"{path}.kind: expected 'quantum' or 'classical', got {kind!r}"
        )


def _check_evolution(value, path: str) -> None:
    evolution = _require_mapping(value, path)
    forms = [key for key in ("hamiltonian", "permutation") if key in evolution]
    if len(forms) != 1:
        raise ScenarioSchemaError(
            f"{path}: exactly one of 'hamiltonian', 'permutation' is required"
        )
    _require_keys(evolution, path, required=forms)
    if forms[0] == "hamiltonian":
        _check_matrix(evolution["hamiltonian"], f"{path}.hamiltonian")
    else:
        cycles = evolution["permutation"]
        if not isinstance(cycles, list):
            raise ScenarioSchemaError(f"{path}.permutation: expected a list of cycles")
        for k, cycle in enumerate(cycles):
            if not isinstance(cycle, list) or not cycle:
                raise ScenarioSchemaError(
                    f"{path}.permutation[{k}]: expected a nonempty cycle"
                )
            for j, entry in enumerate(cycle):
                _check_int(entry, f"{path}.permutation[{k}][{j}]")


def _check_measure(value, path: str) -> None:
    measure = _require_mapping(value, path)
    forms = [key for key in MEASURE_FORMS if key in measure]
    if len(forms) != 1:
        raise ScenarioSchemaError(
            f"{path}: exactly one measurement form out of {MEASURE_FORMS} is required"
        )
    form = forms[0]
    optional = ("parent",) if form == "coords_matrix" else ()
    _require_keys(measure, path, required=("name", "outcome", form), optional=optional)
    _check_str(measure["name"], f"{path}.name")
    _check_str(measure["outcome"], f"{path}.outcome")
    if form == "observable":
        _check_matrix(measure["observable"], f"{path}.observable")
    elif form == "projectors":
        table = _require_mapping(measure["projectors"], f"{path}.projectors")
        if not table:
            raise ScenarioSchemaError(f"{path}.projectors: expected at least one outcome")
        for label, mat in table.items():
            _check_str(label, f"{path}.projectors key")
            _check_matrix(mat, f"{path}.projectors[{label!r}]")
    elif form == "kraus":
        table = _require_mapping(measure["kraus"], f"{path}.kraus")
        if not table:
            raise ScenarioSchemaError(f"{path}.kraus: expected at least one outcome")
        for label, mats in table.items():
            _check_str(label, f"{path}.kraus key")
            if not isinstance(mats, list) or not mats:
                raise ScenarioSchemaError(
                    f"{path}.kraus[{label!r}]: expected a nonempty list of matrices"
                )
            for k, mat in enumerate(mats):
                _check_matrix(mat, f"{path}.kraus[{label!r}][{k}]")
    elif form == "coords_matrix":
        table = _require_mapping(measure["coords_matrix"], f"{path}.coords_matrix")
        if not table:
            raise ScenarioSchemaError(
                f"{path}.coords_matrix: expected at least one outcome"
            )
        for label, mat in table.items():
            _check_str(label, f"{path}.coords_matrix key")
            _check_matrix(mat, f"{path}.coords_matrix[{label!r}]", complex_ok=False)
        if "parent" in measure:
            _check_matrix(measure["parent"], f"{path}.parent", complex_ok=False)
    else:
        subset = measure["subset"]
        if not isinstance(subset, list):
            raise ScenarioSchemaError(f"{path}.subset: expected a list of point indices")
        for k, entry in enumerate(subset):
            _check_int(entry, f"{path}.subset[{k}]")


def _check_steps(value, path: str) -> None:
    if not isinstance(value, list):
        raise ScenarioSchemaError(f"{path}: expected a list of steps")
    for k, raw in enumerate(value):
        step = _require_mapping(raw, f"{path}[{k}]")
        if set(step) == {"measure"}:
            _check_measure(step["measure"], f"{path}[{k}].measure")
        elif set(step) == {"evolve"}:
            evolve = _require_mapping(step["evolve"], f"{path}[{k}].evolve")
            _require_keys(evolve, f"{path}[{k}].evolve", required=("delta",))
            _check_real(evolve["delta"], f"{path}[{k}].evolve.delta")
        else:
            raise ScenarioSchemaError(
                f"{path}[{k}]: expected a single 'measure' or 'evolve' field"
            )


# ---------------------------------------------------------------------------
# documents
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScenarioDoc:
    """A schema-checked scenario document, payloads kept as parsed."""

    model: dict
    initial: dict
    steps: tuple
    evolution: dict | None = None
    post_selection: dict | None = None
    seed: int | None = None


def _load_yaml(text: str):
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        problem = getattr(exc, "problem", None) or "malformed document"
        if mark is not None:
            raise ScenarioSyntaxError(problem, mark.line + 1, mark.column + 1) from exc
        raise ScenarioSyntaxError(problem) from exc


def parse_scenario_text(text: str) -> ScenarioDoc:
    """Parse and schema-check a scenario document from a string."""
    raw = _load_yaml(text)
    if raw is None:
        raise ScenarioSchemaError("document is empty")
    root = _require_mapping(raw, "document")
    _require_keys(
        root,
        "document",
        required=("model", "initial", "steps"),
        optional=("evolution", "post_selection", "seed"),
    )
    _check_model(root["model"], "model")
    _check_state(root["initial"], "initial")
    _check_steps(root["steps"], "steps")
    if "evolution" in root:
        _check_evolution(root["evolution"], "evolution")
    if "post_selection" in root:
        _check_state(root["post_selection"], "post_selection")
    if "seed" in root:
        _check_int(root["seed"], "seed")
    return ScenarioDoc(
        model=root["model"],
        initial=root["initial"],
        steps=tuple(root["steps"]),
        evolution=root.get("evolution"),
        post_selection=root.get("post_selection"),
        seed=root.get("seed"),
    )


def parse_scenario(path) -> ScenarioDoc:
    """Parse and schema-check a scenario file."""
    with open(path, "r", encoding="utf-8") as handle:
        return parse_scenario_text(handle.read())


def serialize_scenario(doc: ScenarioDoc) -> str:
    """Canonical text form of a document; parsing it back gives the document."""
    data = {
        "model": doc.model,
        "initial": doc.initial,
    }
    if doc.evolution is not None:
        data["evolution"] = doc.evolution
    data["steps"] = list(doc.steps)
    if doc.post_selection is not None:
        data["post_selection"] = doc.post_selection
    if doc.seed is not None:
        data["seed"] = doc.seed
    return yaml.safe_dump(data, sort_keys=False, default_flow_style=None)


# ---------------------------------------------------------------------------
# binding: from payloads to spaces, elements, and operation maps
# ---------------------------------------------------------------------------

def _to_complex(entry) -> complex:
    if isinstance(entry, list):
        return complex(float(entry[0]), float(entry[1]))
    return complex(float(entry), 0.0)


def _to_complex_matrix(rows) -> np.ndarray:
    return np.array([[_to_complex(e) for e in row] for row in rows], dtype=complex)


def _to_real_matrix(rows) -> np.ndarray:
    return np.array(rows, dtype=float)


@dataclass(frozen=True, eq=False)
class BoundScenario:
    """A document resolved against a concrete model space."""

    doc: ScenarioDoc
    space: object
    kind: str
    initial: Element
    steps: tuple
    post_selection: Element | None
    group: object
    quantum_ops: tuple  # (target label, OperationMap) pairs for cp checks


def _bind_state(space, kind: str, payload: dict, where: str) -> Element:
    if kind == "quantum":
        d = space.psd_dim
        if "values" in payload:
            raise ScenarioValidationError(
                f"{where}: 'values' is a classical state form; use 'pure' or 'matrix'"
            )
        if "pure" in payload:
            amps = np.array([_to_complex(e) for e in payload["pure"]])
            if amps.size != d:
                raise ScenarioValidationError(
                    f"{where}.pure: expected {d} amplitudes, got {amps.size}"
                )
            if float(np.linalg.norm(amps)) <= 1e-12:
                raise ScenarioValidationError(f"{where}.pure: amplitude vector is zero")
            return from_matrix(space, pure_state(amps))
        mat = _to_complex_matrix(payload["matrix"])
        if mat.shape != (d, d):
            raise ScenarioValidationError(
                f"{where}.matrix: expected a {d} by {d} matrix, got {mat.shape}"
            )
        try:
            return from_matrix(space, mat)
        except ValueError as exc:
            raise ScenarioValidationError(f"{where}.matrix: {exc}") from exc
    if "values" not in payload:
        raise ScenarioValidationError(
            f"{where}: classical states use the 'values' form"
        )
    values = np.array(payload["values"], dtype=float)
    if values.size != space.dim:
        raise ScenarioValidationError(
            f"{where}.values: expected {space.dim} entries, got {values.size}"
        )
    return Element(space, values)


def _cycles_to_image(cycles, n: int):
    image = list(range(n))
    seen = set()
    for cycle in cycles:
        for i in cycle:
            if not 0 <= i < n:
                raise ScenarioValidationError(
                    f"evolution.permutation: point index {i} is out of range"
                )
            if i in seen:
                raise ScenarioValidationError(
                    f"evolution.permutation: point {i} appears in two cycles"
                )
            seen.add(i)
        for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
            image[a] = b
    return image


def _bind_evolution(space, kind: str, payload: dict):
    if "hamiltonian" in payload:
        if kind != "quantum":
            raise ScenarioValidationError(
                "evolution.hamiltonian: requires the quantum model"
            )
        h = _to_complex_matrix(payload["hamiltonian"])
        d = space.psd_dim
        if h.shape != (d, d):
            raise ScenarioValidationError(
                f"evolution.hamiltonian: expected a {d} by {d} matrix, got {h.shape}"
            )
        try:
            return hamiltonian_evolution(h, space)
        except (ValueError, ConvexOpError) as exc:
            raise ScenarioValidationError(f"evolution.hamiltonian: {exc}") from exc
    if kind != "classical":
        raise ScenarioValidationError(
            "evolution.permutation: requires the classical model"
        )
    image = _cycles_to_image(payload["permutation"], space.dim)
    try:
        return permutation_evolution(space, image)
    except ConvexOpError as exc:
        raise ScenarioValidationError(f"evolution.permutation: {exc}") from exc


def _bind_measure(space, kind: str, payload: dict, where: str):
    """Build the MeasurementSpec and the outcome label for one measure step."""
    name = payload["name"]
    if "observable" in payload:
        if kind != "quantum":
            raise ScenarioValidationError(
                f"{where}.observable: requires the quantum model"
            )
        obs = _to_complex_matrix(payload["observable"])
        d = space.psd_dim
        if obs.shape != (d, d):
            raise ScenarioValidationError(
                f"{where}.observable: expected a {d} by {d} matrix, got {obs.shape}"
            )
        try:
            spec, _ = spectral_measurement(obs, space=space, name=name)
        except (ValueError, ConvexOpError) as exc:
            raise ScenarioValidationError(f"{where}.observable: {exc}") from exc
        return spec
    if "projectors" in payload or "kraus" in payload:
        if kind != "quantum":
            raise ScenarioValidationError(
                f"{where}: Kraus and projector forms require the quantum model"
            )
        d = space.psd_dim
        table = {}
        source = payload.get("projectors")
        if source is not None:
            families = {label: [mat] for label, mat in source.items()}
        else:
            families = payload["kraus"]
        for label, mats in families.items():
            operators = []
            for mat in mats:
                k = _to_complex_matrix(mat)
                if k.shape != (d, d):
                    raise ScenarioValidationError(
                        f"{where}: operator for outcome {label!r} has shape "
                        f"{k.shape}, expected {d} by {d}"
                    )
                operators.append(k)
            table[label] = kraus_operation(space, KrausSet(tuple(operators)), "selective")
        parent = OperationMap(
            space,
            np.sum([op.matrix for op in table.values()], axis=0),
            "nonselective",
            "kraus",
        )
        try:
            return MeasurementSpec(name=name, outcomes=table, parent=parent)
        except (ValueError, TypeError) as exc:
            raise ScenarioValidationError(f"{where}: {exc}") from exc
    if "coords_matrix" in payload:
        table = {}
        for label, rows in payload["coords_matrix"].items():
            mat = _to_real_matrix(rows)
            if mat.shape != (space.dim, space.dim):
                raise ScenarioValidationError(
                    f"{where}.coords_matrix[{label!r}]: expected a {space.dim} by "
                    f"{space.dim} matrix, got {mat.shape}"
                )
            table[label] = OperationMap(space, mat, "selective", "generic")
        if "parent" in payload:
            parent_mat = _to_real_matrix(payload["parent"])
            if parent_mat.shape != (space.dim, space.dim):
                raise ScenarioValidationError(
                    f"{where}.parent: expected a {space.dim} by {space.dim} matrix"
                )
        else:
            parent_mat = np.sum([op.matrix for op in table.values()], axis=0)
        parent = OperationMap(space, parent_mat, "nonselective", "generic")
        try:
            return MeasurementSpec(name=name, outcomes=table, parent=parent)
        except (ValueError, TypeError) as exc:
            raise ScenarioValidationError(f"{where}: {exc}") from exc
    # subset form
    if kind != "classical":
        raise ScenarioValidationError(f"{where}.subset: requires the classical model")
    try:
        return indicator_measurement(space, payload["subset"], name=name)
    except ValueError as exc:
        raise ScenarioValidationError(f"{where}.subset: {exc}") from exc


def bind_scenario(doc: ScenarioDoc, tol: float = DEFAULT_TOL) -> BoundScenario:
    """Resolve a document against a concrete space; semantic errors raise."""
    model = doc.model
    kind = model["kind"]
    if kind == "quantum":
        d = model["d"]
        if d < 1:
            raise ScenarioValidationError("model.d: dimension must be positive")
        space = make_quantum_space(d)
    else:
        n = model["n"]
        mu = np.array(model["mu"], dtype=float)
        if n < 1:
            raise ScenarioValidationError("model.n: need at least one point")
        if mu.size != n:
            raise ScenarioValidationError(
                f"model.mu: expected {n} entries, got {mu.size}"
            )
        if float(mu.min()) <= 0.0:
            raise ScenarioValidationError("model.mu: measure entries must be positive")
        space = make_classical_space(PhaseSpace(n, mu))

    initial = _bind_state(space, kind, doc.initial, "initial")
    group = None
    if doc.evolution is not None:
        group = _bind_evolution(space, kind, doc.evolution)

    steps = []
    quantum_ops = []
    for k, raw in enumerate(doc.steps):
        where = f"steps[{k}]"
        if "evolve" in raw:
            if group is None:
                raise ScenarioValidationError(
                    f"{where}.evolve: the document declares no evolution"
                )
            steps.append(EvolveStep(group, float(raw["evolve"]["delta"])))
            continue
        payload = raw["measure"]
        spec = _bind_measure(space, kind, payload, f"{where}.measure")
        outcome = payload["outcome"]
        if outcome != UNOBSERVED and outcome not in spec.outcomes:
            raise ScenarioValidationError(
                f"{where}.measure: unknown outcome {outcome!r}; known: "
                f"{sorted(spec.outcomes)} or {UNOBSERVED!r}"
            )
        steps.append(MeasureStep(spec, outcome))
        if kind == "quantum":
            for label, op in spec.outcomes.items():
                quantum_ops.append((f"{spec.name}:{label}", op))
            quantum_ops.append((f"{spec.name}:parent", spec.parent))

    post = None
    if doc.post_selection is not None:
        post = _bind_state(space, kind, doc.post_selection, "post_selection")

    return BoundScenario(
        doc=doc,
        space=space,
        kind=kind,
        initial=initial,
        steps=tuple(steps),
        post_selection=post,
        group=group,
        quantum_ops=tuple(quantum_ops),
    )


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    check: str
    target: str
    passed: bool
    detail: str


def _cone_check(element: Element, target: str, tol: float) -> CheckResult:
    if element.space.cone_kind == "psd":
        low = float(np.linalg.eigvalsh(to_matrix(element)).min())
        detail = f"min eigenvalue {low:.6e}"
    else:
        low = float(element.coords.min())
        detail = f"min value {low:.6e}"
    return CheckResult(
        "cone_membership", target, low >= -scaled_tol(tol, element.coords), detail
    )


def validate_scenario(source, tol: float = DEFAULT_TOL) -> tuple:
    """Run the physicality checks; returns all results, pass or fail.

    Checks: cone membership and normalizability of the initial state (and
    post-selection, if any), completeness of every measurement against its
    parent, the order-unit normalization of every parent, and complete
    positivity of every quantum operation.
    """
    bound = source if isinstance(source, BoundScenario) else bind_scenario(source, tol)
    checks = [_cone_check(bound.initial, "initial", tol)]
    total = inner(unit_element(bound.space), bound.initial)
    checks.append(
        CheckResult(
            "normalizable",
            "initial",
            total > scaled_tol(tol, bound.initial.coords),
            f"order-unit pairing {total:.6e}",
        )
    )
    seen = set()
    for step in bound.steps:
        if not isinstance(step, MeasureStep) or id(step.spec) in seen:
            continue
        seen.add(id(step.spec))
        spec = step.spec
        summed = np.sum([op.matrix for op in spec.outcomes.values()], axis=0)
        gap = float(np.abs(summed - spec.parent.matrix).max())
        checks.append(
            CheckResult(
                "completeness",
                spec.name,
                gap <= scaled_tol(tol, spec.parent.matrix),
                f"max deviation {gap:.6e}",
            )
        )
        g = spec.space.metric @ spec.space.unit
        defect = float(np.abs(spec.parent.matrix.T @ g - g).max())
        checks.append(
            CheckResult(
                "causality",
                spec.name,
                is_nonselective(spec.parent, tol),
                f"order-unit defect {defect:.6e}",
            )
        )
    for target, op in bound.quantum_ops:
        report = choi_cp_check(op, tol)
        checks.append(
            CheckResult(
                "complete_positivity",
                target,
                report.is_cp,
                f"min Choi eigenvalue {report.min_eigenvalue:.6e}",
            )
        )
    if bound.post_selection is not None:
        checks.append(_cone_check(bound.post_selection, "post_selection", tol))
    return tuple(checks)


# ---------------------------------------------------------------------------
# execution and reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RunReport:
    """Plain serializable run result; see :func:`render_report`."""

    probability: float
    per_step: tuple
    final_state: dict
    validation: tuple


def _serialize_state(space, element: Element) -> dict:
    if space.cone_kind == "psd":
        mat = to_matrix(element)
        return {
            "kind": "quantum",
            "d": int(space.psd_dim),
            "matrix": [
                [[float(z.real), float(z.imag)] for z in row] for row in mat
            ],
        }
    return {
        "kind": "classical",
        "n": int(space.dim),
        "values": [float(v) for v in element.coords],
    }


def _serialize_checks(checks) -> tuple:
    return tuple(
        {
            "check": c.check,
            "target": c.target,
            "passed": bool(c.passed),
            "detail": c.detail,
        }
        for c in checks
    )


def run_scenario(doc: ScenarioDoc, tol: float = DEFAULT_TOL) -> RunReport:
    """Validate and execute a document.

    The initial state (and nothing else) is normalized automatically, so
    documents may give unnormalized cone elements such as plain weights.
    Any validation failure aborts the run.
    """
    bound = bind_scenario(doc, tol)
    checks = validate_scenario(bound, tol)
    failed = [c for c in checks if not c.passed]
    if failed:
        summary = "; ".join(f"{c.check} on {c.target!r} ({c.detail})" for c in failed)
        raise ScenarioValidationError(f"validation failed: {summary}", checks)
    initial = normalize_state(bound.initial, tol)
    result = run_sequence(initial, bound.steps, bound.post_selection, tol)
    per_step = tuple(
        {
            "name": r.name,
            "outcome": r.outcome,
            "conditional_probability": float(r.conditional_probability),
        }
        for r in result.records
    )
    return RunReport(
        probability=float(result.probability),
        per_step=per_step,
        final_state=_serialize_state(bound.space, result.final_state),
        validation=_serialize_checks(checks),
    )


# ---------------------------------------------------------------------------
# canonical JSON rendering
# ---------------------------------------------------------------------------

def _format_real(x: float) -> str:
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        raise ValueError("reports only carry finite reals")
    if x == 0.0:
        x = 0.0  # normalize the sign of zero
    return format(x, ".17g")


def _render_scalar(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return _format_real(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return json.dumps(value)
    raise TypeError(f"cannot render {type(value).__name__} in a report")


def _is_scalar(value) -> bool:
    return value is None or isinstance(value, (bool, int, float, str, np.integer))


def _render(value, indent: int) -> str:
    pad = " " * indent
    if isinstance(value, dict):
        if not value:
            return "{}"
        rows = ",\n".join(
            f"{pad}  {json.dumps(str(k))}: {_render(v, indent + 2)}"
            for k, v in value.items()
        )
        return "{\n" + rows + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        items = list(value)
        if not items:
            return "[]"
        if all(_is_scalar(v) for v in items):
            return "[" + ", ".join(_render_scalar(v) for v in items) + "]"
        if all(
            isinstance(v, (list, tuple)) and all(_is_scalar(e) for e in v)
            for v in items
        ):
            inner_rows = ", ".join(
                "[" + ", ".join(_render_scalar(e) for e in v) + "]" for v in items
            )
            return "[" + inner_rows + "]"
        rows = ",\n".join(f"{pad}  {_render(v, indent + 2)}" for v in items)
        return "[\n" + rows + "\n" + pad + "]"
    return _render_scalar(value)


def render_json(value) -> str:
    """Canonical report text: fixed layout, reals at 17 significant digits."""
    return _render(value, 0) + "\n"


def render_report(report: RunReport) -> str:
    return render_json(
        {
            "probability": report.probability,
            "per_step": list(report.per_step),
            "final_state": report.final_state,
            "validation": list(report.validation),
        }
    )


def render_validation(checks) -> str:
    return render_json({"validation": list(_serialize_checks(checks))})


# ---------------------------------------------------------------------------
# witness input files
# ---------------------------------------------------------------------------

def parse_witness_text(text: str) -> tuple:
    """Parse a witness input: a mapping with Hermitian matrices 'A' and 'B'."""
    raw = _load_yaml(text)
    if raw is None:
        raise ScenarioSchemaError("document is empty")
    root = _require_mapping(raw, "document")
    _require_keys(root, "document", required=("A", "B"))
    _check_matrix(root["A"], "A")
    _check_matrix(root["B"], "B")
    out = []
    for key in ("A", "B"):
        mat = _to_complex_matrix(root[key])
        try:
            out.append(require_hermitian(mat))
        except ValueError as exc:
            raise ScenarioValidationError(f"{key}: {exc}") from exc
    return tuple(out)


def parse_witness_file(path) -> tuple:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_witness_text(handle.read())


def _serialize_complex_matrix(mat) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(mat)]


def render_witness(result) -> str:
    """Canonical report for an anti-lattice witness search."""
    data = {
        "comparable": bool(result.comparable),
        "relation": result.relation,
        "c1": None if result.c1 is None else _serialize_complex_matrix(result.c1),
        "c2": None if result.c2 is None else _serialize_complex_matrix(result.c2),
        "dominator_found": result.dominator is not None,
        "dominator": (
            None
            if result.dominator is None
            else _serialize_complex_matrix(result.dominator)
        ),
        "grid_step": float(result.grid_step),
    }
    return render_json(data)
