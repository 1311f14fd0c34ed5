"""Declarative job files: strict parsing, dispatch, deterministic reports.

A job file is a JSON object with a versioned schema tag.  Validation is
strict: unknown fields are rejected at every level, matrices are flat
row-major integer lists reduced mod p on ingestion, and every shape is
checked before any computation starts.  Reports render to text or CSV
with no environment-dependent content, so identical jobs produce
identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from fhcalc import fdalg
from fhcalc.errors import ComputationGuardError, JobValidationError
from fhcalc.fdalg import FDAlgebra, FDModule
from fhcalc.functor_calc import (
    gl_homology,
    grid_from_additive,
    schur_apply,
    schur_of_stable_tor,
    stable_ext,
    stable_tor,
    tensor_tor,
    tor_table_grid,
)
from fhcalc.graded import GradedSpace, space
from fhcalc.gf_linalg import is_prime
from fhcalc.symgrp import (
    GroupRepresentation,
    composition,
    sign_representation,
    standard_representation,
    trivial_representation,
)

SCHEMA_TAG = "fhcalc/1"
MAX_TRUNCATION = 64

TASKS = (
    "module-tor",
    "module-ext",
    "hochschild",
    "stable-tor",
    "psi-ext",
    "tensor-functor",
    "schur",
    "example-C",
    "gl-homology",
    "verify",
)

FORMATS = ("text", "csv")

MODULE_PRESETS = ("trivial", "regular", "simple(i)")
REPRESENTATION_PRESETS = ("trivial", "sign", "standard(d)")


# ------------------------------------------------------------ field access


def _check_keys(obj: dict, path: str, required: tuple, optional: tuple = ()) -> None:
    for key in required:
        if key not in obj:
            raise JobValidationError(f"{path}: missing field {key!r}")
    for key in obj:
        if key not in required and key not in optional:
            raise JobValidationError(f"{path}: unknown field {key!r}")


def _get_int(obj: dict, key: str, path: str, lo: int, hi: int) -> int:
    val = obj[key]
    if not isinstance(val, int) or isinstance(val, bool):
        raise JobValidationError(f"{path}.{key}: expected an integer, got {val!r}")
    if not lo <= val <= hi:
        raise JobValidationError(f"{path}.{key}: {val} outside [{lo}, {hi}]")
    return val


def _get_bool(obj: dict, key: str, path: str, default: bool) -> bool:
    if key not in obj:
        return default
    val = obj[key]
    if not isinstance(val, bool):
        raise JobValidationError(f"{path}.{key}: expected a boolean, got {val!r}")
    return val


def _get_str(obj: dict, key: str, path: str, choices: tuple | None = None) -> str:
    val = obj[key]
    if not isinstance(val, str):
        raise JobValidationError(f"{path}.{key}: expected a string, got {val!r}")
    if choices is not None and val not in choices:
        raise JobValidationError(
            f"{path}.{key}: {val!r} is not one of {', '.join(choices)}"
        )
    return val


def _int_list(val, path: str) -> list[int]:
    if not isinstance(val, list) or any(
        not isinstance(x, int) or isinstance(x, bool) for x in val
    ):
        raise JobValidationError(f"{path}: expected a list of integers")
    return list(val)


def _flat_matrix(val, rows: int, cols: int, p: int, path: str) -> np.ndarray:
    entries = _int_list(val, path)
    if len(entries) != rows * cols:
        raise JobValidationError(
            f"{path}: expected {rows * cols} entries ({rows}x{cols} row-major), "
            f"got {len(entries)}"
        )
    return np.array(entries, dtype=np.int64).reshape(rows, cols) % p


def _preset_call(text: str, path: str) -> tuple[str, list[int]]:
    """Parse 'name' or 'name(a, b)' with integer arguments."""
    text = text.strip()
    if "(" not in text:
        return text, []
    if not text.endswith(")"):
        raise JobValidationError(f"{path}: malformed preset call {text!r}")
    name, _, inner = text[:-1].partition("(")
    args = []
    for piece in inner.split(","):
        piece = piece.strip()
        if not piece or not (piece.isdigit() or (piece[0] == "-" and piece[1:].isdigit())):
            raise JobValidationError(f"{path}: bad preset argument {piece!r} in {text!r}")
        args.append(int(piece))
    return name.strip(), args


# --------------------------------------------------------------- payloads


_ALGEBRA_BUILDERS = {
    "field": (fdalg.field, 1),
    "truncated_poly": (fdalg.truncated_poly, 2),
    "dual_numbers": (fdalg.dual_numbers, 1),
    "group_algebra_cyclic": (fdalg.group_algebra_cyclic, 2),
    "product_fields": (fdalg.product_fields, 2),
    "gf4_over_gf2": (fdalg.gf4_over_gf2, 0),
}


def parse_algebra(payload, p: int, path: str) -> FDAlgebra:
    """Named preset string or explicit structure constants."""
    if isinstance(payload, str):
        name, args = _preset_call(payload, path)
        if name not in _ALGEBRA_BUILDERS:
            raise JobValidationError(
                f"{path}: unknown algebra preset {name!r}; known: "
                + ", ".join(sorted(_ALGEBRA_BUILDERS))
            )
        builder, arity = _ALGEBRA_BUILDERS[name]
        if len(args) != arity:
            raise JobValidationError(
                f"{path}: preset {name!r} takes {arity} argument(s), got {len(args)}"
            )
        try:
            algebra = builder(*args)
        except (ValueError, ComputationGuardError) as exc:
            raise JobValidationError(f"{path}: {exc}") from exc
        if algebra.p != p:
            raise JobValidationError(
                f"{path}: preset {payload!r} lives over GF({algebra.p}), job says p={p}"
            )
        return algebra
    if not isinstance(payload, dict):
        raise JobValidationError(f"{path}: expected a preset string or an object")
    _check_keys(payload, path, ("dim", "structure_constants", "unit"), ("augmentation",))
    dim = _get_int(payload, "dim", path, 1, fdalg.MAX_ALGEBRA_DIM)
    cube = _flat_matrix(
        payload["structure_constants"], dim * dim, dim, p, f"{path}.structure_constants"
    ).reshape(dim, dim, dim)
    unit = _flat_matrix(payload["unit"], 1, dim, p, f"{path}.unit")[0]
    aug = None
    if "augmentation" in payload:
        aug = _flat_matrix(payload["augmentation"], 1, dim, p, f"{path}.augmentation")[0]
    try:
        return FDAlgebra(p, cube, unit, aug)
    except ValueError as exc:
        raise JobValidationError(f"{path}: {exc}") from exc


def parse_module(payload, algebra: FDAlgebra, side: str, path: str) -> FDModule:
    """Named module preset or explicit action matrices (one per basis
    element of the algebra, row-major)."""
    try:
        if isinstance(payload, str):
            name, args = _preset_call(payload, path)
            if name == "trivial" and not args:
                return fdalg.trivial_module(algebra, side)
            if name == "regular" and not args:
                return fdalg.regular_module(algebra, side)
            if name == "simple" and len(args) == 1:
                return fdalg.simple_module(algebra, args[0], side)
            raise JobValidationError(
                f"{path}: unknown module preset {payload!r}; known: "
                + ", ".join(MODULE_PRESETS)
            )
        if not isinstance(payload, dict):
            raise JobValidationError(f"{path}: expected a preset string or an object")
        _check_keys(payload, path, ("dim", "action"))
        dim = _get_int(payload, "dim", path, 0, 4096)
        mats = payload["action"]
        if not isinstance(mats, list) or len(mats) != algebra.dim:
            raise JobValidationError(
                f"{path}.action: expected {algebra.dim} matrices, one per basis element"
            )
        action = [
            _flat_matrix(m, dim, dim, algebra.p, f"{path}.action[{i}]")
            for i, m in enumerate(mats)
        ]
        return fdalg.module_from_action(algebra, side, action)
    except ValueError as exc:
        raise JobValidationError(f"{path}: {exc}") from exc


def parse_representation(payload, p: int, path: str) -> GroupRepresentation:
    """Preset with block sizes, or explicit generator matrices (one per
    adjacent swap, listed block by block)."""
    if not isinstance(payload, dict):
        raise JobValidationError(f"{path}: expected an object")
    try:
        if "preset" in payload:
            _check_keys(payload, path, ("preset", "blocks"))
            blocks = _int_list(payload["blocks"], f"{path}.blocks")
            comp = composition(blocks)
            name, args = _preset_call(_get_str(payload, "preset", path), f"{path}.preset")
            if name == "trivial" and not args:
                return trivial_representation(comp, p)
            if name == "sign" and not args:
                return sign_representation(comp, p)
            if name == "standard" and len(args) == 1:
                if blocks != [args[0]]:
                    raise JobValidationError(
                        f"{path}: standard({args[0]}) needs blocks [{args[0]}], "
                        f"got {blocks}"
                    )
                return standard_representation(args[0], p)
            raise JobValidationError(
                f"{path}.preset: unknown preset; known: "
                + ", ".join(REPRESENTATION_PRESETS)
            )
        _check_keys(payload, path, ("blocks", "dim", "generators"))
        blocks = _int_list(payload["blocks"], f"{path}.blocks")
        comp = composition(blocks)
        dim = _get_int(payload, "dim", path, 0, 4096)
        gens = payload["generators"]
        n_gens = len(comp.coxeter_positions())
        if not isinstance(gens, list) or len(gens) != n_gens:
            raise JobValidationError(
                f"{path}.generators: expected {n_gens} matrices (one per adjacent swap)"
            )
        mats = tuple(
            _flat_matrix(g, dim, dim, p, f"{path}.generators[{i}]")
            for i, g in enumerate(gens)
        )
        return GroupRepresentation((comp,), p, dim, mats)
    except ValueError as exc:
        raise JobValidationError(f"{path}: {exc}") from exc


def parse_table(payload, truncation: int, path: str) -> GradedSpace:
    """Graded-space literal: dimensions from degree 0, padded to the
    job truncation."""
    dims = _int_list(payload, path)
    if len(dims) > truncation + 1:
        raise JobValidationError(
            f"{path}: {len(dims)} entries exceed truncation {truncation}"
        )
    if any(d < 0 for d in dims):
        raise JobValidationError(f"{path}: dimensions must be nonnegative")
    return space(dims, truncation=truncation)


# ----------------------------------------------------------------- JobSpec


@dataclass(frozen=True)
class JobSpec:
    """A validated job: field, task, truncation, format, parsed payload."""

    p: int
    task: str
    truncation: int
    fmt: str
    data: dict = field(compare=False)


_TASK_FIELDS = {
    "module-tor": (("algebra", "module_m", "module_n"), ("minimize", "resolve")),
    "module-ext": (("algebra", "module_m", "module_n"), ("minimize",)),
    "hochschild": (("algebra",), ()),
    "stable-tor": (("additive",), ()),
    "psi-ext": (("additive", "rank"), ()),
    "tensor-functor": (("grid", "u", "v"), ("grid_kind", "assume_projective")),
    "schur": (("rep", "table"), ("assume_projective",)),
    "example-C": (("additive", "rep"), ("assume_projective",)),
    "gl-homology": (("coefficients", "tor"), ()),
    "verify": (("suite",), ()),
}


def parse_job(doc: object, path: str = "job") -> JobSpec:
    """Validate one JSON document into a JobSpec; strict on every field."""
    if not isinstance(doc, dict):
        raise JobValidationError(f"{path}: job file must hold a JSON object")
    if doc.get("schema") != SCHEMA_TAG:
        raise JobValidationError(
            f"{path}.schema: expected {SCHEMA_TAG!r}, got {doc.get('schema')!r}"
        )
    if "task" not in doc:
        raise JobValidationError(f"{path}: missing field 'task'")
    task = _get_str(doc, "task", path, TASKS)
    required = ("schema", "p", "task", "truncation")
    known_payload = _TASK_FIELDS[task]
    _check_keys(
        doc, path, required, ("format",) + known_payload[0] + known_payload[1]
    )
    p = _get_int(doc, "p", path, 2, 1 << 16)
    if not is_prime(p):
        raise JobValidationError(f"{path}.p: {p} is not prime")
    truncation = _get_int(doc, "truncation", path, 0, MAX_TRUNCATION)
    fmt = _get_str(doc, "format", path, FORMATS) if "format" in doc else "text"
    for key in known_payload[0]:
        if key not in doc:
            raise JobValidationError(f"{path}: task {task!r} needs field {key!r}")

    data: dict = {}
    if task in ("module-tor", "module-ext"):
        algebra = parse_algebra(doc["algebra"], p, f"{path}.algebra")
        sides = ("right", "left") if task == "module-tor" else ("right", "right")
        data["algebra"] = algebra
        data["module_m"] = parse_module(
            doc["module_m"], algebra, sides[0], f"{path}.module_m"
        )
        data["module_n"] = parse_module(
            doc["module_n"], algebra, sides[1], f"{path}.module_n"
        )
        data["minimize"] = _get_bool(doc, "minimize", path, True)
        if task == "module-tor":
            data["resolve"] = (
                _get_str(doc, "resolve", path, ("first", "second"))
                if "resolve" in doc
                else "first"
            )
    elif task == "hochschild":
        data["algebra"] = parse_algebra(doc["algebra"], p, f"{path}.algebra")
    elif task == "stable-tor":
        data["additive"] = parse_table(doc["additive"], truncation, f"{path}.additive")
    elif task == "psi-ext":
        data["additive"] = parse_table(doc["additive"], truncation, f"{path}.additive")
        if doc["rank"] is None:
            data["rank"] = None
        else:
            data["rank"] = _get_int(doc, "rank", path, 0, 64)
    elif task == "tensor-functor":
        rows = doc["grid"]
        if not isinstance(rows, list) or not rows or not isinstance(rows[0], list):
            raise JobValidationError(f"{path}.grid: expected a list of rows of tables")
        entries = [
            [
                parse_table(cell, truncation, f"{path}.grid[{i}][{j}]")
                for j, cell in enumerate(row)
            ]
            for i, row in enumerate(rows)
        ]
        kind = (
            _get_str(doc, "grid_kind", path, ("full", "additive"))
            if "grid_kind" in doc
            else "full"
        )
        try:
            grid = tor_table_grid(entries) if kind == "full" else grid_from_additive(entries)
        except ValueError as exc:
            raise JobValidationError(f"{path}.grid: {exc}") from exc
        u = parse_representation(doc["u"], p, f"{path}.u")
        v = parse_representation(doc["v"], p, f"{path}.v")
        if len(u.compositions) != 1 or u.compositions[0].total != grid.d:
            raise JobValidationError(
                f"{path}.u: must act on the {grid.d} grid rows"
            )
        if len(v.compositions) != 1 or v.compositions[0].total != grid.e:
            raise JobValidationError(
                f"{path}.v: must act on the {grid.e} grid columns"
            )
        data["grid"], data["u"], data["v"] = grid, u, v
        data["assume_projective"] = _get_bool(doc, "assume_projective", path, False)
    elif task == "schur":
        data["rep"] = parse_representation(doc["rep"], p, f"{path}.rep")
        data["table"] = parse_table(doc["table"], truncation, f"{path}.table")
        data["assume_projective"] = _get_bool(doc, "assume_projective", path, False)
    elif task == "example-C":
        data["additive"] = parse_table(doc["additive"], truncation, f"{path}.additive")
        data["rep"] = parse_representation(doc["rep"], p, f"{path}.rep")
        data["assume_projective"] = _get_bool(doc, "assume_projective", path, False)
    elif task == "gl-homology":
        data["coefficients"] = parse_table(
            doc["coefficients"], truncation, f"{path}.coefficients"
        )
        data["tor"] = parse_table(doc["tor"], truncation, f"{path}.tor")
    elif task == "verify":
        from fhcalc.verify import SUITES

        data["suite"] = _get_str(doc, "suite", path, tuple(SUITES) + ("all",))
    return JobSpec(p, task, truncation, fmt, data)


def load_job(path: str) -> JobSpec:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise JobValidationError(f"{path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise JobValidationError(f"{path}: invalid JSON: {exc}") from exc
    return parse_job(doc, path=path)


# ------------------------------------------------------------------ reports


@dataclass(frozen=True)
class Report:
    """Deterministic result of one job."""

    task: str
    p: int
    truncation: int
    fmt: str
    dims: GradedSpace | None
    provenance: tuple[str, ...]
    hypotheses: tuple[str, ...]
    checks: tuple = ()

    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def run_job(spec: JobSpec, *, assume_projective: bool = False) -> Report:
    """Execute a validated job.  Guard refusals propagate unchanged;
    residual input inconsistencies surface as validation errors."""
    data = spec.data
    D = spec.truncation
    hyp: list[str] = []
    flag = assume_projective or bool(data.get("assume_projective"))
    if flag:
        hyp.append("assume-projective: inputs asserted projective, transfer guard skipped")
    try:
        if spec.task == "module-tor":
            dims = fdalg.tor(
                data["module_m"],
                data["module_n"],
                D,
                minimize=data["minimize"],
                resolve_argument=data["resolve"],
            )
            prov = (
                f"free resolution of the {data['resolve']} argument"
                + (" (minimized)" if data["minimize"] else " (non-minimal)"),
                "homology of the tensored complex; balance holds for either argument",
            )
        elif spec.task == "module-ext":
            dims = fdalg.ext(
                data["module_m"], data["module_n"], D, minimize=data["minimize"]
            )
            prov = (
                "free resolution of the first argument"
                + (" (minimized)" if data["minimize"] else " (non-minimal)"),
                "cohomology of the Hom cochain complex",
            )
        elif spec.task == "hochschild":
            dims = fdalg.hochschild(data["algebra"], D)
            prov = (
                "Tor over the enveloping algebra with bimodule coefficients",
                "resolution minimized internally to bound rank growth",
            )
        elif spec.task == "stable-tor":
            dims = stable_tor(data["additive"])
            prov = (
                "stable Tor multiplier identity: convolution of the additive "
                "table with the even-degree series of ones",
            )
        elif spec.task == "psi-ext":
            dims = stable_ext(data["additive"], spec.p, data["rank"])
            rk = "unbounded" if data["rank"] is None else str(data["rank"])
            prov = (
                "stable Ext multiplier identity: convolution with the monomial "
                f"count of the truncated polynomial algebra (rank {rk})",
            )
        elif spec.task == "tensor-functor":
            dims = tensor_tor(data["grid"], data["u"], data["v"], assume_projective=flag)
            prov = (
                "coinvariants of the permutation-twisted block tensor module",
                "vanishing for unequal arities; degree-0 cross-checked densely",
            )
        elif spec.task == "schur":
            dims = schur_apply(data["rep"], data["table"], assume_projective=flag)
            prov = (
                "Koszul-signed coinvariants of the tensor power against the twist",
            )
        elif spec.task == "example-C":
            dims = schur_of_stable_tor(
                data["additive"], data["rep"], assume_projective=flag
            )
            prov = (
                "even-multiplier convolution of the additive table, then "
                "Koszul-signed coinvariants of its tensor power",
            )
        elif spec.task == "gl-homology":
            dims = gl_homology(data["coefficients"], data["tor"])
            prov = (
                "stable general-linear factorization: coefficient homology "
                "convolved with the Tor table",
            )
        elif spec.task == "verify":
            from fhcalc.verify import run_suite

            checks = run_suite(data["suite"])
            return Report(
                spec.task,
                spec.p,
                D,
                spec.fmt,
                None,
                (f"built-in verification suite {data['suite']!r}",),
                tuple(hyp),
                tuple(checks),
            )
        else:  # pragma: no cover - parse_job pins the task list
            raise JobValidationError(f"unhandled task {spec.task!r}")
    except ValueError as exc:
        raise JobValidationError(f"job payload rejected: {exc}") from exc
    return Report(spec.task, spec.p, D, spec.fmt, dims, prov, tuple(hyp))


def render_csv(report: Report) -> str:
    if report.dims is None:
        raise JobValidationError("verify reports have no CSV form")
    return report.dims.csv_text()


def render_text(report: Report) -> str:
    lines = [
        "fhcalc report",
        f"schema: {SCHEMA_TAG}",
        f"task: {report.task}",
        f"p: {report.p}",
        f"truncation: {report.truncation}",
        "provenance:",
    ]
    lines.extend(f"  - {line}" for line in report.provenance)
    if report.hypotheses:
        lines.append("hypotheses:")
        lines.extend(f"  - {line}" for line in report.hypotheses)
    else:
        lines.append("hypotheses: none")
    if report.checks:
        lines.append("checks:")
        for check in report.checks:
            status = "pass" if check.passed else "FAIL"
            lines.append(f"  {status}  {check.name}")
            if check.detail and not check.passed:
                lines.append(f"        {check.detail}")
        n_pass = sum(1 for c in report.checks if c.passed)
        lines.append(
            f"result: {'pass' if report.passed() else 'FAIL'} "
            f"({n_pass}/{len(report.checks)} checks)"
        )
    if report.dims is not None:
        lines.append("dimension table:")
        lines.extend(
            f"  {n},{d}" for n, d in enumerate(report.dims.dims)
        )
        lines.append(f"poincare: {report.dims.poincare_series()}")
        lines.append(f"total dimension: {report.dims.total_dim()}")
    return "\n".join(lines) + "\n"


def render(report: Report, fmt: str | None = None) -> str:
    fmt = fmt or report.fmt
    if fmt == "csv":
        return render_csv(report)
    return render_text(report)
