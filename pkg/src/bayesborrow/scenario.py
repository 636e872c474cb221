"""Scenario files: the JSON schema shared by the CLI, the service and the UI.

Schema (version 1)::

    {
      "schema_version": 1,
      "notes": "optional free text",
      "sources": [{"id": str, "theta": num, "tau_sq": num > 0, "w": num in [0,1]}, ...],
      "hyper": {"a01": num, "b01": num, "a02": num, "b02": num, "c0": num | null},
      "design": {"delta": num > 0, "R": num in (0,1), "eta": num, "zeta": num,
                 "sigma0_sq": num?, "mu0": num?, "s0_sq": num?, "alpha": num?, "beta": num?},
      "endpoint": {"model": "normal" | "binary_two_arm" | "time_to_event" | "single_arm_binary", ...},
      "simulation": {"true_mu_delta": num, "replicates": int, "seed": int}?   // optional
    }

Validation accumulates every problem (with its field path) instead of
stopping at the first; line/column positions are only available for JSON
syntax errors because the stdlib parser does not expose node positions.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any

from .borrowing import HistoricalSource, WeightVector
from .design import (
    BinaryTwoArmEndpoint,
    DesignParams,
    EndpointModel,
    NormalEndpoint,
    SingleArmBinaryEndpoint,
    TimeToEventEndpoint,
)
from .stats import GammaMixtureHyperparams

SCHEMA_VERSION = 1

_ENDPOINT_MODELS = ("normal", "binary_two_arm", "time_to_event", "single_arm_binary")


@dataclass(frozen=True)
class FieldError:
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.message}"


class ScenarioValidationError(ValueError):
    """One or more scenario fields failed validation; all are reported."""

    def __init__(self, errors: list[FieldError]):
        self.errors = list(errors)
        super().__init__("; ".join(str(e) for e in self.errors))


@dataclass(frozen=True)
class SimulationFragment:
    true_mu_delta: float
    replicates: int
    seed: int


@dataclass(frozen=True)
class ScenarioFile:
    schema_version: int
    sources: tuple[HistoricalSource, ...]
    weights: WeightVector
    hyper: GammaMixtureHyperparams
    design: DesignParams
    endpoint: EndpointModel
    simulation: SimulationFragment | None = None
    notes: str | None = None


class _Check:
    """Collects field errors while pulling typed values out of raw JSON."""

    def __init__(self) -> None:
        self.errors: list[FieldError] = []

    def fail(self, path: str, message: str) -> None:
        self.errors.append(FieldError(path, message))

    def number(self, obj: dict, key: str, path: str, *, required: bool = True) -> float | None:
        if key not in obj or obj[key] is None:
            if required:
                self.fail(f"{path}.{key}" if path else key, "missing required field")
            return None
        value = obj[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.fail(f"{path}.{key}" if path else key, f"expected a number, got {value!r}")
            return None
        if not math.isfinite(value):
            self.fail(f"{path}.{key}" if path else key, f"must be finite, got {value!r}")
            return None
        return float(value)

    def integer(self, obj: dict, key: str, path: str, *, required: bool = True) -> int | None:
        value = self.number(obj, key, path, required=required)
        if value is None:
            return None
        if value != int(value):
            self.fail(f"{path}.{key}" if path else key, f"expected an integer, got {value!r}")
            return None
        return int(value)

    def mapping(self, obj: dict, key: str, path: str, *, required: bool = True) -> dict | None:
        if key not in obj or obj[key] is None:
            if required:
                self.fail(f"{path}.{key}" if path else key, "missing required field")
            return None
        value = obj[key]
        if not isinstance(value, dict):
            self.fail(f"{path}.{key}" if path else key, f"expected an object, got {type(value).__name__}")
            return None
        return value

    def unknown_keys(self, obj: dict, allowed: tuple[str, ...], path: str) -> None:
        for key in obj:
            if key not in allowed:
                self.fail(f"{path}.{key}" if path else key, "unknown field")


def scenario_from_dict(raw: Any) -> ScenarioFile:
    """Build a validated scenario from parsed JSON, reporting every field error."""
    if isinstance(raw, dict) and "scenario" in raw and "schema_version" not in raw:
        raw = raw["scenario"]  # accept a `report` document round-tripped as input
    if not isinstance(raw, dict):
        raise ScenarioValidationError([FieldError("", "scenario must be a JSON object")])

    ck = _Check()
    ck.unknown_keys(
        raw,
        ("schema_version", "notes", "sources", "hyper", "design", "endpoint", "simulation"),
        "",
    )

    version = ck.integer(raw, "schema_version", "")
    if version is not None and version != SCHEMA_VERSION:
        ck.fail("schema_version", f"unknown schema_version {version}; this build reads {SCHEMA_VERSION}")

    notes = raw.get("notes")
    if notes is not None and not isinstance(notes, str):
        ck.fail("notes", "must be a string")

    sources: list[HistoricalSource] = []
    weights: list[float] = []
    raw_sources = raw.get("sources")
    if raw_sources is None:
        ck.fail("sources", "missing required field")
    elif not isinstance(raw_sources, list):
        ck.fail("sources", "expected a list")
    else:
        for i, entry in enumerate(raw_sources):
            path = f"sources[{i}]"
            if not isinstance(entry, dict):
                ck.fail(path, "expected an object")
                continue
            ck.unknown_keys(entry, ("id", "theta", "tau_sq", "w"), path)
            ident = entry.get("id", f"source-{i + 1}")
            if not isinstance(ident, str):
                ck.fail(f"{path}.id", "must be a string")
                ident = f"source-{i + 1}"
            theta = ck.number(entry, "theta", path)
            tau_sq = ck.number(entry, "tau_sq", path)
            w = ck.number(entry, "w", path)
            if tau_sq is not None and tau_sq <= 0:
                ck.fail(f"{path}.tau_sq", f"must be positive, got {tau_sq!r}")
                tau_sq = None
            if w is not None and not (0.0 <= w <= 1.0):
                ck.fail(f"{path}.w", f"must lie in [0, 1], got {w!r}")
                w = None
            if theta is not None and tau_sq is not None and w is not None:
                sources.append(HistoricalSource(id=ident, theta=theta, tau_sq=tau_sq))
                weights.append(w)

    hyper = None
    raw_hyper = ck.mapping(raw, "hyper", "", required=False)
    if raw_hyper is None:
        hyper = GammaMixtureHyperparams()
    else:
        ck.unknown_keys(raw_hyper, ("a01", "b01", "a02", "b02", "c0"), "hyper")
        values = {
            key: ck.number(raw_hyper, key, "hyper")
            for key in ("a01", "b01", "a02", "b02")
        }
        c0 = ck.number(raw_hyper, "c0", "hyper", required=False)
        if all(v is not None for v in values.values()):
            try:
                hyper = GammaMixtureHyperparams(c0=c0, **values)
            except ValueError as exc:
                ck.fail("hyper", str(exc))

    design = None
    raw_design = ck.mapping(raw, "design", "")
    if raw_design is not None:
        ck.unknown_keys(
            raw_design,
            ("delta", "R", "eta", "zeta", "sigma0_sq", "mu0", "s0_sq", "alpha", "beta"),
            "design",
        )
        delta = ck.number(raw_design, "delta", "design")
        if delta is not None and delta <= 0:
            ck.fail("design.delta", f"must be positive, got {delta!r}")
            delta = None
        R = ck.number(raw_design, "R", "design")
        eta = ck.number(raw_design, "eta", "design")
        zeta = ck.number(raw_design, "zeta", "design")
        for name, value in (("R", R), ("eta", eta), ("zeta", zeta)):
            if value is not None and not (0.0 < value < 1.0):
                ck.fail(f"design.{name}", f"must lie strictly inside (0, 1), got {value!r}")
                if name == "R":
                    R = None
                elif name == "eta":
                    eta = None
                else:
                    zeta = None
        optional = {
            key: ck.number(raw_design, key, "design", required=False)
            for key in ("sigma0_sq", "s0_sq", "alpha", "beta")
        }
        for key in ("sigma0_sq", "s0_sq"):
            if optional[key] is not None and optional[key] <= 0:
                ck.fail(f"design.{key}", f"must be positive, got {optional[key]!r}")
                optional[key] = None
        mu0 = ck.number(raw_design, "mu0", "design", required=False)
        if None not in (delta, R, eta, zeta):
            try:
                design = DesignParams(
                    delta=delta, R=R, eta=eta, zeta=zeta,
                    mu0=0.0 if mu0 is None else mu0, **optional,
                )
            except ValueError as exc:
                ck.fail("design", str(exc))

    endpoint: EndpointModel | None = None
    raw_endpoint = ck.mapping(raw, "endpoint", "", required=False)
    if raw_endpoint is None:
        raw_endpoint = {"model": "normal"}
    model = raw_endpoint.get("model")
    if model not in _ENDPOINT_MODELS:
        ck.fail("endpoint.model", f"must be one of {_ENDPOINT_MODELS}, got {model!r}")
    else:
        try:
            if model == "normal":
                ck.unknown_keys(raw_endpoint, ("model", "sigma0_sq"), "endpoint")
                sigma0_sq = ck.number(raw_endpoint, "sigma0_sq", "endpoint", required=False)
                if sigma0_sq is None and design is not None:
                    sigma0_sq = design.sigma0_sq
                if sigma0_sq is None:
                    ck.fail("endpoint.sigma0_sq", "normal endpoint needs sigma0_sq here or in design")
                else:
                    endpoint = NormalEndpoint(sigma0_sq=sigma0_sq)
            elif model == "binary_two_arm":
                ck.unknown_keys(raw_endpoint, ("model", "rho_t", "rho_c"), "endpoint")
                rho_t = ck.number(raw_endpoint, "rho_t", "endpoint")
                rho_c = ck.number(raw_endpoint, "rho_c", "endpoint")
                if rho_t is not None and rho_c is not None:
                    endpoint = BinaryTwoArmEndpoint(rho_t=rho_t, rho_c=rho_c)
            elif model == "time_to_event":
                ck.unknown_keys(raw_endpoint, ("model",), "endpoint")
                endpoint = TimeToEventEndpoint()
            else:
                ck.unknown_keys(raw_endpoint, ("model", "p"), "endpoint")
                p = ck.number(raw_endpoint, "p", "endpoint")
                if p is not None:
                    endpoint = SingleArmBinaryEndpoint(p=p)
        except ValueError as exc:
            ck.fail("endpoint", str(exc))

    simulation = None
    raw_sim = ck.mapping(raw, "simulation", "", required=False)
    if raw_sim is not None:
        ck.unknown_keys(raw_sim, ("true_mu_delta", "replicates", "seed"), "simulation")
        true_mu = ck.number(raw_sim, "true_mu_delta", "simulation")
        replicates = ck.integer(raw_sim, "replicates", "simulation")
        seed = ck.integer(raw_sim, "seed", "simulation")
        if replicates is not None and replicates < 1:
            ck.fail("simulation.replicates", f"must be >= 1, got {replicates}")
            replicates = None
        if seed is not None and not (0 <= seed < 1 << 64):
            ck.fail("simulation.seed", "must be a 64-bit unsigned integer")
            seed = None
        if None not in (true_mu, replicates, seed):
            simulation = SimulationFragment(
                true_mu_delta=true_mu, replicates=replicates, seed=seed
            )

    if ck.errors:
        raise ScenarioValidationError(ck.errors)

    return ScenarioFile(
        schema_version=SCHEMA_VERSION,
        sources=tuple(sources),
        weights=WeightVector.raw(weights),
        hyper=hyper,
        design=design,
        endpoint=endpoint,
        simulation=simulation,
        notes=notes,
    )


def parse_scenario(path: str | Path) -> ScenarioFile:
    """Read and validate a scenario file from disk."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioValidationError(
            [FieldError("", f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")]
        ) from exc
    return scenario_from_dict(raw)


def scenario_to_dict(scenario: ScenarioFile) -> dict:
    """The JSON-ready form of a scenario (inverse of :func:`scenario_from_dict`)."""
    out: dict[str, Any] = {
        "schema_version": scenario.schema_version,
        "sources": [
            {"id": s.id, "theta": s.theta, "tau_sq": s.tau_sq, "w": w}
            for s, w in zip(scenario.sources, scenario.weights)
        ],
        "hyper": {
            "a01": scenario.hyper.a01,
            "b01": scenario.hyper.b01,
            "a02": scenario.hyper.a02,
            "b02": scenario.hyper.b02,
            "c0": scenario.hyper.c0,
        },
        "design": _design_to_dict(scenario.design),
        "endpoint": _endpoint_to_dict(scenario.endpoint),
    }
    if scenario.simulation is not None:
        out["simulation"] = {
            "true_mu_delta": scenario.simulation.true_mu_delta,
            "replicates": scenario.simulation.replicates,
            "seed": scenario.simulation.seed,
        }
    if scenario.notes is not None:
        out["notes"] = scenario.notes
    return out


def _design_to_dict(design: DesignParams) -> dict:
    out = {"delta": design.delta, "R": design.R, "eta": design.eta, "zeta": design.zeta}
    for key in ("sigma0_sq", "s0_sq", "alpha", "beta"):
        value = getattr(design, key)
        if value is not None:
            out[key] = value
    if design.mu0 != 0.0:
        out["mu0"] = design.mu0
    return out


def _endpoint_to_dict(endpoint: EndpointModel) -> dict:
    if isinstance(endpoint, NormalEndpoint):
        return {"model": "normal", "sigma0_sq": endpoint.sigma0_sq}
    if isinstance(endpoint, BinaryTwoArmEndpoint):
        return {"model": "binary_two_arm", "rho_t": endpoint.rho_t, "rho_c": endpoint.rho_c}
    if isinstance(endpoint, TimeToEventEndpoint):
        return {"model": "time_to_event"}
    return {"model": "single_arm_binary", "p": endpoint.p}


def canonical_json(obj: Any) -> str:
    """Deterministic serialization used everywhere a byte-identical round trip matters."""
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def bundled_scenario_names() -> list[str]:
    """Names of the scenario files shipped inside the package."""
    data = resources.files("bayesborrow.data")
    return sorted(p.name for p in data.iterdir() if p.name.endswith(".scenario.json"))


def load_bundled(name: str) -> ScenarioFile:
    """Load a shipped scenario by file name (e.g. ``alzheimers.scenario.json``)."""
    data = resources.files("bayesborrow.data").joinpath(name)
    raw = json.loads(data.read_text(encoding="utf-8"))
    return scenario_from_dict(raw)


def bundled_scenario_path(name: str) -> Path:
    """Filesystem path of a shipped scenario (for passing to the CLI)."""
    with resources.as_file(resources.files("bayesborrow.data").joinpath(name)) as path:
        return Path(path)
