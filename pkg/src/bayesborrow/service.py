"""Thin stateless HTTP facade over the library, plus a small scenario store.

All compute endpoints are referentially transparent (simulation included,
through its mandatory seed).  The scenario store is one JSON file replaced
atomically on every write, serialized through a single lock; that is crash
safety enough for a desk-scale tool.

Run with::

    uvicorn --factory bayesborrow.service:create_app

or ``python -m bayesborrow.service [--port 8000] [--store scenarios.json]``.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
import warnings
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from fastapi import Body, FastAPI
from fastapi.responses import JSONResponse

from .borrowing import (
    HistoricalSource,
    WeightVector,
    aggregate_legacy,
    aggregate_precision_weighted,
)
from .cli import build_report
from .design import NormalEndpoint, sample_size_for_endpoint, sample_size_frequentist, sweep_surface
from .linearize import linearize_all
from .scenario import (
    FieldError,
    ScenarioValidationError,
    canonical_json,
    scenario_from_dict,
    scenario_to_dict,
)
from .simulate import SimulationConfig, run_simulation
from .stats import GammaMixtureHyperparams

SWEEP_ROW_CAP = 100_000
REPLICATE_CAP = 1_000_000

_RAW_WEIGHTS_NOTE = (
    "weights were used raw (untransformed); design output will over-discount. "
    "Linearize first unless this is intended."
)


class _Store:
    """File-backed scenario records with atomic replace-on-write."""

    def __init__(self, path: Path):
        self._path = path
        self._lock = threading.Lock()
        self._records: dict[str, dict] = {}
        if path.exists():
            self._records = json.loads(path.read_text(encoding="utf-8"))

    def _flush(self) -> None:
        fd, tmp = tempfile.mkstemp(dir=str(self._path.parent), prefix=".scenarios-")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                handle.write(canonical_json(self._records))
            os.replace(tmp, self._path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def list(self) -> list[dict]:
        with self._lock:
            return [self._summary(i, r) for i, r in sorted(self._records.items())]

    @staticmethod
    def _summary(ident: str, record: dict) -> dict:
        return {"id": ident, "created_at": record["created_at"], "updated_at": record["updated_at"]}

    def get(self, ident: str) -> dict | None:
        with self._lock:
            return self._records.get(ident)

    def put(self, ident: str, scenario: dict) -> dict:
        now = datetime.now(timezone.utc).isoformat()
        with self._lock:
            existing = self._records.get(ident)
            record = {
                "scenario": scenario,
                "created_at": existing["created_at"] if existing else now,
                "updated_at": now,
            }
            self._records[ident] = record
            self._flush()
            return record

    def delete(self, ident: str) -> bool:
        with self._lock:
            if ident not in self._records:
                return False
            del self._records[ident]
            self._flush()
            return True


def _validation_response(exc: ScenarioValidationError) -> JSONResponse:
    return JSONResponse(
        status_code=400,
        content={"errors": [{"path": e.path, "message": e.message} for e in exc.errors]},
    )


def _domain_response(exc: ValueError) -> JSONResponse:
    return JSONResponse(status_code=422, content={"error": str(exc)})


def _parse_borrowing_payload(
    payload: dict,
) -> tuple[list[HistoricalSource], GammaMixtureHyperparams, WeightVector]:
    errors: list[FieldError] = []
    sources: list[HistoricalSource] = []
    raw_sources = payload.get("sources")
    if not isinstance(raw_sources, list) or not raw_sources:
        errors.append(FieldError("sources", "a nonempty list of sources is required"))
        raw_sources = []
    for i, entry in enumerate(raw_sources):
        try:
            sources.append(
                HistoricalSource(
                    id=str(entry.get("id", f"source-{i + 1}")),
                    theta=entry["theta"],
                    tau_sq=entry["tau_sq"],
                )
            )
        except (TypeError, KeyError, ValueError) as exc:
            errors.append(FieldError(f"sources[{i}]", str(exc) or "invalid source"))
    try:
        hyper = GammaMixtureHyperparams(**payload.get("hyper", {}))
    except (TypeError, ValueError) as exc:
        errors.append(FieldError("hyper", str(exc)))
        hyper = GammaMixtureHyperparams()
    weights = None
    raw_weights = payload.get("weights")
    if not isinstance(raw_weights, list) or len(raw_weights) != len(raw_sources):
        errors.append(FieldError("weights", "must be a list with one entry per source"))
    else:
        kind = payload.get("weights_kind", "raw")
        try:
            if kind == "transformed":
                weights = WeightVector.transformed(raw_weights)
            elif kind == "raw":
                weights = WeightVector.raw(raw_weights)
            else:
                errors.append(FieldError("weights_kind", f"must be 'raw' or 'transformed', got {kind!r}"))
        except (TypeError, ValueError) as exc:
            errors.append(FieldError("weights", str(exc)))
    if errors:
        raise ScenarioValidationError(errors)
    return sources, hyper, weights


def _prior_dict(prior) -> dict:
    return {
        "mean": prior.mean,
        "variance": prior.variance,
        "precision": prior.precision,
        "synthesis_weights": list(prior.synthesis_weights),
        "method": prior.method.value,
        "built_from": prior.built_from.value,
        "near_degenerate": list(prior.near_degenerate),
    }


def create_app(store_path: str | Path | None = None) -> FastAPI:
    """Build the service; ``store_path`` defaults to ./scenarios.json."""
    app = FastAPI(title="bayesborrow", version="1")
    store = _Store(Path(store_path) if store_path else Path("scenarios.json"))

    @app.exception_handler(ScenarioValidationError)
    async def _on_validation(_request, exc: ScenarioValidationError):
        return _validation_response(exc)

    @app.exception_handler(ValueError)
    async def _on_domain(_request, exc: ValueError):
        return _domain_response(exc)

    @app.post("/v1/linearize")
    def linearize(payload: dict = Body(...)) -> dict:
        sources, hyper, weights = _parse_borrowing_payload(payload)
        transformed = linearize_all(sources, weights, hyper)
        return {"transformed_weights": list(transformed.values)}

    @app.post("/v1/prior")
    def prior(payload: dict = Body(...)) -> dict:
        sources, hyper, weights = _parse_borrowing_payload(payload)
        method = payload.get("method", "precision")
        if method == "legacy":
            result = aggregate_legacy(sources, weights, hyper)
        elif method == "precision":
            result = aggregate_precision_weighted(sources, weights, hyper)
        else:
            raise ScenarioValidationError(
                [FieldError("method", f"must be 'precision' or 'legacy', got {method!r}")]
            )
        body = _prior_dict(result)
        body["warnings"] = []
        if weights.kind.value == "raw":
            body["warnings"].append(_RAW_WEIGHTS_NOTE)
        return body

    @app.post("/v1/sample-size")
    def sample_size(payload: dict = Body(...)) -> dict:
        mode = payload.get("mode", "borrow")
        scenario = scenario_from_dict(_scenario_fragment(payload))
        warnings_out: list[str] = []
        response: dict[str, Any] = {"mode": mode, "warnings": warnings_out}
        if mode == "frequentist":
            if not isinstance(scenario.endpoint, NormalEndpoint):
                raise ValueError("the frequentist formula applies to the normal endpoint")
            result = sample_size_frequentist(scenario.design)
        elif mode == "no-borrow":
            prior_precision = 1.0 / scenario.design.s0_sq if scenario.design.s0_sq else 0.0
            result = sample_size_for_endpoint(scenario.endpoint, scenario.design, prior_precision)
        elif mode == "borrow":
            if not scenario.sources:
                raise ValueError("borrow mode needs at least one historical source")
            weights = scenario.weights
            if payload.get("weights_kind", "raw") == "transformed":
                weights = WeightVector.transformed(weights.values)
            if payload.get("linearize", True) and weights.kind.value == "raw":
                weights = linearize_all(scenario.sources, weights, scenario.hyper)
                response["transformed_weights"] = list(weights.values)
            prior = aggregate_precision_weighted(scenario.sources, weights, scenario.hyper)
            if weights.kind.value == "raw":
                warnings_out.append(_RAW_WEIGHTS_NOTE)
            response["prior"] = _prior_dict(prior)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")  # surfaced via the warnings field instead
                result = sample_size_for_endpoint(scenario.endpoint, scenario.design, prior.precision)
        else:
            raise ScenarioValidationError(
                [FieldError("mode", f"must be borrow, no-borrow or frequentist, got {mode!r}")]
            )
        response.update(
            n=result.n,
            n_real=result.n_real,
            per_arm=result.per_arm,
            convention=result.convention,
            prior_precision_used=result.prior_precision_used,
            decisive_by_prior=result.decisive_by_prior,
            rounding=result.rounding,
        )
        return response

    @app.post("/v1/sweep")
    def sweep(payload: dict = Body(...)):
        scenario = scenario_from_dict(payload.get("scenario"))
        axes_spec = payload.get("axes")
        step = payload.get("step", 0.01)
        if not isinstance(axes_spec, list) or not axes_spec:
            raise ScenarioValidationError([FieldError("axes", "a list of source indices is required")])
        axes = [int(a) for a in axes_spec]
        if not (isinstance(step, (int, float)) and 0 < step <= 0.5):
            raise ScenarioValidationError([FieldError("step", f"must lie in (0, 0.5], got {step!r}")])
        points = int(round(1.0 / step)) + 1
        rows = points ** len(axes)
        if rows > SWEEP_ROW_CAP:
            return JSONResponse(
                status_code=413,
                content={"error": f"sweep would produce {rows} rows; the cap is {SWEEP_ROW_CAP}"},
            )
        table = sweep_surface(
            scenario.sources, scenario.weights, scenario.hyper, scenario.design, axes, step
        )
        return {"columns": list(table.columns), "rows": [list(row) for row in table.rows]}

    @app.post("/v1/simulate")
    def simulate(payload: dict = Body(...)):
        scenario = scenario_from_dict(payload.get("scenario"))
        if not isinstance(scenario.endpoint, NormalEndpoint):
            raise ValueError("simulation supports the normal endpoint only")
        fragment = scenario.simulation
        replicates = payload.get("replicates", fragment.replicates if fragment else None)
        seed = payload.get("seed", fragment.seed if fragment else None)
        true_mu = payload.get("true_mu_delta", fragment.true_mu_delta if fragment else None)
        errors = [
            FieldError(name, "required (not present in scenario.simulation either)")
            for name, value in (("replicates", replicates), ("seed", seed), ("true_mu_delta", true_mu))
            if value is None
        ]
        if errors:
            raise ScenarioValidationError(errors)
        if replicates > REPLICATE_CAP:
            return JSONResponse(
                status_code=413,
                content={"error": f"replicates {replicates} exceeds the cap of {REPLICATE_CAP}"},
            )
        weights = linearize_all(scenario.sources, scenario.weights, scenario.hyper)
        prior = aggregate_precision_weighted(scenario.sources, weights, scenario.hyper)
        n = payload.get("n")
        if n is None:
            n = sample_size_for_endpoint(scenario.endpoint, scenario.design, prior.precision).n
        config = SimulationConfig(
            design=scenario.design, prior=prior, n=int(n),
            true_mu_delta=float(true_mu), replicates=int(replicates), seed=int(seed),
        )
        result = run_simulation(config)
        return {
            "n": int(n),
            "true_mu_delta": float(true_mu),
            "pct_efficacious": result.pct_efficacious,
            "pct_futile": result.pct_futile,
            "pct_inconclusive": result.pct_inconclusive,
            "replicates": result.replicates,
            "seed": result.seed,
            "mc_stderr": result.mc_stderr,
        }

    @app.post("/v1/report")
    def report(payload: dict = Body(...)) -> dict:
        scenario = scenario_from_dict(payload.get("scenario", payload))
        return build_report(scenario, with_simulation=bool(payload.get("with_simulation", False)))

    @app.get("/v1/scenarios")
    def list_scenarios() -> dict:
        return {"scenarios": store.list()}

    @app.post("/v1/scenarios")
    def create_scenario(payload: dict = Body(...)):
        ident = payload.get("id")
        if not isinstance(ident, str) or not ident:
            raise ScenarioValidationError([FieldError("id", "a nonempty string id is required")])
        scenario = scenario_from_dict(payload.get("scenario"))
        record = store.put(ident, scenario_to_dict(scenario))
        return JSONResponse(status_code=201, content=_record_body(ident, record))

    @app.get("/v1/scenarios/{ident}")
    def get_scenario(ident: str):
        record = store.get(ident)
        if record is None:
            return JSONResponse(status_code=404, content={"error": f"unknown scenario {ident!r}"})
        return _record_body(ident, record)

    @app.put("/v1/scenarios/{ident}")
    def put_scenario(ident: str, payload: dict = Body(...)):
        scenario = scenario_from_dict(payload.get("scenario", payload))
        record = store.put(ident, scenario_to_dict(scenario))
        return _record_body(ident, record)

    @app.delete("/v1/scenarios/{ident}")
    def delete_scenario(ident: str):
        if not store.delete(ident):
            return JSONResponse(status_code=404, content={"error": f"unknown scenario {ident!r}"})
        return {"deleted": ident}

    return app


def _record_body(ident: str, record: dict) -> dict:
    return {
        "id": ident,
        "scenario": record["scenario"],
        "created_at": record["created_at"],
        "updated_at": record["updated_at"],
    }


def _scenario_fragment(payload: dict) -> dict:
    """Assemble a scenario dict from a sample-size request body."""
    if "scenario" in payload:
        return payload["scenario"]
    fragment = {
        "schema_version": 1,
        "sources": payload.get("sources", []),
        "design": payload.get("design"),
    }
    if "hyper" in payload:
        fragment["hyper"] = payload["hyper"]
    if "endpoint" in payload:
        fragment["endpoint"] = payload["endpoint"]
    if "weights" in payload:
        sources = payload.get("sources") or []
        weights = payload.get("weights") or []
        if len(sources) == len(weights):
            fragment["sources"] = [
                {**entry, "w": w} for entry, w in zip(sources, weights)
            ]
    return fragment


def main(argv: list[str] | None = None) -> int:
    import argparse

    import uvicorn

    parser = argparse.ArgumentParser(description="Run the bayesborrow HTTP service.")
    parser.add_argument("--host", default=os.environ.get("BAYESBORROW_HOST", "127.0.0.1"))
    parser.add_argument("--port", type=int, default=int(os.environ.get("BAYESBORROW_PORT", "8000")))
    parser.add_argument("--store", default=os.environ.get("BAYESBORROW_STORE", "scenarios.json"))
    args = parser.parse_args(argv)
    uvicorn.run(create_app(args.store), host=args.host, port=args.port)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
