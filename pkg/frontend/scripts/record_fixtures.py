"""Record service responses into JSON fixtures for the UI contract tests.

Runs the real service in-process (no network) and captures each request body
together with the live response, so the vitest suite can replay them through
a fake fetch and assert that every number the UI displays equals the
corresponding service response field.

Run from the repository root:

    python frontend/scripts/record_fixtures.py
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi.testclient import TestClient

from bayesborrow import load_bundled, scenario_to_dict
from bayesborrow.service import create_app

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def main() -> int:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    store = FIXTURES / "_store.json"
    if store.exists():
        store.unlink()
    client = TestClient(create_app(store))

    alz = scenario_to_dict(load_bundled("alzheimers.scenario.json"))
    cfg_a = scenario_to_dict(load_bundled("config_a.scenario.json"))

    recorded: list[tuple[str, str, str, dict | None]] = []

    def record(name: str, method: str, path: str, body: dict | None = None) -> dict:
        response = client.request(method, path, json=body)
        assert response.status_code in (200, 201), (name, response.status_code, response.text)
        payload = {
            "request": {"method": method, "path": path, "body": body},
            "response": response.json(),
        }
        (FIXTURES / f"{name}.json").write_text(
            json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        recorded.append((name, method, path, body))
        return payload["response"]

    def with_weights(scenario: dict, w: float) -> dict:
        doc = json.loads(json.dumps(scenario))
        for source in doc["sources"]:
            source["w"] = w
        return doc

    for label, scenario in (("alz", alz), ("cfg_a", cfg_a)):
        record(f"{label}.sample_size.linearized", "POST", "/v1/sample-size",
               {"scenario": scenario, "linearize": True})
        record(f"{label}.sample_size.raw", "POST", "/v1/sample-size",
               {"scenario": scenario, "linearize": False})
        record(f"{label}.sample_size.no_borrow", "POST", "/v1/sample-size",
               {"scenario": scenario, "mode": "no-borrow"})
        record(f"{label}.prior.legacy", "POST", "/v1/prior", {
            "sources": [
                {"id": s["id"], "theta": s["theta"], "tau_sq": s["tau_sq"]}
                for s in scenario["sources"]
            ],
            "hyper": scenario["hyper"],
            "weights": [s["w"] for s in scenario["sources"]],
            "weights_kind": "raw",
            "method": "legacy",
        })
        record(f"{label}.sweep.w1", "POST", "/v1/sweep",
               {"scenario": scenario, "axes": [0], "step": 0.02})

    # slider-endpoint states for the seven-source scenario: every call the
    # session store issues for the all-zero and all-one weight states
    for tag, value in (("all_zeros", 0.0), ("all_ones", 1.0)):
        doc = with_weights(alz, value)
        record(f"alz.sample_size.{tag}", "POST", "/v1/sample-size",
               {"scenario": doc, "linearize": True})
        record(f"alz.sample_size.raw.{tag}", "POST", "/v1/sample-size",
               {"scenario": doc, "linearize": False})
        record(f"alz.sample_size.no_borrow.{tag}", "POST", "/v1/sample-size",
               {"scenario": doc, "mode": "no-borrow"})
        record(f"alz.sweep.{tag}.w1", "POST", "/v1/sweep",
               {"scenario": doc, "axes": [0], "step": 0.02})

    # the simulation request exactly as the UI issues it (seed field only;
    # replicates and the true effect come from the scenario fragment)
    record("alz.simulate", "POST", "/v1/simulate", {"scenario": alz, "seed": 1000})

    # scenario store round trip
    record("alz.store.put", "PUT", "/v1/scenarios/alz", {"scenario": alz})
    record("alz.store.get", "GET", "/v1/scenarios/alz", None)

    # bundled scenarios for the tests to load
    (FIXTURES / "alzheimers.scenario.json").write_text(
        json.dumps(alz, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    (FIXTURES / "config_a.scenario.json").write_text(
        json.dumps(cfg_a, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )

    if store.exists():
        store.unlink()
    print(f"recorded {len(recorded)} fixtures into {FIXTURES}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
