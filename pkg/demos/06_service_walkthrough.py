"""Drive the HTTP service end to end from Python.

Boots the app in-process, creates a session, runs an induction job, pulls
the matrix payload, applies filters, and probes a custom instance - the same
calls the browser UI makes.
"""

import json
import tempfile
import time

from fastapi.testclient import TestClient

from rulelens.service import ServiceConfig, create_app

config = ServiceConfig(data_dir=tempfile.mkdtemp(), mcmc_iterations=8000, mcmc_chains=2)
client = TestClient(create_app(config))

print("GET /health ->", client.get("/health").json())

session = client.post("/api/v1/sessions", json={
    "dataset": "iris", "teacher": "mlp:50", "epochs": 200,
}).json()
sid = session["session_id"]
print(f"session {sid}: train {session['train_size']}, test {session['test_size']}")

job = client.post(f"/api/v1/sessions/{sid}/induce",
                  json={"sampling_rate": 4.0, "seed": 1}).json()["job_id"]
while True:
    status = client.get(f"/api/v1/jobs/{job}").json()
    print(f"  job: {status['state']} {status['progress']:.0%}")
    if status["state"] in ("done", "error"):
        break
    time.sleep(0.5)

matrix = client.get(f"/api/v1/sessions/{sid}/matrix?dataset=test").json()
print(f"matrix: {len(matrix['rules'])} rules, test fidelity {matrix['fidelity']:.3f}")
print("feature order:", [f["name"] for f in matrix["features"]])

filtered = client.post(f"/api/v1/sessions/{sid}/filters", json={
    "min_support": 0.05, "min_confidence": 0.5,
}).json()
groups = [row for row in filtered["rows"] if row["type"] == "group"]
print(f"after filters: {len(groups)} collapsed group(s)")

probe = client.post(f"/api/v1/sessions/{sid}/probe", json={
    "instance": [6.1, 2.8, 4.7, 1.2],
}).json()
print(f"probe: teacher says {probe['teacher_label']}, "
      f"rules say {probe['rule_label']} (rule {probe['fired_rule']}), "
      f"agree = {probe['agreement']}")
