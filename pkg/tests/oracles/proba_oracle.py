"""Stub oracle replying with a probability matrix (logistic in x0)."""
import json
import math
import sys

for line in sys.stdin:
    msg = json.loads(line)
    if msg["op"] == "hello":
        print(json.dumps({"op": "hello", "classes": 2}), flush=True)
    elif msg["op"] == "predict":
        labels = []
        proba = []
        for row in msg["instances"]:
            p1 = 1.0 / (1.0 + math.exp(-2.0 * row[0]))
            proba.append([1.0 - p1, p1])
            labels.append(1 if p1 > 0.5 else 0)
        print(json.dumps({"op": "labels", "labels": labels, "proba": proba}), flush=True)
