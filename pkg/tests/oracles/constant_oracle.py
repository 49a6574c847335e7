"""Stub oracle: always predicts class 0."""
import json
import sys

for line in sys.stdin:
    msg = json.loads(line)
    if msg["op"] == "hello":
        print(json.dumps({"op": "hello", "classes": 2}), flush=True)
    elif msg["op"] == "predict":
        n = len(msg["instances"])
        print(json.dumps({"op": "labels", "labels": [0] * n}), flush=True)
