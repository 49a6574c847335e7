"""Stub oracle that completes the handshake, then never answers a query."""
import json
import sys
import time

for line in sys.stdin:
    msg = json.loads(line)
    if msg["op"] == "hello":
        print(json.dumps({"op": "hello", "classes": 2}), flush=True)
    else:
        time.sleep(3600)
