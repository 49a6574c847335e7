"""Stub oracle: 1-nearest-neighbor over a reference table given as JSON argv."""
import json
import sys

with open(sys.argv[1], encoding="utf-8") as fh:
    ref = json.load(fh)
points = ref["points"]
labels = ref["labels"]
classes = ref["classes"]


def predict(instance):
    best_d, best_label = None, None
    for point, label in zip(points, labels):
        d = sum((a - b) ** 2 for a, b in zip(point, instance))
        if best_d is None or d < best_d or (d == best_d and label < best_label):
            best_d, best_label = d, label
    return best_label


for line in sys.stdin:
    msg = json.loads(line)
    if msg["op"] == "hello":
        print(json.dumps({"op": "hello", "classes": classes}), flush=True)
    elif msg["op"] == "predict":
        out = [predict(x) for x in msg["instances"]]
        print(json.dumps({"op": "labels", "labels": out}), flush=True)
