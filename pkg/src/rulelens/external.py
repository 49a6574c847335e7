"""Subprocess oracle protocol: one JSON object per line over stdin/stdout.

Handshake first, then batched label queries:

    -> {"op": "hello", "features": k, "classes": null}
    <- {"op": "hello", "classes": C}
    -> {"op": "predict", "instances": [[...], ...]}
    <- {"op": "labels", "labels": [...], "proba": [[...], ...]?}

Categorical values travel as integer indices per the schema. Requests are
serialized over the single channel; batches are capped so subprocess memory
and the per-batch timeout stay meaningful.
"""

from __future__ import annotations

import json
import queue
import shlex
import subprocess
import threading

import numpy as np

from .dataset import DatasetSchema
from .errors import HandshakeFailure, OracleTimeout, ProtocolViolation
from .teacher import Oracle

MAX_BATCH = 4096
DEFAULT_TIMEOUT = 60.0


class ExternalOracle(Oracle):
    """Oracle backed by a subprocess speaking the JSON-lines protocol."""

    def __init__(self, command: str, schema: DatasetSchema,
                 timeout: float = DEFAULT_TIMEOUT):
        self.schema = schema
        self.timeout = timeout
        self._command = command
        self._lock = threading.Lock()
        try:
            self._proc = subprocess.Popen(
                shlex.split(command),
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                bufsize=1,
            )
        except OSError as exc:
            raise HandshakeFailure(f"could not launch oracle: {exc}") from exc
        self._replies: queue.Queue = queue.Queue()
        self._reader = threading.Thread(target=self._read_loop, daemon=True)
        self._reader.start()

        reply = self._exchange({"op": "hello", "features": schema.k, "classes": None},
                               expect="hello", during_handshake=True)
        classes = reply.get("classes")
        if not isinstance(classes, int) or classes < 2:
            raise HandshakeFailure(f"oracle announced invalid class count {classes!r}")
        if classes != schema.class_count:
            raise HandshakeFailure(
                f"oracle has {classes} classes, schema has {schema.class_count}")
        self.class_count = classes

    def _read_loop(self):
        try:
            for line in self._proc.stdout:
                self._replies.put(line)
        finally:
            self._replies.put(None)  # EOF marker

    def _exchange(self, message: dict, expect: str, during_handshake: bool = False) -> dict:
        err = HandshakeFailure if during_handshake else ProtocolViolation
        try:
            self._proc.stdin.write(json.dumps(message) + "\n")
            self._proc.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            raise err(f"oracle pipe closed: {exc}") from exc
        try:
            line = self._replies.get(timeout=self.timeout)
        except queue.Empty:
            raise OracleTimeout(
                f"oracle did not reply within {self.timeout:.0f}s") from None
        if line is None:
            raise err("oracle exited before replying")
        try:
            reply = json.loads(line)
        except json.JSONDecodeError as exc:
            raise err(f"oracle sent invalid JSON: {line!r}") from exc
        if not isinstance(reply, dict) or reply.get("op") != expect:
            raise err(f"expected op={expect!r}, got {reply!r}")
        return reply

    def predict_proba(self, rows: np.ndarray) -> np.ndarray:
        rows = np.asarray(rows, dtype=np.float64)
        if rows.ndim == 1:
            rows = rows.reshape(1, -1)
        labels, proba = self._query(rows)
        if proba is not None:
            return proba
        out = np.zeros((len(labels), self.class_count))
        out[np.arange(len(labels)), labels] = 1.0
        return out

    def predict(self, rows: np.ndarray) -> np.ndarray:
        rows = np.asarray(rows, dtype=np.float64)
        if rows.ndim == 1:
            rows = rows.reshape(1, -1)
        labels, proba = self._query(rows)
        if proba is not None:
            return proba.argmax(axis=1).astype(np.int64)
        return labels

    def _query(self, rows: np.ndarray):
        all_labels = []
        all_proba = []
        saw_proba = True
        with self._lock:
            for start in range(0, rows.shape[0], MAX_BATCH):
                chunk = rows[start:start + MAX_BATCH]
                reply = self._exchange(
                    {"op": "predict", "instances": chunk.tolist()}, expect="labels")
                labels = reply.get("labels")
                if not isinstance(labels, list) or len(labels) != chunk.shape[0]:
                    raise ProtocolViolation(
                        f"expected {chunk.shape[0]} labels, got "
                        f"{len(labels) if isinstance(labels, list) else labels!r}")
                arr = np.asarray(labels)
                if arr.dtype.kind not in "iu" or arr.min() < 0 or arr.max() >= self.class_count:
                    raise ProtocolViolation("labels outside [0, classes)")
                all_labels.append(arr.astype(np.int64))
                proba = reply.get("proba")
                if proba is None:
                    saw_proba = False
                else:
                    p = np.asarray(proba, dtype=np.float64)
                    if p.shape != (chunk.shape[0], self.class_count):
                        raise ProtocolViolation("proba has wrong shape")
                    if (p < 0).any() or np.abs(p.sum(axis=1) - 1.0).max() > 1e-6:
                        raise ProtocolViolation("proba rows must be non-negative and sum to 1")
                    all_proba.append(p)
        labels = np.concatenate(all_labels) if all_labels else np.zeros(0, dtype=np.int64)
        proba = np.vstack(all_proba) if (saw_proba and all_proba) else None
        return labels, proba

    def describe(self) -> dict:
        return {"kind": "external", "command": self._command}

    def close(self):
        if self._proc.poll() is None:
            try:
                self._proc.stdin.close()
            except OSError:
                pass
            try:
                self._proc.wait(timeout=5)
            except subprocess.TimeoutExpired:
                self._proc.kill()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def connect_external_oracle(command: str, schema: DatasetSchema,
                            timeout: float = DEFAULT_TIMEOUT) -> ExternalOracle:
    """Launch `command` and complete the hello exchange."""
    return ExternalOracle(command, schema, timeout=timeout)
