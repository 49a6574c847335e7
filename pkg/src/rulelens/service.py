"""HTTP service: sessions, induction jobs, matrix queries, filters, probes.

Sessions live in memory with a JSON snapshot written to the data directory
on every change; induction runs on a worker thread and is polled through
/api/v1/jobs/{id}. Reads are safe to repeat; mutations are serialized per
session.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from fastapi import Body, FastAPI, HTTPException, Query
from fastapi.responses import FileResponse, JSONResponse

from . import __version__, data_registry
from .dataset import DataTable, split_train_test
from .errors import (
    BadConfig,
    EmptySelection,
    PortInUse,
    RuleLensError,
    SchemaMismatch,
)
from .explain import (
    DataFilter,
    ExplanationBundle,
    MinerConfig,
    compute_metrics,
    filter_data,
    induce,
    probe,
)
from .payload import build_matrix_payload
from .rulelist import Hyperparams, McmcConfig
from .serialize import bundle_to_json
from .teacher import Oracle
from .teacher_spec import resolve_teacher

DEFAULT_TEST_FRACTION = 0.25
DEFAULT_SPLIT_SEED = 7


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8321
    data_dir: str | None = None
    static_dir: str | None = None  # built UI bundle, served at /
    mcmc_iterations: int = 10_000
    mcmc_chains: int = 2


@dataclass
class Session:
    id: str
    dataset: str
    teacher_spec: str
    train: DataTable
    test: DataTable
    teacher: Oracle
    bundle: ExplanationBundle | None = None
    min_support: float = 0.0
    min_confidence: float = 0.0
    data_filter: DataFilter | None = None
    display_dataset: str = "train"
    busy: bool = False
    lock: threading.Lock = field(default_factory=threading.Lock)


@dataclass
class Job:
    id: str
    session_id: str
    state: str = "queued"        # queued | running | done | error
    progress: float = 0.0
    error: str | None = None


class ServiceState:
    def __init__(self, config: ServiceConfig):
        self.config = config
        self.data_dir = data_registry.data_dir(config.data_dir)
        self.sessions: dict[str, Session] = {}
        self.jobs: dict[str, Job] = {}
        self.lock = threading.Lock()

    # --- persistence ---------------------------------------------------------

    def snapshot_path(self, session: Session) -> Path:
        return self.data_dir / "sessions" / f"{session.id}.json"

    def save_snapshot(self, session: Session):
        doc = {
            "id": session.id,
            "dataset": session.dataset,
            "teacher_spec": session.teacher_spec,
            "display_dataset": session.display_dataset,
            "min_support": session.min_support,
            "min_confidence": session.min_confidence,
            "data_filter": (session.data_filter.to_json_dict(session.train.schema)
                            if session.data_filter else None),
            "bundle": (bundle_to_json(session.bundle, session.teacher)
                       if session.bundle else None),
        }
        path = self.snapshot_path(session)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(doc, sort_keys=True), encoding="utf-8")


def _display_table(session: Session, name: str) -> DataTable:
    if name == "test":
        return session.test
    if name == "train":
        return session.train
    raise HTTPException(status_code=422, detail=f"dataset must be train or test, got {name!r}")


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    state = ServiceState(config)
    app = FastAPI(title="rulelens", version=__version__)
    app.state.rulelens = state

    def get_session(session_id: str) -> Session:
        session = state.sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return session

    def need_bundle(session: Session) -> ExplanationBundle:
        if session.bundle is None:
            raise HTTPException(status_code=409, detail="no explanation induced yet")
        return session.bundle

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__, "v": 1}

    @app.post("/api/v1/sessions", status_code=201)
    def create_session(body: dict = Body(...)):
        name = body.get("dataset")
        teacher_spec = body.get("teacher", "mlp:50")
        if not name:
            raise HTTPException(status_code=422, detail="dataset is required")
        try:
            table = data_registry.resolve_table(name, state.config.data_dir)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown dataset {name!r}") from None
        train, test = split_train_test(
            table,
            float(body.get("test_fraction", DEFAULT_TEST_FRACTION)),
            int(body.get("split_seed", DEFAULT_SPLIT_SEED)),
        )
        try:
            teacher = resolve_teacher(
                teacher_spec, train,
                seed=int(body.get("teacher_seed", 0)),
                l2_penalty=float(body.get("l2_penalty", 1.0)),
                epochs=int(body.get("epochs", 40)),
            )
        except BadConfig as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        session = Session(
            id=uuid.uuid4().hex[:12],
            dataset=name,
            teacher_spec=teacher_spec,
            train=train,
            test=test,
            teacher=teacher,
        )
        with state.lock:
            state.sessions[session.id] = session
        state.save_snapshot(session)
        return {"session_id": session.id, "train_size": train.n, "test_size": test.n,
                "teacher": teacher.describe()}

    @app.post("/api/v1/sessions/{session_id}/induce", status_code=202)
    def start_induce(session_id: str, body: dict = Body(default={})):
        session = get_session(session_id)
        with session.lock:
            if session.busy:
                raise HTTPException(status_code=409, detail="induction already running")
            session.busy = True
        job = Job(id=uuid.uuid4().hex[:12], session_id=session_id)
        state.jobs[job.id] = job

        sampling_rate = float(body.get("sampling_rate", 4.0))
        seed = int(body.get("seed", 0))
        mcmc = McmcConfig(
            iterations=int(body.get("iterations", state.config.mcmc_iterations)),
            chains=int(body.get("chains", state.config.mcmc_chains)),
            seed=seed,
        )
        hp = Hyperparams(
            expected_length=float(body.get("expected_length", 20.0)),
            expected_clauses=float(body.get("expected_clauses", 2.0)),
            alpha=float(body.get("alpha", 1.0)),
        )
        miner = MinerConfig(
            min_support=float(body.get("min_support", 0.02)),
            max_cardinality=int(body.get("max_cardinality", 3)),
        )

        def work():
            job.state = "running"
            try:
                bundle = induce(
                    session.train, session.teacher, sampling_rate,
                    test=session.test, miner=miner, hyperparams=hp, mcmc=mcmc,
                    seed=seed, progress=lambda x: setattr(job, "progress", x),
                )
                with session.lock:
                    session.bundle = bundle
                    session.busy = False
                state.save_snapshot(session)
                job.progress = 1.0
                job.state = "done"
            except Exception as exc:  # surfaced through the job, not the log
                job.state = "error"
                job.error = str(exc)
                with session.lock:
                    session.busy = False

        threading.Thread(target=work, daemon=True).start()
        return {"job_id": job.id}

    @app.get("/api/v1/jobs/{job_id}")
    def job_status(job_id: str):
        job = state.jobs.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail="unknown job")
        doc = {"state": job.state, "progress": round(job.progress, 4)}
        if job.error is not None:
            doc["error"] = job.error
        return doc

    def _matrix_response(session: Session, dataset: str, conditional: bool,
                         stripes: bool):
        bundle = need_bundle(session)
        table = _display_table(session, dataset)
        data_filter = session.data_filter
        if data_filter is not None and data_filter.predicates:
            try:
                table, metrics = filter_data(bundle, data_filter, table, session.teacher)
            except EmptySelection:
                return {
                    "v": 1, "dataset": dataset, "empty_selection": True,
                    "n": 0, "classes": list(bundle.schema.class_names),
                    "filters": {"min_support": session.min_support,
                                "min_confidence": session.min_confidence,
                                "data_filter": data_filter.to_json_dict(bundle.schema)},
                }
        else:
            metrics = compute_metrics(bundle, table, session.teacher)
        return build_matrix_payload(
            bundle, table, session.teacher,
            dataset_name=dataset,
            metrics=metrics,
            min_support=session.min_support,
            min_confidence=session.min_confidence,
            data_filter=data_filter,
            conditional=conditional,
            show_stripes=stripes,
        )

    @app.get("/api/v1/sessions/{session_id}/matrix")
    def matrix(session_id: str, dataset: str = Query(default=None),
               conditional: bool = False, stripes: bool = True):
        session = get_session(session_id)
        return _matrix_response(session, dataset or session.display_dataset,
                                conditional, stripes)

    @app.post("/api/v1/sessions/{session_id}/filters")
    def set_filters(session_id: str, body: dict = Body(...)):
        session = get_session(session_id)
        bundle = need_bundle(session)
        with session.lock:
            if "min_support" in body:
                session.min_support = float(body["min_support"])
            if "min_confidence" in body:
                session.min_confidence = float(body["min_confidence"])
            if "data_filter" in body:
                doc = body["data_filter"]
                session.data_filter = (DataFilter.from_json_dict(doc, bundle.schema)
                                       if doc else None)
            if "dataset" in body:
                _display_table(session, body["dataset"])  # validates
                session.display_dataset = body["dataset"]
        state.save_snapshot(session)
        return _matrix_response(session, session.display_dataset, False, True)

    @app.post("/api/v1/sessions/{session_id}/probe")
    def probe_instance(session_id: str, body: dict = Body(...)):
        session = get_session(session_id)
        bundle = need_bundle(session)
        instance = body.get("instance")
        if instance is None:
            raise HTTPException(status_code=422, detail="instance is required")
        try:
            result = probe(bundle, session.teacher, instance)
        except SchemaMismatch as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return {
            "teacher_prediction": result.teacher_prediction,
            "teacher_label": bundle.schema.class_names[result.teacher_prediction],
            "rule_prediction": result.rule_prediction,
            "rule_label": bundle.schema.class_names[result.rule_prediction],
            "fired_rule": result.fired_rule,
            "satisfaction": [list(s) for s in result.satisfaction],
            "agreement": result.teacher_prediction == result.rule_prediction,
        }

    @app.get("/api/v1/sessions/{session_id}/data")
    def data_rows(session_id: str, dataset: str = Query(default=None),
                  filter: str = Query(default=None),
                  page: int = 0, page_size: int = 50):
        session = get_session(session_id)
        table = _display_table(session, dataset or session.display_dataset)
        schema = table.schema
        mask = np.ones(table.n, dtype=bool)
        if filter:
            try:
                data_filter = DataFilter.from_json_dict(json.loads(filter), schema)
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                raise HTTPException(status_code=422, detail=f"bad filter: {exc}") from exc
            mask = data_filter.matches(table.rows)
        idx = np.flatnonzero(mask)
        page_size = max(1, min(page_size, 500))
        start = page * page_size
        chunk = idx[start:start + page_size]
        rows = []
        for i in chunk:
            values = []
            for j, spec in enumerate(schema.features):
                v = table.rows[i, j]
                values.append(spec.categories[int(v)] if not spec.is_continuous else v)
            rows.append({"index": int(i), "values": values,
                         "label": schema.class_names[int(table.labels[i])]})
        return {"total": int(idx.size), "page": page, "page_size": page_size,
                "columns": [f.name for f in schema.features], "rows": rows}

    @app.get("/api/v1/datasets")
    def list_datasets():
        return {"builtin": data_registry.builtin_names()}

    if config.static_dir:
        static = Path(config.static_dir)

        @app.get("/")
        def index():
            index_path = static / "index.html"
            if not index_path.exists():
                raise HTTPException(status_code=404, detail="UI bundle not built")
            return FileResponse(index_path)

        @app.get("/static/{path:path}")
        def static_file(path: str):
            target = (static / path).resolve()
            if not str(target).startswith(str(static.resolve())) or not target.is_file():
                raise HTTPException(status_code=404, detail="not found")
            return FileResponse(target)

    @app.exception_handler(RuleLensError)
    def on_domain_error(_, exc: RuleLensError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    return app


def serve(config: ServiceConfig | None = None):
    """Run the service until interrupted. Raises PortInUse/BadConfig early."""
    import errno
    import socket

    import uvicorn

    config = config or ServiceConfig()
    if not (0 < config.port < 65536):
        raise BadConfig(f"invalid port {config.port}")
    if config.static_dir and not Path(config.static_dir).is_dir():
        raise BadConfig(f"static dir {config.static_dir!r} does not exist")
    # bind-check up front: uvicorn exits instead of raising on a taken port
    probe_socket = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe_socket.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe_socket.bind((config.host, config.port))
    except OSError as exc:
        if exc.errno == errno.EADDRINUSE:
            raise PortInUse(f"port {config.port} is already in use") from exc
        raise BadConfig(f"cannot bind {config.host}:{config.port}: {exc}") from exc
    finally:
        probe_socket.close()
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
