"""HTTP service: projects, evidence upload, analysis runs, immutable reports.

Persistence is a file-backed content-addressed store: bundle versions are keyed by
the sha256 of the uploaded archive; run reports are written once and never mutated
(instructor annotations append to a separate file and surface in the envelope, not
the body). Runs for one project execute strictly in submission order on a dedicated
worker thread; reads are lock-free on the immutable files.
"""

from __future__ import annotations

import io
import json
import queue
import threading
import zipfile
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from fastapi import Depends, FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse

from .errors import BundleError, ConfigError
from .evidence import load_bundle
from .measures import WeightConfig
from .pipeline import analyze_bundle, report_bytes
from .provider import get_provider
from .provider.transcript import RecordingProvider, TranscriptStore

TOKEN_HEADER = "x-equiscope-token"


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


class Store:
    """Filesystem layout and run-queue bookkeeping for one data directory."""

    def __init__(self, data_dir: Path):
        self.root = Path(data_dir)
        (self.root / "projects").mkdir(parents=True, exist_ok=True)
        (self.root / "runs").mkdir(parents=True, exist_ok=True)
        self._counter_lock = threading.Lock()
        self._queues: dict[str, queue.Queue] = {}
        self._queue_lock = threading.Lock()

    # -- paths ---------------------------------------------------------------

    def project_dir(self, project_id: str) -> Path:
        return self.root / "projects" / project_id

    def run_dir(self, run_id: str) -> Path:
        return self.root / "runs" / run_id

    # -- projects ------------------------------------------------------------

    def create_project(self, manifest: dict[str, Any]) -> str:
        project_id = str(manifest.get("project_id", "")).strip()
        if not project_id or "/" in project_id or project_id.startswith("."):
            raise HTTPException(400, "manifest must carry a plain project_id")
        pdir = self.project_dir(project_id)
        if pdir.exists():
            raise HTTPException(409, f"project {project_id!r} already exists")
        (pdir / "bundles").mkdir(parents=True)
        (pdir / "project.json").write_text(json.dumps(manifest, sort_keys=True, indent=1), encoding="utf-8")
        return project_id

    def list_projects(self) -> list[dict[str, Any]]:
        out = []
        for pdir in sorted((self.root / "projects").iterdir()):
            if (pdir / "project.json").is_file():
                manifest = json.loads((pdir / "project.json").read_text(encoding="utf-8"))
                versions = sorted(p.name for p in (pdir / "bundles").iterdir() if p.is_dir())
                out.append({"project_id": pdir.name, "manifest": manifest, "bundle_versions": versions})
        return out

    def require_project(self, project_id: str) -> Path:
        pdir = self.project_dir(project_id)
        if not pdir.is_dir():
            raise HTTPException(404, f"unknown project {project_id!r}")
        return pdir

    # -- evidence ------------------------------------------------------------

    def store_bundle(self, project_id: str, archive: bytes) -> tuple[str, dict[str, Any]]:
        import hashlib

        pdir = self.require_project(project_id)
        version = hashlib.sha256(archive).hexdigest()
        target = pdir / "bundles" / version
        if not target.exists():
            staging = pdir / "bundles" / f".staging-{version}"
            try:
                with zipfile.ZipFile(io.BytesIO(archive)) as zf:
                    for info in zf.infolist():
                        name = info.filename
                        if name.startswith(("/", "\\")) or ".." in Path(name).parts:
                            raise HTTPException(400, f"unsafe archive member {name!r}")
                    zf.extractall(staging)
            except zipfile.BadZipFile as exc:
                raise HTTPException(400, f"not a readable zip archive: {exc}") from exc
            staging.rename(target)
        try:
            result = load_bundle(target)
        except BundleError as exc:
            raise HTTPException(422, f"bundle failed validation: {exc}") from exc
        return version, result.summary()

    def latest_bundle_version(self, project_id: str) -> str | None:
        pdir = self.require_project(project_id)
        versions = [p for p in (pdir / "bundles").iterdir() if p.is_dir()]
        if not versions:
            return None
        versions.sort(key=lambda p: p.stat().st_mtime_ns)
        return versions[-1].name

    # -- runs ----------------------------------------------------------------

    def next_run_id(self) -> str:
        counter_file = self.root / "run-counter"
        with self._counter_lock:
            current = int(counter_file.read_text()) if counter_file.exists() else 0
            counter_file.write_text(str(current + 1))
        return f"r{current + 1:08d}"

    def write_record(self, record: dict[str, Any]) -> None:
        rdir = self.run_dir(record["run_id"])
        rdir.mkdir(parents=True, exist_ok=True)
        tmp = rdir / ".record.tmp"
        tmp.write_text(json.dumps(record, sort_keys=True, indent=1), encoding="utf-8")
        tmp.rename(rdir / "record.json")

    def read_record(self, run_id: str) -> dict[str, Any]:
        path = self.run_dir(run_id) / "record.json"
        if not path.is_file():
            raise HTTPException(404, f"unknown run {run_id!r}")
        return json.loads(path.read_text(encoding="utf-8"))

    def list_runs(self, project_id: str) -> list[dict[str, Any]]:
        self.require_project(project_id)
        records = []
        for rdir in sorted((self.root / "runs").iterdir()):
            path = rdir / "record.json"
            if path.is_file():
                record = json.loads(path.read_text(encoding="utf-8"))
                if record["project_id"] == project_id:
                    records.append(record)
        return records

    def annotations(self, run_id: str) -> list[dict[str, Any]]:
        path = self.run_dir(run_id) / "annotations.jsonl"
        if not path.is_file():
            return []
        return [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines() if line.strip()]

    def append_annotation(self, run_id: str, entry: dict[str, Any]) -> None:
        path = self.run_dir(run_id) / "annotations.jsonl"
        with open(path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(entry, sort_keys=True) + "\n")

    # -- run execution (FIFO per project) -------------------------------------

    def enqueue(self, project_id: str, run_id: str) -> None:
        with self._queue_lock:
            q = self._queues.get(project_id)
            if q is None:
                q = queue.Queue()
                self._queues[project_id] = q
                worker = threading.Thread(target=self._worker, args=(q,), daemon=True,
                                          name=f"equiscope-runs-{project_id}")
                worker.start()
            q.put(run_id)

    def _worker(self, q: queue.Queue) -> None:
        while True:
            run_id = q.get()
            try:
                self._execute(run_id)
            except Exception as exc:  # record failures; the worker must survive
                record = self.read_record(run_id)
                record.update(status="failed", error=str(exc), completed=_now())
                self.write_record(record)
            finally:
                q.task_done()

    def _execute(self, run_id: str) -> None:
        record = self.read_record(run_id)
        record.update(status="running", started=_now())
        self.write_record(record)

        bundle_dir = self.project_dir(record["project_id"]) / "bundles" / record["bundle_version"]
        config = WeightConfig.from_dict(record["config"])
        result = load_bundle(bundle_dir)
        rdir = self.run_dir(run_id)
        provider = RecordingProvider(
            get_provider(config.provider, seed=config.seed),
            TranscriptStore(rdir / "transcripts.jsonl"),
        )
        report = analyze_bundle(result.bundle, config, provider, load_summary=result.summary())
        tmp = rdir / ".report.tmp"
        tmp.write_bytes(report_bytes(report))
        tmp.rename(rdir / "report.json")

        record.update(status="complete", completed=_now(),
                      report_path="report.json", transcript_path="transcripts.jsonl")
        self.write_record(record)


def create_app(data_dir: Path | str, token: str | None = None) -> FastAPI:
    store = Store(Path(data_dir))
    app = FastAPI(title="equiscope", version="0.1.0")

    async def check_token(request: Request) -> None:
        if token is not None and request.headers.get(TOKEN_HEADER) != token:
            raise HTTPException(401, "missing or wrong shared token")

    guard = Depends(check_token)

    @app.get("/projects", dependencies=[guard])
    def list_projects():
        return store.list_projects()

    @app.post("/projects", status_code=201, dependencies=[guard])
    async def create_project(request: Request):
        manifest = await request.json()
        project_id = store.create_project(manifest)
        return {"project_id": project_id}

    @app.post("/projects/{project_id}/evidence", dependencies=[guard])
    async def upload_evidence(project_id: str, request: Request):
        archive = await request.body()
        if not archive:
            raise HTTPException(400, "empty upload; send a zip archive of the bundle directory")
        version, summary = store.store_bundle(project_id, archive)
        return {"bundle_version": version, "validation": summary}

    @app.get("/projects/{project_id}/runs", dependencies=[guard])
    def list_runs(project_id: str):
        return store.list_runs(project_id)

    @app.post("/projects/{project_id}/runs", status_code=202, dependencies=[guard])
    async def submit_run(project_id: str, request: Request):
        store.require_project(project_id)
        body = await request.json() if await request.body() else {}
        overrides = body.get("config", {})

        base_config: dict[str, Any] = {}
        bundle_version = body.get("bundle_version")
        if body.get("based_on"):
            base_record = store.read_record(body["based_on"])
            if base_record["project_id"] != project_id:
                raise HTTPException(409, "based_on run belongs to a different project")
            base_config = dict(base_record["config"])
            bundle_version = bundle_version or base_record["bundle_version"]
        if bundle_version is None:
            bundle_version = store.latest_bundle_version(project_id)
        if bundle_version is None:
            raise HTTPException(409, "project has no evidence bundle yet")
        if not (store.project_dir(project_id) / "bundles" / bundle_version).is_dir():
            raise HTTPException(404, f"unknown bundle version {bundle_version!r}")

        merged = _merge_config(base_config, overrides)
        try:
            config = WeightConfig.from_dict(merged)
        except ConfigError as exc:
            return JSONResponse(status_code=400, content={"error": str(exc), "path": exc.path})

        run_id = store.next_run_id()
        store.write_record({
            "run_id": run_id,
            "project_id": project_id,
            "bundle_version": bundle_version,
            "based_on": body.get("based_on"),
            "config": config.to_dict(),
            "status": "pending",
            "created": _now(),
        })
        store.enqueue(project_id, run_id)
        return {"run_id": run_id}

    @app.get("/runs/{run_id}", dependencies=[guard])
    def get_run(run_id: str):
        return store.read_record(run_id)

    @app.get("/runs/{run_id}/report", dependencies=[guard])
    def get_report(run_id: str):
        record = store.read_record(run_id)
        if record["status"] != "complete":
            raise HTTPException(409, f"run {run_id!r} is {record['status']}, report not available")
        body = json.loads((store.run_dir(run_id) / "report.json").read_text(encoding="utf-8"))
        envelope = dict(record)
        envelope["annotations"] = store.annotations(run_id)
        return {"envelope": envelope, "body": body}

    @app.post("/runs/{run_id}/annotations", status_code=201, dependencies=[guard])
    async def add_annotation(run_id: str, request: Request):
        store.read_record(run_id)  # 404 on unknown run
        payload = await request.json()
        kind = payload.get("kind", "annotation")
        if kind not in ("annotation", "override", "reviewed"):
            raise HTTPException(400, f"unknown annotation kind {kind!r}")
        entry = {
            "kind": kind,
            "text": str(payload.get("text", "")),
            "author": str(payload.get("author", "")),
            "target": payload.get("target"),
            "created": _now(),
        }
        store.append_annotation(run_id, entry)
        return entry

    app.state.store = store
    return app


def _merge_config(base: dict[str, Any], overrides: dict[str, Any]) -> dict[str, Any]:
    """Overrides win; masks merge per-mask (each named mask is replaced wholesale)."""
    merged = dict(base)
    for key, value in overrides.items():
        if key in ("benchmark_masks", "dimension_masks") and isinstance(value, dict):
            combined = dict(merged.get(key, {}))
            combined.update(value)
            merged[key] = combined
        else:
            merged[key] = value
    return merged
