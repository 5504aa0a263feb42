"""Local editing service: upload a mesh once, re-flatten by backsolves only.

JSON endpoints (all bound to localhost by default):

* ``POST /mesh``      {obj} -> mesh id, boundary count, initial flattening
* ``GET  /boundary``  cyclic boundary data (k, current k~, u, dual lengths)
* ``POST /boundary``  {mode, values | spline, revision?} -> new UVs + report
* ``POST /mode``      switch between auto / angle / length editing
* ``GET  /stats``     factorization and backsolve counters

Violated constraints give 400 (with a normalized suggestion for angle sums);
a stale ``revision`` gives 409.  Edits on one session are serialized.
"""

from __future__ import annotations

import threading
from typing import Literal, Optional

import numpy as np
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from . import apps, quality
from .errors import ConformapError
from .flatten import (
    EXTERIOR_ANGLES,
    HOLOMORPHIC,
    SCALE_FACTORS,
    BoundaryConditions,
    Flattener,
)
from .laplace import counters
from .mesh import DiskMesh
from .objio import normalize_uv, parse_obj

TWO_PI = 2.0 * np.pi


def catmull_rom_closed(control: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Closed Catmull-Rom spline through ``control`` sampled at parameters ``t``.

    The parameter runs over [0, len(control)); integer values hit the
    control points exactly.
    """
    control = np.asarray(control, dtype=np.float64)
    m = len(control)
    t = np.mod(np.asarray(t, dtype=np.float64), m)
    i = np.floor(t).astype(int)
    s = t - i
    p0 = control[(i - 1) % m]
    p1 = control[i % m]
    p2 = control[(i + 1) % m]
    p3 = control[(i + 2) % m]
    return 0.5 * (
        2.0 * p1
        + (-p0 + p2) * s
        + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * s * s
        + (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * s * s * s
    )


class SplineSpec(BaseModel):
    controlPoints: list[float]
    samplesPerVertex: Optional[int] = None


class MeshPost(BaseModel):
    obj: str


class BoundaryPost(BaseModel):
    meshId: Optional[str] = None
    mode: Literal["angles", "lengths", "scaleFactors"]
    values: Optional[list[float]] = None
    spline: Optional[SplineSpec] = None
    revision: Optional[int] = None


class ModePost(BaseModel):
    meshId: Optional[str] = None
    mode: Literal["auto", "angles", "lengths"]
    extension: Optional[Literal["holomorphic", "harmonic"]] = None
    revision: Optional[int] = None


class EditSession:
    """One loaded mesh: a single factorization plus the current boundary data."""

    def __init__(self, mesh: DiskMesh):
        self.mesh = mesh
        self.flattener = Flattener(mesh)
        self.lock = threading.Lock()
        self.mode = "auto"
        self.extension = HOLOMORPHIC
        self.revision = 0
        self.factorizations_at_load = counters.factorizations
        self.bc = self.flattener.complete(BoundaryConditions(
            SCALE_FACTORS, u=np.zeros(mesh.n_boundary), extension=self.extension))
        self.flattening = self.flattener.flatten(self.bc)

    def reflatten(self, bc: BoundaryConditions):
        self.bc = self.flattener.complete(bc)
        self.flattening = self.flattener.flatten(self.bc)
        self.revision += 1

    def response(self, mesh_id: str) -> dict:
        report = quality.quasi_conformal_error(self.mesh, self.flattening.coords)
        return {
            "meshId": mesh_id,
            "revision": self.revision,
            "boundaryVertexCount": self.mesh.n_boundary,
            "mode": self.mode,
            "extension": self.extension,
            "uv": normalize_uv(self.flattening.coords).tolist(),
            "raw": self.flattening.coords.tolist(),
            "report": report.to_dict(),
        }


def create_app(sessions: dict | None = None) -> FastAPI:
    app = FastAPI(title="conformap edit service")
    sessions = sessions if sessions is not None else {}
    state = {"sessions": sessions, "next_id": len(sessions)}

    def get_session(mesh_id: Optional[str]) -> tuple[str, EditSession]:
        sessions = state["sessions"]
        if not sessions:
            raise HTTPException(status_code=404, detail="no mesh loaded")
        if mesh_id is None:
            mesh_id = next(reversed(sessions))
        if mesh_id not in sessions:
            raise HTTPException(status_code=404, detail=f"unknown mesh {mesh_id}")
        return mesh_id, sessions[mesh_id]

    def check_revision(session: EditSession, revision: Optional[int]):
        if revision is not None and revision != session.revision:
            raise HTTPException(
                status_code=409,
                detail={"error": "stale revision",
                        "expected": session.revision, "got": revision},
            )

    @app.post("/mesh")
    def post_mesh(body: MeshPost):
        try:
            positions, faces = parse_obj(body.obj)
            mesh = DiskMesh.from_positions(positions, faces)
            session = EditSession(mesh)
        except ConformapError as exc:
            raise HTTPException(status_code=400, detail={
                "error": type(exc).__name__, "message": str(exc)}) from exc
        mesh_id = f"m{state['next_id']}"
        state["next_id"] += 1
        state["sessions"][mesh_id] = session
        return session.response(mesh_id)

    @app.get("/boundary")
    def get_boundary(meshId: Optional[str] = None):
        mesh_id, session = get_session(meshId)
        with session.lock:
            mesh = session.mesh
            u = session.bc.u
            lengths = np.exp(0.5 * (u + np.roll(u, -1))) * mesh.boundary_edge_lengths
            return {
                "meshId": mesh_id,
                "revision": session.revision,
                "mode": session.mode,
                "boundaryLoop": mesh.boundary_loop.tolist(),
                "k": session.flattener.curvatures.k.tolist(),
                "kTarget": session.bc.k_target.tolist(),
                "u": u.tolist(),
                "dualLengths": mesh.dual_boundary_lengths.tolist(),
                "edgeLengths": mesh.boundary_edge_lengths.tolist(),
                "targetLengths": lengths.tolist(),
            }

    def sample_values(session: EditSession, body: BoundaryPost):
        nb = session.mesh.n_boundary
        if body.values is not None:
            values = np.asarray(body.values, dtype=np.float64)
            if values.shape != (nb,):
                raise HTTPException(status_code=400, detail={
                    "error": "dimension mismatch",
                    "expected": nb, "got": len(body.values)})
            return values, False
        if body.spline is None:
            raise HTTPException(status_code=400,
                                detail={"error": "values or spline required"})
        control = np.asarray(body.spline.controlPoints, dtype=np.float64)
        if len(control) < 4:
            raise HTTPException(status_code=400, detail={
                "error": "closed spline needs at least 4 control points"})
        if body.spline.samplesPerVertex is not None \
                and len(control) * body.spline.samplesPerVertex != nb:
            raise HTTPException(status_code=400, detail={
                "error": "controlPoints * samplesPerVertex must equal boundary count",
                "expected": nb})
        t = np.arange(nb) * (len(control) / nb)
        return catmull_rom_closed(control, t), True

    @app.post("/boundary")
    def post_boundary(body: BoundaryPost):
        mesh_id, session = get_session(body.meshId)
        with session.lock:
            check_revision(session, body.revision)
            mesh = session.mesh
            if body.mode == "angles":
                values, from_spline = sample_values(session, body)
                total = values.sum()
                if from_spline:
                    if total <= 0:
                        raise HTTPException(status_code=400, detail={
                            "error": "spline curvature must have positive total"})
                    values = values * (TWO_PI / total)
                elif abs(total - TWO_PI) > 1e-9:
                    suggestion = (values * (TWO_PI / total) if total > 0
                                  else values + (TWO_PI - total) / mesh.n_boundary)
                    raise HTTPException(status_code=400, detail={
                        "error": "angle sum violation",
                        "sum": float(total),
                        "expected": TWO_PI,
                        "suggestion": suggestion.tolist(),
                    })
                bc = BoundaryConditions(EXTERIOR_ANGLES, k_target=values,
                                        extension=session.extension)
                session.mode = "angles"
            elif body.mode == "lengths":
                values, _ = sample_values(session, body)
                if (values <= 0).any():
                    raise HTTPException(status_code=400, detail={
                        "error": "target lengths must be positive"})
                u = apps.scale_factors_from_lengths(mesh, values)
                bc = BoundaryConditions(SCALE_FACTORS, u=u, extension=session.extension)
                session.mode = "lengths"
            else:  # scaleFactors
                values, _ = sample_values(session, body)
                bc = BoundaryConditions(SCALE_FACTORS, u=values,
                                        extension=session.extension)
                session.mode = "lengths"
            try:
                session.reflatten(bc)
            except ConformapError as exc:
                raise HTTPException(status_code=400, detail={
                    "error": type(exc).__name__, "message": str(exc)}) from exc
            return session.response(mesh_id)

    @app.post("/mode")
    def post_mode(body: ModePost):
        mesh_id, session = get_session(body.meshId)
        with session.lock:
            check_revision(session, body.revision)
            if body.extension is not None:
                session.extension = body.extension
            if body.mode == "auto":
                bc = BoundaryConditions(SCALE_FACTORS,
                                        u=np.zeros(session.mesh.n_boundary),
                                        extension=session.extension)
            elif body.mode == "angles":
                # re-express the current data through the angle side
                bc = BoundaryConditions(EXTERIOR_ANGLES,
                                        k_target=session.bc.k_target,
                                        extension=session.extension)
            else:
                bc = BoundaryConditions(SCALE_FACTORS, u=session.bc.u,
                                        extension=session.extension)
            try:
                session.reflatten(bc)
            except ConformapError as exc:
                raise HTTPException(status_code=400, detail={
                    "error": type(exc).__name__, "message": str(exc)}) from exc
            session.mode = body.mode
            return session.response(mesh_id)

    @app.get("/stats")
    def get_stats():
        return {
            **counters.snapshot(),
            "sessions": {
                mesh_id: {
                    "revision": s.revision,
                    "factorizationsAtLoad": s.factorizations_at_load,
                    "vertices": s.mesh.n_vertices,
                }
                for mesh_id, s in state["sessions"].items()
            },
        }

    return app


def serve_edit_session(port: int, host: str = "127.0.0.1", obj_path: str | None = None):
    """Start the editing service (blocking)."""
    import uvicorn

    sessions: dict = {}
    if obj_path:
        with open(obj_path, "r", encoding="utf-8") as fh:
            positions, faces = parse_obj(fh.read())
        sessions["m0"] = EditSession(DiskMesh.from_positions(positions, faces))
    app = create_app(sessions)
    uvicorn.run(app, host=host, port=port, log_level="warning")
