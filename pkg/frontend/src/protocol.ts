/**
 * Typed client for the editing service.  The UI consumes these endpoints
 * verbatim and never derives geometry on its own: every UV set it renders
 * arrives through a FlattenResponse.
 */

export type EditMode = "angles" | "lengths";

export interface QualitySummary {
  qAvg: number;
  qMax: number;
  flippedFaces: number[];
  flippedAreaFraction: number;
  degenerateFaces: number[];
  uMin: number;
  uMax: number;
}

export interface FlattenResponse {
  meshId: string;
  revision: number;
  boundaryVertexCount: number;
  mode: string;
  extension: string;
  uv: [number, number][];
  raw: [number, number][];
  report: QualitySummary;
}

export interface BoundaryData {
  meshId: string;
  revision: number;
  mode: string;
  boundaryLoop: number[];
  k: number[];
  kTarget: number[];
  u: number[];
  dualLengths: number[];
  edgeLengths: number[];
  targetLengths: number[];
}

export interface SplinePayload {
  controlPoints: number[];
  samplesPerVertex?: number;
}

export interface BoundaryRequest {
  meshId?: string;
  mode: EditMode;
  values?: number[];
  spline?: SplinePayload;
  revision?: number;
}

export interface ModeRequest {
  meshId?: string;
  mode: "auto" | EditMode;
  extension?: "holomorphic" | "harmonic";
  revision?: number;
}

export interface ServerError {
  status: number;
  detail: unknown;
}

export interface Transport {
  postMesh(obj: string): Promise<FlattenResponse>;
  getBoundary(meshId?: string): Promise<BoundaryData>;
  postBoundary(req: BoundaryRequest): Promise<FlattenResponse>;
  postMode(req: ModeRequest): Promise<FlattenResponse>;
}

/** Fetch-based transport; rejects with a ServerError on non-2xx responses. */
export class HttpTransport implements Transport {
  constructor(private readonly baseUrl: string,
              private readonly fetchFn: typeof fetch = fetch) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    const body = await response.json();
    if (!response.ok) {
      throw { status: response.status, detail: body.detail ?? body } as ServerError;
    }
    return body as T;
  }

  postMesh(obj: string): Promise<FlattenResponse> {
    return this.request("/mesh", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ obj }),
    });
  }

  getBoundary(meshId?: string): Promise<BoundaryData> {
    const query = meshId ? `?meshId=${encodeURIComponent(meshId)}` : "";
    return this.request(`/boundary${query}`);
  }

  postBoundary(req: BoundaryRequest): Promise<FlattenResponse> {
    return this.request("/boundary", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(req),
    });
  }

  postMode(req: ModeRequest): Promise<FlattenResponse> {
    return this.request("/mode", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(req),
    });
  }
}
