/**
 * Editor session state machine.
 *
 * Owns the spline handles and the debounced, revision-ordered exchange with
 * the server.  At most one boundary request is in flight; while one is
 * pending, the newest handle values are parked and submitted afterwards.
 * Responses older than the acknowledged revision are discarded, so the
 * displayed layout always corresponds to the latest accepted server state.
 */

import {
  BoundaryData,
  EditMode,
  FlattenResponse,
  ServerError,
  Transport,
} from "./protocol.js";

export const DEBOUNCE_MS = 50;
export const MIN_HANDLES = 4;

export interface Handle {
  /** position along the boundary in [0, 1) */
  t: number;
  value: number;
}

export interface EditSessionView {
  meshId: string;
  mode: EditMode;
  handles: Handle[];
  uv: [number, number][];
  revision: number;
  report: FlattenResponse["report"] | null;
  validationNotice: string | null;
  pendingRequests: number;
}

export interface Scheduler {
  schedule(fn: () => void, ms: number): unknown;
  cancel(token: unknown): void;
}

const defaultScheduler: Scheduler = {
  schedule: (fn, ms) => setTimeout(fn, ms),
  cancel: (token) => clearTimeout(token as ReturnType<typeof setTimeout>),
};

export class EditorSession {
  readonly view: EditSessionView;
  private boundary: BoundaryData | null = null;
  private debounceToken: unknown = null;
  private inFlight = false;
  private queued = false;
  private acceptedRevisions: number[] = [];

  constructor(
    private readonly transport: Transport,
    initial: FlattenResponse,
    handleCount = 8,
    private readonly scheduler: Scheduler = defaultScheduler,
  ) {
    if (handleCount < MIN_HANDLES) {
      throw new Error(`a closed spline needs at least ${MIN_HANDLES} handles`);
    }
    this.view = {
      meshId: initial.meshId,
      mode: "angles",
      handles: Array.from({ length: handleCount }, (_, i) => ({
        t: i / handleCount,
        value: 1.0,
      })),
      uv: initial.uv,
      revision: initial.revision,
      report: initial.report,
      validationNotice: null,
      pendingRequests: 0,
    };
    this.acceptedRevisions.push(initial.revision);
  }

  /** Revisions applied to the view, in arrival order (for tests). */
  get revisionLog(): readonly number[] {
    return this.acceptedRevisions;
  }

  async refreshBoundary(): Promise<void> {
    this.boundary = await this.transport.getBoundary(this.view.meshId);
    this.resetHandlesFromBoundary();
  }

  /** Seed handle values from the current server-side boundary data. */
  private resetHandlesFromBoundary(): void {
    if (!this.boundary) return;
    const source =
      this.view.mode === "angles" ? this.boundary.kTarget : this.boundary.targetLengths;
    const n = source.length;
    for (const handle of this.view.handles) {
      handle.value = source[Math.round(handle.t * n) % n];
    }
  }

  /** Drag moves one handle; the request is debounced. */
  dragHandle(index: number, value: number): void {
    this.view.handles[index].value = value;
    this.view.validationNotice = null;
    if (this.debounceToken !== null) {
      this.scheduler.cancel(this.debounceToken);
    }
    this.debounceToken = this.scheduler.schedule(() => {
      this.debounceToken = null;
      void this.submitSpline();
    }, DEBOUNCE_MS);
  }

  /** Immediate submit (drag release); collapses with any pending debounce. */
  releaseHandle(): void {
    if (this.debounceToken !== null) {
      this.scheduler.cancel(this.debounceToken);
      this.debounceToken = null;
      void this.submitSpline();
    }
  }

  private async submitSpline(): Promise<void> {
    if (this.inFlight) {
      this.queued = true;
      return;
    }
    this.inFlight = true;
    this.view.pendingRequests += 1;
    try {
      const response = await this.transport.postBoundary({
        meshId: this.view.meshId,
        mode: this.view.mode,
        spline: { controlPoints: this.view.handles.map((h) => h.value) },
        revision: this.view.revision,
      });
      this.applyResponse(response);
    } catch (error) {
      this.surfaceError(error as ServerError);
    } finally {
      this.view.pendingRequests -= 1;
      this.inFlight = false;
      if (this.queued) {
        this.queued = false;
        void this.submitSpline();
      }
    }
  }

  /** Switch between angle and length editing via the server's exchange. */
  async toggleMode(): Promise<void> {
    const next: EditMode = this.view.mode === "angles" ? "lengths" : "angles";
    try {
      const response = await this.transport.postMode({
        meshId: this.view.meshId,
        mode: next,
        revision: this.view.revision,
      });
      this.view.mode = next;
      this.applyResponse(response);
      await this.refreshBoundary();
    } catch (error) {
      this.surfaceError(error as ServerError);
    }
  }

  private applyResponse(response: FlattenResponse): void {
    if (response.revision <= this.view.revision && this.acceptedRevisions.length) {
      return; // stale or duplicate: displayed state must track the newest revision
    }
    this.view.uv = response.uv;
    this.view.revision = response.revision;
    this.view.report = response.report;
    this.acceptedRevisions.push(response.revision);
  }

  private surfaceError(error: ServerError): void {
    const detail = error?.detail as { error?: string; suggestion?: number[] } | undefined;
    if (error?.status === 409) {
      this.view.validationNotice = "edit raced a newer revision; retry";
      return;
    }
    if (detail?.suggestion) {
      this.view.validationNotice =
        `${detail.error}: normalized values available`;
      return;
    }
    this.view.validationNotice = detail?.error ?? "request failed";
  }
}
