// Typed client for the simulator API. The server is stateless, so the only
// client-side concern is superseding: a newer scenario request aborts the
// one still in flight.

export type Level = "country" | "us_state" | "cn_province" | "aggregate";
export type RegionClass = "backfire" | "effective" | "neutral";

export interface RegionInfo {
  id: string;
  name: string;
  level: Level;
  parent: string | null;
  iso_code: string | null;
}

export interface GroupInfo {
  id: string;
  members: string[];
}

export interface BaselineResponse {
  basis: string;
  energy_twh: number;
  total_kt: number;
  per_region: Record<string, number>;
}

export interface MapDatum {
  region_id: string;
  iso_code: string | null;
  delta_kt: number;
  percent: number | null;
  class: RegionClass;
}

export interface ScenarioRequest {
  regions: string[];
  effectiveness: number;
  basis: string;
  group?: string;
}

export interface ScenarioResponse {
  banned_regions: string[];
  effectiveness: number;
  basis: string;
  energy_twh: number;
  baseline_kt: number;
  delta_kt: number;
  percent: number | null;
  per_region: { region_id: string; delta_kt: number }[];
  one_off_kt: number;
  leakage_rate: number | null;
  map: MapDatum[];
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export function isAbort(err: unknown): boolean {
  return err instanceof DOMException && err.name === "AbortError";
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class Client {
  private inflight: AbortController | null = null;

  constructor(
    private readonly base: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.base + path, init);
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = await response.json();
        if (body && typeof body.detail === "string") detail = body.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  regions(): Promise<RegionInfo[]> {
    return this.request("/api/regions");
  }

  groups(): Promise<GroupInfo[]> {
    return this.request("/api/groups");
  }

  baseline(basis: string): Promise<BaselineResponse> {
    return this.request(`/api/baseline?basis=${encodeURIComponent(basis)}`);
  }

  /** Evaluate a scenario; any scenario request still in flight is aborted. */
  scenario(body: ScenarioRequest): Promise<ScenarioResponse> {
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    return this.request<ScenarioResponse>("/api/scenario", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
      signal: controller.signal,
    }).finally(() => {
      if (this.inflight === controller) this.inflight = null;
    });
  }
}
