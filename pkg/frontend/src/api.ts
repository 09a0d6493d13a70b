import type {
  ChartDetail,
  ChartList,
  DescriptionResponse,
  FeatureCatalog,
  RenderRequest,
} from './types.js';

export class ApiError extends Error {
  constructor(public status: number, public kind: string, message: string) {
    super(message);
  }
}

async function checkError(resp: Response): Promise<Response> {
  if (resp.ok) return resp;
  let kind = 'unknown';
  let message = resp.statusText;
  try {
    const body = await resp.json();
    kind = body.error.type;
    message = body.error.message;
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ApiError(resp.status, kind, message);
}

export class ApiClient {
  constructor(private base = '') {}

  private async getJson<T>(path: string): Promise<T> {
    const resp = await checkError(await fetch(this.base + path));
    return resp.json();
  }

  listCharts(opts: { type?: string } = {}): Promise<ChartList> {
    const query = opts.type ? `?type=${encodeURIComponent(opts.type)}` : '';
    return this.getJson(`/api/charts${query}`);
  }

  getChart(id: string): Promise<ChartDetail> {
    return this.getJson(`/api/charts/${encodeURIComponent(id)}`);
  }

  getFeatures(id: string): Promise<FeatureCatalog> {
    return this.getJson(`/api/charts/${encodeURIComponent(id)}/features`);
  }

  async getSvg(id: string): Promise<string | null> {
    const resp = await fetch(`${this.base}/api/charts/${encodeURIComponent(id)}/svg`);
    if (resp.status === 404) return null;
    await checkError(resp);
    return resp.text();
  }

  async renderDescription(
    id: string,
    request: RenderRequest,
    signal?: AbortSignal,
  ): Promise<DescriptionResponse> {
    const resp = await checkError(
      await fetch(`${this.base}/api/charts/${encodeURIComponent(id)}/description`, {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify(request),
        signal,
      }),
    );
    return resp.json();
  }
}

// The API origin can differ from wherever the static files are served;
// ?api=http://host:port overrides, and the choice sticks in localStorage.
export function apiBaseFromLocation(loc: Location, storage: Storage): string {
  const param = new URLSearchParams(loc.search).get('api');
  if (param !== null) {
    storage.setItem('chartscribe.api', param);
    return param;
  }
  return storage.getItem('chartscribe.api') ?? '';
}
