import type {
  AttributesResponse,
  QueryRequestBody,
  QueryResult,
  VariableInfo,
} from './types.js';

export class ApiError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Thin typed client over the engine's HTTP API. The fetch implementation
 * is injectable so tests can run without a network. */
export class ApiClient {
  constructor(
    private readonly baseUrl: string = '',
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, init);
    if (!response.ok) {
      let detail = `${response.status}`;
      try {
        const body = await response.json();
        detail = typeof body.detail === 'string'
          ? body.detail
          : (body.detail?.message ?? JSON.stringify(body.detail ?? body));
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(detail, response.status);
    }
    return response.json() as Promise<T>;
  }

  attributes(): Promise<AttributesResponse> {
    return this.request('/api/attributes');
  }

  membershipFunctions(attribute: string): Promise<VariableInfo> {
    return this.request(`/api/mf/${encodeURIComponent(attribute)}`);
  }

  query(body: QueryRequestBody): Promise<QueryResult> {
    return this.request('/api/query', {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
    });
  }
}
