/** Thin typed client for the shotspeak service; all numbers shown in the
 * UI originate from these responses. */

import type {
  CaseId,
  CompetitionInfo,
  ExplanationResponse,
  MatchInfo,
  ModelResponse,
  ShotSummary,
  WordaliseResponse,
} from './types.js';

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

type FetchLike = typeof fetch;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = '',
    private readonly fetchFn: FetchLike = fetch,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    const body = await response.json();
    if (!response.ok) {
      const code = typeof body?.code === 'string' ? body.code : 'error';
      const message = typeof body?.message === 'string' ? body.message : response.statusText;
      throw new ApiError(response.status, code, message);
    }
    return body as T;
  }

  async health(): Promise<{ status: string }> {
    return this.request('/health');
  }

  async competitions(signal?: AbortSignal): Promise<CompetitionInfo[]> {
    const body = await this.request<{ competitions: CompetitionInfo[] }>('/competitions', { signal });
    return body.competitions;
  }

  async matches(competitionId: string, signal?: AbortSignal): Promise<MatchInfo[]> {
    const body = await this.request<{ matches: MatchInfo[] }>(
      `/competitions/${encodeURIComponent(competitionId)}/matches`,
      { signal },
    );
    return body.matches;
  }

  async model(competitionId: string, signal?: AbortSignal): Promise<ModelResponse> {
    return this.request(`/competitions/${encodeURIComponent(competitionId)}/model`, { signal });
  }

  async matchShots(matchId: string, signal?: AbortSignal): Promise<ShotSummary[]> {
    const body = await this.request<{ shots: ShotSummary[] }>(
      `/matches/${encodeURIComponent(matchId)}/shots`,
      { signal },
    );
    return body.shots;
  }

  async explanation(shotId: string, signal?: AbortSignal): Promise<ExplanationResponse> {
    return this.request(`/shots/${encodeURIComponent(shotId)}/explanation`, { signal });
  }

  async wordalise(
    shotId: string,
    caseId: CaseId,
    options: { debug?: boolean; signal?: AbortSignal } = {},
  ): Promise<WordaliseResponse> {
    const query = options.debug ? '?debug=1' : '';
    return this.request(`/shots/${encodeURIComponent(shotId)}/wordalise${query}`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ case: caseId }),
      signal: options.signal,
    });
  }
}
