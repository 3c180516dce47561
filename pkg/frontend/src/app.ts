/** DOM wiring: selectors drive the state machine, every displayed number is
 * read from a service response, and selection changes cancel in-flight
 * requests. */

import { ApiClient, ApiError } from './api.js';
import { contributionPlot } from './contributions.js';
import { missingFramePlaceholder, pitchSvg } from './pitch.js';
import * as state from './state.js';
import type {
  CaseId,
  ExplanationResponse,
  MatchInfo,
  ShotSummary,
  WordaliseResponse,
} from './types.js';
import { ALL_CASES } from './types.js';

function byId<T extends HTMLElement>(id: string): T {
  const element = document.getElementById(id);
  if (!element) throw new Error(`missing element #${id}`);
  return element as T;
}

function option(value: string, label: string): HTMLOptionElement {
  const opt = document.createElement('option');
  opt.value = value;
  opt.textContent = label;
  return opt;
}

export class ShotExplorer {
  state = state.initialState;
  private matches: MatchInfo[] = [];
  private shots: ShotSummary[] = [];
  private explanations = new Map<string, ExplanationResponse>();
  private abort: AbortController | null = null;

  constructor(private readonly api: ApiClient) {}

  private restartRequests(): AbortSignal {
    this.abort?.abort();
    this.abort = new AbortController();
    return this.abort.signal;
  }

  private showError(message: string, retry: () => void): void {
    const banner = byId<HTMLDivElement>('error-banner');
    banner.hidden = false;
    banner.querySelector('.error-text')!.textContent = message;
    const button = banner.querySelector<HTMLButtonElement>('.retry')!;
    button.onclick = () => {
      banner.hidden = true;
      retry();
    };
  }

  private clearError(): void {
    byId<HTMLDivElement>('error-banner').hidden = true;
  }

  async start(): Promise<void> {
    const select = byId<HTMLSelectElement>('competition-select');
    const competitions = await this.api.competitions();
    select.replaceChildren(option('', 'Select a competition'));
    for (const competition of competitions) {
      select.append(option(competition.competition_id, `${competition.name} (${competition.n_shots} shots)`));
    }
    select.onchange = () => void this.onCompetition(select.value);
    byId<HTMLSelectElement>('match-select').onchange = (event) =>
      void this.onMatch((event.target as HTMLSelectElement).value);
    byId<HTMLSelectElement>('shot-select').onchange = (event) =>
      void this.onShot((event.target as HTMLSelectElement).value);

    const caseSelect = byId<HTMLSelectElement>('case-select');
    caseSelect.replaceChildren(...ALL_CASES.map((c) => option(c, c)));
    caseSelect.value = this.state.caseId;
    caseSelect.onchange = () => void this.onCase(caseSelect.value as CaseId);
    byId<HTMLButtonElement>('regenerate-button').onclick = () => void this.regenerate();
    byId<HTMLInputElement>('debug-toggle').onchange = () => {
      this.state = state.toggleDebug(this.state);
      void this.regenerate();
    };
  }

  async onCompetition(competitionId: string): Promise<void> {
    if (!competitionId) return;
    this.state = state.selectCompetition(this.state, competitionId);
    const signal = this.restartRequests();
    this.clearError();
    try {
      const [matches, model] = await Promise.all([
        this.api.matches(competitionId, signal),
        this.api.model(competitionId, signal),
      ]);
      this.matches = matches;
      byId<HTMLPreElement>('model-summary').textContent = model.summary;
      const select = byId<HTMLSelectElement>('match-select');
      select.replaceChildren(option('', 'Select a match'));
      for (const match of matches) {
        select.append(
          option(match.match_id, `${match.home_team} vs ${match.away_team} (${match.n_shots} shots)`),
        );
      }
      select.disabled = false;
      byId<HTMLSelectElement>('shot-select').replaceChildren();
      this.renderShotPanels();
    } catch (error) {
      this.handleError(error, () => void this.onCompetition(competitionId));
    }
  }

  async onMatch(matchId: string): Promise<void> {
    if (!matchId) return;
    this.state = state.selectMatch(this.state, matchId, this.matches.map((m) => m.match_id));
    const signal = this.restartRequests();
    this.clearError();
    try {
      this.shots = await this.api.matchShots(matchId, signal);
      this.explanations.clear();
      const explainable = this.shots.filter((shot) => shot.has_freeze_frame && shot.xg !== null);
      const docs = await Promise.all(
        explainable.map((shot) => this.api.explanation(shot.shot_id, signal)),
      );
      for (const doc of docs) this.explanations.set(doc.explanation.shot_id, doc);

      const select = byId<HTMLSelectElement>('shot-select');
      select.replaceChildren(option('', 'Select a shot'));
      for (const shot of explainable) {
        const xg = shot.xg === null ? '' : ` xG ${shot.xg.toFixed(2)}`;
        const outcome = shot.outcome_is_goal ? ' GOAL' : '';
        select.append(
          option(shot.shot_id, `${shot.minute}' ${shot.player_name} (${shot.team_name})${xg}${outcome}`),
        );
      }
      select.disabled = false;
      this.renderShotPanels();
    } catch (error) {
      this.handleError(error, () => void this.onMatch(matchId));
    }
  }

  async onShot(shotId: string): Promise<void> {
    if (!shotId) return;
    this.state = state.selectShot(this.state, shotId, this.shots.map((s) => s.shot_id));
    this.renderShotPanels();
    await this.regenerate();
  }

  async onCase(caseId: CaseId): Promise<void> {
    this.state = state.setCase(this.state, caseId);
    await this.regenerate();
  }

  async regenerate(): Promise<void> {
    if (!this.state.shotId) return;
    const signal = this.restartRequests();
    this.clearError();
    const pane = byId<HTMLDivElement>('commentary-text');
    pane.textContent = 'Generating…';
    try {
      const response = await this.api.wordalise(this.state.shotId, this.state.caseId, {
        debug: this.state.debugVisible,
        signal,
      });
      pane.textContent = response.text;
      this.renderPrompt(response);
    } catch (error) {
      pane.textContent = '';
      this.handleError(error, () => void this.regenerate());
    }
  }

  private renderPrompt(response: WordaliseResponse): void {
    const panel = byId<HTMLDivElement>('prompt-panel');
    if (!this.state.debugVisible || !response.prompt) {
      panel.hidden = true;
      return;
    }
    panel.hidden = false;
    const list = byId<HTMLDivElement>('prompt-messages');
    list.replaceChildren();
    for (const message of response.prompt) {
      const details = document.createElement('details');
      const summary = document.createElement('summary');
      summary.textContent = `${message.role}: ${message.content.slice(0, 80)}`;
      const body = document.createElement('pre');
      body.textContent = message.content;
      details.append(summary, body);
      list.append(details);
    }
  }

  private renderShotPanels(): void {
    const pitchPanel = byId<HTMLDivElement>('pitch-panel');
    const plotPanel = byId<HTMLDivElement>('contributions-panel');
    const factsPanel = byId<HTMLDivElement>('shot-facts');

    const docs = [...this.explanations.values()].map((d) => d.explanation);
    plotPanel.innerHTML = contributionPlot(docs, this.state.shotId).svg;

    if (!this.state.shotId) {
      pitchPanel.innerHTML = '<p class="placeholder">Pick a shot to see the freeze frame.</p>';
      factsPanel.textContent = '';
      return;
    }
    const doc = this.explanations.get(this.state.shotId);
    if (!doc) return;
    pitchPanel.innerHTML = doc.shot.has_freeze_frame ? pitchSvg(doc.shot) : missingFramePlaceholder();
    const xg = doc.explanation.xg;
    factsPanel.textContent =
      `${doc.shot.player_name} (${doc.shot.team_name}), minute ${doc.shot.minute} — ` +
      `xG ${xg.toFixed(2)} (${doc.explanation.quality_category.replace('_', ' ')}), ` +
      `opponents in triangle: ${doc.feature_values['opponents_in_triangle']}`;
  }

  private handleError(error: unknown, retry: () => void): void {
    if (error instanceof DOMException && error.name === 'AbortError') return;
    const message =
      error instanceof ApiError ? `${error.code}: ${error.message}` : `request failed: ${error}`;
    this.showError(message, retry);
  }
}

if (typeof document !== 'undefined' && document.getElementById('competition-select')) {
  const explorer = new ShotExplorer(new ApiClient(''));
  void explorer.start();
}
