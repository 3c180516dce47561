/** Response document types for the shotspeak HTTP API. */

export interface CompetitionInfo {
  competition_id: string;
  name: string;
  n_shots: number;
  n_matches: number;
  fitted: boolean;
}

export interface MatchInfo {
  match_id: string;
  home_team: string;
  away_team: string;
  n_shots: number;
}

export interface Point {
  x: number;
  y: number;
}

export interface ShotSummary {
  shot_id: string;
  match_id: string;
  competition_id: string;
  minute: number;
  player_name: string;
  team_name: string;
  outcome_is_goal: boolean;
  body_part: string;
  play_pattern: string;
  location: Point;
  has_freeze_frame: boolean;
  xg: number | null;
}

export interface FramePlayerDoc {
  x: number;
  y: number;
  is_teammate: boolean;
  is_keeper: boolean;
}

export interface ShotDetail extends ShotSummary {
  freeze_frame: FramePlayerDoc[];
}

export type Direction = 'positive' | 'negative' | 'neutral';

export interface ContributionDoc {
  feature_name: string;
  value: number;
  direction: Direction;
}

export interface ExplanationDoc {
  shot_id: string;
  xg: number;
  log_odds: number;
  baseline_log_odds: number;
  quality_category: string;
  contributions: ContributionDoc[];
  salient: string[];
}

export interface ExplanationResponse {
  shot: ShotDetail;
  feature_values: Record<string, number>;
  explanation: ExplanationDoc;
}

export interface WireMessage {
  role: 'system' | 'user' | 'assistant';
  content: string;
}

export interface SynthesizedSections {
  quality_section: string;
  features_section: string;
  contributions_section: string;
}

export interface WordaliseResponse {
  shot_id: string;
  case: string;
  text: string;
  attempts: number;
  synthesized: SynthesizedSections;
  prompt?: WireMessage[];
}

export interface ModelDoc {
  competition_id: string;
  feature_names: string[];
  intercept: number;
  coefficients: number[];
  feature_means: number[];
  standard_errors: number[];
  p_values: number[];
  n_shots: number;
  n_goals: number;
  log_likelihood: number;
  converged: boolean;
}

export interface ModelResponse {
  model: ModelDoc;
  summary: string;
  bands: unknown;
}

export type CaseId = 'case1' | 'case2' | 'case3' | 'case4' | 'case5';

export const ALL_CASES: CaseId[] = ['case1', 'case2', 'case3', 'case4', 'case5'];
