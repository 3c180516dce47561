/** Selection state machine. Transitions always clear downstream selections,
 * so an invalid (match, shot) pair is unreachable by construction. */

import type { CaseId } from './types.js';

export interface ViewState {
  competitionId: string | null;
  matchId: string | null;
  shotId: string | null;
  caseId: CaseId;
  debugVisible: boolean;
}

export const initialState: ViewState = {
  competitionId: null,
  matchId: null,
  shotId: null,
  caseId: 'case4',
  debugVisible: false,
};

export function selectCompetition(state: ViewState, competitionId: string): ViewState {
  if (state.competitionId === competitionId) return state;
  return { ...state, competitionId, matchId: null, shotId: null };
}

export function selectMatch(state: ViewState, matchId: string, validMatchIds: string[]): ViewState {
  if (state.competitionId === null || !validMatchIds.includes(matchId)) return state;
  if (state.matchId === matchId) return state;
  return { ...state, matchId, shotId: null };
}

export function selectShot(state: ViewState, shotId: string, validShotIds: string[]): ViewState {
  if (state.matchId === null || !validShotIds.includes(shotId)) return state;
  return { ...state, shotId };
}

export function setCase(state: ViewState, caseId: CaseId): ViewState {
  return { ...state, caseId };
}

export function toggleDebug(state: ViewState): ViewState {
  return { ...state, debugVisible: !state.debugVisible };
}

export function isConsistent(state: ViewState): boolean {
  if (state.shotId !== null && state.matchId === null) return false;
  if (state.matchId !== null && state.competitionId === null) return false;
  return true;
}
