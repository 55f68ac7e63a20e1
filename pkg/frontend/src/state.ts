import type { AssessmentDoc, PracticeState, ProfileDoc } from './types';

/** Toggle order for a cell click. */
const CYCLE: Record<PracticeState, PracticeState> = {
  implemented: 'not_implemented',
  not_implemented: 'unknown',
  unknown: 'implemented',
};

export function nextState(state: PracticeState): PracticeState {
  return CYCLE[state];
}

/**
 * Client view state for one assessment: the last saved document plus the
 * set of unsaved edits, the last profile served by the service, and (while
 * the what-if panel is open) the simulated overlay profile.
 */
export interface MatrixViewState {
  assessmentId: string | null;
  saved: AssessmentDoc | null;
  etag: string;
  pending: Map<string, PracticeState>;
  profile: ProfileDoc | null;
  whatIfOpen: boolean;
  whatIfFlips: Map<string, PracticeState>;
  overlay: ProfileDoc | null;
  selectedCode: string | null;
  banner: string | null;
  conflict: boolean;
  saving: boolean;
}

export function initialState(): MatrixViewState {
  return {
    assessmentId: null,
    saved: null,
    etag: '',
    pending: new Map(),
    profile: null,
    whatIfOpen: false,
    whatIfFlips: new Map(),
    overlay: null,
    selectedCode: null,
    banner: null,
    conflict: false,
    saving: false,
  };
}

export function savedState(state: MatrixViewState, code: string): PracticeState {
  return state.saved?.statuses[code]?.state ?? 'unknown';
}

/** Effective cell state: pending edit if present, else the saved state. */
export function effectiveState(state: MatrixViewState, code: string): PracticeState {
  return state.pending.get(code) ?? savedState(state, code);
}

/**
 * Record one toggle click. Cycling back to the saved state removes the
 * pending entry, so an edit fully undone before saving issues no write.
 */
export function togglePractice(state: MatrixViewState, code: string): void {
  const next = nextState(effectiveState(state, code));
  if (next === savedState(state, code)) {
    state.pending.delete(code);
  } else {
    state.pending.set(code, next);
  }
}

/** Toggle a practice in or out of the what-if selection (as implemented). */
export function toggleWhatIfFlip(state: MatrixViewState, code: string): void {
  if (state.whatIfFlips.has(code)) {
    state.whatIfFlips.delete(code);
  } else {
    state.whatIfFlips.set(code, 'implemented');
  }
}

export function closeWhatIf(state: MatrixViewState): void {
  state.whatIfOpen = false;
  state.whatIfFlips = new Map();
  state.overlay = null;
}

/** The document a save would PUT: saved statuses plus pending edits. */
export function documentWithPending(state: MatrixViewState): AssessmentDoc {
  if (!state.saved) throw new Error('no assessment loaded');
  const doc: AssessmentDoc = JSON.parse(JSON.stringify(state.saved));
  const observedAt = new Date().toISOString().replace(/\.\d+Z$/, 'Z');
  for (const [code, newState] of state.pending) {
    const status = doc.statuses[code] ?? { state: 'unknown', evidence: [] };
    status.state = newState;
    if (newState !== 'unknown') {
      status.evidence = [
        ...status.evidence,
        {
          source: 'manual',
          confidence: 'certain',
          note: 'dashboard toggle',
          observed_at: observedAt,
        },
      ];
    }
    doc.statuses[code] = status;
  }
  doc.updated_at = observedAt;
  return doc;
}
