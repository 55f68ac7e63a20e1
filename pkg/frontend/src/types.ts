/** Wire types mirroring the /api/v1 JSON schemas. */

export type PracticeState = 'implemented' | 'not_implemented' | 'unknown';

export interface CriterionDoc {
  priority: 'M' | 'S' | 'C';
  text: string;
}

export interface PracticeDoc {
  code: string;
  name: string;
  description: string;
  criteria: CriterionDoc[];
  resources: string[];
  references: string[];
}

export interface CapabilityDoc {
  index: number;
  name: string;
  practices: PracticeDoc[];
}

export interface FocusAreaDoc {
  index: number;
  name: string;
  capabilities: CapabilityDoc[];
}

export interface ModelDoc {
  metadata: { model_name: string; version: string; source?: string };
  max_level: number;
  focus_areas: FocusAreaDoc[];
}

export interface EvidenceDoc {
  source: 'manual' | 'probe';
  confidence: 'certain' | 'heuristic';
  note: string;
  observed_at: string;
  locator?: string;
}

export interface StatusDoc {
  state: PracticeState;
  evidence: EvidenceDoc[];
  criterion_checks?: Record<string, boolean>;
  review_flag?: boolean;
}

export interface AssessmentDoc {
  id: string;
  model_ref: { name: string; version: string };
  project: { name: string; repository_url?: string; description?: string };
  created_at: string;
  updated_at: string;
  statuses: Record<string, StatusDoc>;
}

export interface CapabilityScoreDoc {
  code: string;
  achieved: number;
  blocking_code: string | null;
}

export interface ProfileDoc {
  model_ref: { name: string; version: string };
  assessment_id: string;
  vector: number[];
  vector_text: string;
  capabilities: CapabilityScoreDoc[];
}

export interface WhatIfDoc {
  flipped: string[];
  before: ProfileDoc;
  after: ProfileDoc;
}

export interface AssessmentListEntry {
  id: string;
  project: string;
  updated_at: string;
  etag: string;
}
