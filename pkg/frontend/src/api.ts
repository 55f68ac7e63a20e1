import type {
  AssessmentDoc,
  AssessmentListEntry,
  ModelDoc,
  PracticeState,
  ProfileDoc,
  WhatIfDoc,
} from './types';

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export class ConflictError extends ApiError {}

async function parseError(response: Response): Promise<ApiError> {
  let code = 'error';
  let message = response.statusText;
  try {
    const body = await response.json();
    code = body.code ?? code;
    message = body.message ?? message;
  } catch {
    // non-JSON error body; keep the status text
  }
  const cls = response.status === 409 ? ConflictError : ApiError;
  return new cls(response.status, code, message);
}

/**
 * Thin client for the assessment service. The dashboard never computes
 * scores itself; every vector it displays came out of these calls.
 */
export class ApiClient {
  constructor(readonly baseUrl: string = '') {}

  private url(path: string): string {
    return `${this.baseUrl}/api/v1${path}`;
  }

  private async get(path: string): Promise<Response> {
    const response = await fetch(this.url(path));
    if (!response.ok) throw await parseError(response);
    return response;
  }

  async getModel(): Promise<ModelDoc> {
    return (await this.get('/model')).json();
  }

  async listAssessments(): Promise<AssessmentListEntry[]> {
    const body = await (await this.get('/assessments')).json();
    return body.assessments;
  }

  async getAssessment(id: string): Promise<{ doc: AssessmentDoc; etag: string }> {
    const response = await this.get(`/assessments/${encodeURIComponent(id)}`);
    return {
      doc: await response.json(),
      etag: response.headers.get('ETag') ?? '',
    };
  }

  async putAssessment(doc: AssessmentDoc, etag: string): Promise<string> {
    const response = await fetch(this.url(`/assessments/${encodeURIComponent(doc.id)}`), {
      method: 'PUT',
      headers: {
        'Content-Type': 'application/json',
        ...(etag ? { 'If-Match': etag } : {}),
      },
      body: JSON.stringify(doc),
    });
    if (!response.ok) throw await parseError(response);
    const body = await response.json();
    return `"${body.etag}"`;
  }

  async score(id: string): Promise<ProfileDoc> {
    const response = await fetch(this.url(`/assessments/${encodeURIComponent(id)}/score`), {
      method: 'POST',
    });
    if (!response.ok) throw await parseError(response);
    return response.json();
  }

  async whatIf(
    id: string,
    flips: ReadonlyMap<string, PracticeState>,
  ): Promise<WhatIfDoc> {
    const response = await fetch(this.url(`/assessments/${encodeURIComponent(id)}/whatif`), {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({
        flips: [...flips.entries()].map(([code, state]) => ({ code, state })),
      }),
    });
    if (!response.ok) throw await parseError(response);
    return response.json();
  }
}
