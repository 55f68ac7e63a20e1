import { ApiClient, ApiError, ConflictError } from './api';
import {
  closeWhatIf,
  documentWithPending,
  initialState,
  togglePractice,
  toggleWhatIfFlip,
  type MatrixViewState,
} from './state';
import {
  renderDetail,
  renderHeader,
  renderMatrix,
  renderPendingBar,
  renderWhatIfPanel,
} from './render';
import type { ModelDoc } from './types';

/**
 * The dashboard: a matrix of practice cells over the active model, a profile
 * header, a pending-changes bar, a detail pane, and a what-if panel.
 *
 * Scoring stays on the server: the header always shows the last vector the
 * score endpoint returned, and the what-if overlay always comes from the
 * whatif endpoint. What-if interactions never write.
 */
export class DashboardApp {
  readonly state: MatrixViewState = initialState();
  private model: ModelDoc | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
  ) {
    this.root.addEventListener('click', (event) => {
      void this.onClick(event);
    });
  }

  async load(assessmentId: string): Promise<void> {
    this.state.banner = null;
    this.state.conflict = false;
    try {
      this.model = this.model ?? (await this.api.getModel());
      const { doc, etag } = await this.api.getAssessment(assessmentId);
      this.state.assessmentId = assessmentId;
      this.state.saved = doc;
      this.state.etag = etag;
      this.state.pending = new Map();
      closeWhatIf(this.state);
      this.state.profile = await this.api.score(assessmentId);
    } catch (error) {
      if (error instanceof ApiError && error.status === 404) {
        await this.showPicker();
        return;
      }
      this.state.banner = `Service unreachable: ${(error as Error).message}`;
    }
    this.render();
  }

  private async showPicker(): Promise<void> {
    let entries: { id: string; project: string }[] = [];
    try {
      entries = await this.api.listAssessments();
    } catch {
      // leave the picker empty; the banner below explains enough
    }
    this.root.replaceChildren();
    const picker = document.createElement('section');
    picker.setAttribute('data-testid', 'picker');
    const heading = document.createElement('h2');
    heading.textContent = 'Pick an assessment';
    picker.appendChild(heading);
    for (const entry of entries) {
      const button = document.createElement('button');
      button.setAttribute('data-pick', entry.id);
      button.textContent = `${entry.project} (${entry.id})`;
      picker.appendChild(button);
    }
    const hint = document.createElement('p');
    hint.textContent = 'Create assessments with the CLI: rsmm assess --project NAME';
    picker.appendChild(hint);
    this.root.appendChild(picker);
  }

  private async onClick(event: Event): Promise<void> {
    const target = event.target as HTMLElement;
    const pick = target.getAttribute('data-pick');
    if (pick) {
      await this.load(pick);
      return;
    }
    const action = target.getAttribute('data-action');
    if (action) {
      await this.onAction(action);
      return;
    }
    const code = target.getAttribute('data-code');
    if (code) {
      if (this.state.whatIfOpen) {
        toggleWhatIfFlip(this.state, code);
        await this.refreshOverlay();
      } else {
        togglePractice(this.state, code);
        this.state.selectedCode = code;
      }
      this.render();
    }
  }

  private async onAction(action: string): Promise<void> {
    switch (action) {
      case 'save':
        await this.save();
        break;
      case 'discard':
        this.state.pending = new Map();
        break;
      case 'open-whatif':
        this.state.whatIfOpen = true;
        await this.refreshOverlay();
        break;
      case 'close-whatif':
        closeWhatIf(this.state);
        break;
      case 'reload':
        if (this.state.assessmentId) await this.load(this.state.assessmentId);
        return;
      default:
        return;
    }
    this.render();
  }

  /** PUT pending edits with the version guard, then re-fetch the score. */
  private async save(): Promise<void> {
    if (!this.state.saved || this.state.pending.size === 0 || this.state.saving) return;
    this.state.saving = true;
    try {
      const doc = documentWithPending(this.state);
      this.state.etag = await this.api.putAssessment(doc, this.state.etag);
      this.state.saved = doc;
      this.state.pending = new Map();
      this.state.profile = await this.api.score(doc.id);
    } catch (error) {
      if (error instanceof ConflictError) {
        this.state.conflict = true;
      } else {
        this.state.banner = `Save failed: ${(error as Error).message}`;
      }
    } finally {
      this.state.saving = false;
    }
  }

  /** Ask the service for the simulated profile of the current flip set. */
  private async refreshOverlay(): Promise<void> {
    if (!this.state.assessmentId) return;
    try {
      const result = await this.api.whatIf(this.state.assessmentId, this.state.whatIfFlips);
      this.state.overlay = result.after;
    } catch (error) {
      this.state.banner = `What-if failed: ${(error as Error).message}`;
      this.state.overlay = null;
    }
  }

  render(): void {
    if (!this.model || !this.state.saved) return;
    this.root.replaceChildren(
      renderHeader(this.state),
      renderWhatIfPanel(this.state),
      renderMatrix(this.model, this.state),
      renderPendingBar(this.state),
      renderDetail(this.model, this.state),
    );
  }
}
