import type { MatrixViewState } from './state';
import { effectiveState } from './state';
import type { ModelDoc, PracticeDoc, PracticeState, ProfileDoc } from './types';

const GLYPH: Record<PracticeState, string> = {
  implemented: '✓',
  not_implemented: '✗',
  unknown: '·',
};

function el(tag: string, attrs: Record<string, string> = {}, text = ''): HTMLElement {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  if (text) node.textContent = text;
  return node;
}

function achievedFor(profile: ProfileDoc | null, key: string): number {
  return profile?.capabilities.find((c) => c.code === key)?.achieved ?? 0;
}

export function renderHeader(state: MatrixViewState): HTMLElement {
  const header = el('header');
  const project = state.saved?.project.name ?? 'no assessment';
  header.appendChild(el('h1', {}, `Maturity dashboard: ${project}`));

  const vector = el('p', { class: 'vector', 'data-testid': 'profile-vector' });
  vector.textContent = state.profile ? state.profile.vector_text : '...';
  header.appendChild(vector);

  if (state.banner) {
    header.appendChild(el('div', { class: 'banner', 'data-testid': 'banner' }, state.banner));
  }
  if (state.conflict) {
    const prompt = el('div', { class: 'banner conflict', 'data-testid': 'conflict' });
    prompt.appendChild(
      el('span', {}, 'This assessment changed on the server. Reload to continue.'),
    );
    prompt.appendChild(el('button', { 'data-action': 'reload' }, 'Reload'));
    header.appendChild(prompt);
  }
  return header;
}

export function renderMatrix(model: ModelDoc, state: MatrixViewState): HTMLElement {
  const table = el('table', { class: 'matrix', 'data-testid': 'matrix' });
  const head = el('tr');
  head.appendChild(el('th', {}, 'Capability'));
  for (let level = 1; level <= model.max_level; level += 1) {
    head.appendChild(el('th', {}, String(level)));
  }
  head.appendChild(el('th', {}, 'Achieved'));
  table.appendChild(head);

  for (const fa of model.focus_areas) {
    const faRow = el('tr', { class: 'fa-row' });
    const maturity = state.profile ? state.profile.vector[fa.index - 1] : '';
    const cell = el(
      'th',
      { colspan: String(model.max_level + 2), 'data-testid': `fa-${fa.index}` },
      `Focus area ${fa.index}: ${fa.name} (${maturity})`,
    );
    faRow.appendChild(cell);
    table.appendChild(faRow);

    for (const cap of fa.capabilities) {
      const key = `${fa.index}.${cap.index}`;
      const achieved = achievedFor(state.profile, key);
      const row = el('tr', { 'data-cap': key });
      row.appendChild(el('td', { class: 'name' }, `${key} ${cap.name}`));
      for (let level = 1; level <= model.max_level; level += 1) {
        const practice = cap.practices.find((p) => p.code === `${key}.${level}`);
        if (!practice) {
          const empty = el('td', { class: 'nopractice' });
          if (level <= achieved) empty.classList.add('path');
          row.appendChild(empty);
          continue;
        }
        const cellState = effectiveState(state, practice.code);
        const cell = el(
          'td',
          { class: `cell ${cellState}`, 'data-code': practice.code },
          GLYPH[cellState],
        );
        if (level <= achieved) cell.classList.add('path');
        if (state.pending.has(practice.code)) cell.classList.add('pending');
        if (state.whatIfOpen && state.whatIfFlips.has(practice.code)) {
          cell.classList.add('whatif-flip');
        }
        row.appendChild(cell);
      }
      row.appendChild(el('td', { class: 'achieved' }, String(achieved)));
      table.appendChild(row);
    }
  }
  return table;
}

export function renderPendingBar(state: MatrixViewState): HTMLElement {
  const bar = el('div', { class: 'pending-bar', 'data-testid': 'pending-bar' });
  if (state.pending.size === 0) {
    bar.appendChild(el('span', {}, 'No unsaved changes'));
  } else {
    bar.appendChild(
      el('span', {}, `${state.pending.size} unsaved change(s)`),
    );
    const save = el('button', { 'data-action': 'save' }, 'Save');
    if (state.saving) save.setAttribute('disabled', 'disabled');
    bar.appendChild(save);
    bar.appendChild(el('button', { 'data-action': 'discard' }, 'Discard'));
  }
  return bar;
}

export function renderWhatIfPanel(state: MatrixViewState): HTMLElement {
  const panel = el('section', { class: 'whatif', 'data-testid': 'whatif-panel' });
  if (!state.whatIfOpen) {
    panel.appendChild(el('button', { 'data-action': 'open-whatif' }, 'What-if...'));
    return panel;
  }
  panel.appendChild(el('h2', {}, 'What-if simulation'));
  panel.appendChild(
    el('p', {}, 'Click cells to flip practices to implemented in the simulation.'),
  );
  const flips = [...state.whatIfFlips.keys()].sort();
  panel.appendChild(
    el('p', { 'data-testid': 'whatif-flips' }, flips.length ? flips.join(', ') : 'no flips'),
  );
  if (state.overlay) {
    const before = state.profile?.vector_text ?? '?';
    const comparison = el('div', { class: 'comparison' });
    comparison.appendChild(el('span', { 'data-testid': 'whatif-before' }, before));
    comparison.appendChild(el('span', {}, ' → '));
    comparison.appendChild(
      el('span', { 'data-testid': 'whatif-after' }, state.overlay.vector_text),
    );
    panel.appendChild(comparison);
    for (let i = 0; i < state.overlay.vector.length; i += 1) {
      const beforeLevel = state.profile?.vector[i] ?? 0;
      const delta = state.overlay.vector[i] - beforeLevel;
      if (delta !== 0) {
        panel.appendChild(
          el('span', { class: 'delta', 'data-testid': `delta-fa${i + 1}` }, `FA${i + 1} +${delta}`),
        );
      }
    }
  }
  panel.appendChild(el('button', { 'data-action': 'close-whatif' }, 'Close'));
  return panel;
}

export function renderDetail(model: ModelDoc, state: MatrixViewState): HTMLElement {
  const pane = el('aside', { class: 'detail', 'data-testid': 'detail' });
  if (!state.selectedCode) return pane;
  let practice: PracticeDoc | undefined;
  for (const fa of model.focus_areas) {
    for (const cap of fa.capabilities) {
      practice = practice ?? cap.practices.find((p) => p.code === state.selectedCode);
    }
  }
  if (!practice) return pane;

  pane.appendChild(el('h2', {}, `${practice.code} ${practice.name}`));
  if (practice.description) pane.appendChild(el('p', {}, practice.description));

  const status = state.saved?.statuses[practice.code];
  const checks = status?.criterion_checks ?? {};
  const ordered = [...practice.criteria].sort(
    (a, b) => 'MSC'.indexOf(a.priority) - 'MSC'.indexOf(b.priority),
  );
  const list = el('ul', { class: 'criteria' });
  ordered.forEach((criterion) => {
    const item = el('li');
    const box = el('input', {
      type: 'checkbox',
      'data-criterion': String(practice!.criteria.indexOf(criterion)),
    }) as HTMLInputElement;
    box.checked = Boolean(checks[String(practice!.criteria.indexOf(criterion))]);
    item.appendChild(box);
    item.appendChild(el('span', {}, ` (${criterion.priority}) ${criterion.text}`));
    list.appendChild(item);
  });
  pane.appendChild(list);

  if (practice.resources.length) {
    pane.appendChild(el('h3', {}, 'Resources'));
    const resources = el('ul');
    practice.resources.forEach((r) => resources.appendChild(el('li', {}, r)));
    pane.appendChild(resources);
  }
  if (practice.references.length) {
    pane.appendChild(el('h3', {}, 'References'));
    const references = el('ul');
    practice.references.forEach((r) => references.appendChild(el('li', {}, r)));
    pane.appendChild(references);
  }

  pane.appendChild(el('h3', {}, 'Evidence'));
  const evidence = el('ul', { class: 'evidence' });
  (status?.evidence ?? []).forEach((record) => {
    evidence.appendChild(
      el(
        'li',
        {},
        `${record.source}/${record.confidence}: ${record.note}` +
          (record.locator ? ` (${record.locator})` : ''),
      ),
    );
  });
  if (!status?.evidence.length) evidence.appendChild(el('li', {}, 'none recorded'));
  pane.appendChild(evidence);
  return pane;
}
