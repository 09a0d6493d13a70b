import type { ApiClient } from './api.js';
import type {
  DescriptionResponse,
  FeatureCatalog,
  FeatureInfo,
  Segment,
} from './types.js';
import { AuthoringState, choicesNeeded } from './state.js';
import { Exporter } from './exporter.js';
import { attachDragReorder } from './reorder.js';
import { clearPulse, pulse, resolveAnchors } from './highlight.js';

const CATEGORY_TITLES: Record<string, string> = {
  general_info: 'General information',
  data_fact: 'Data facts',
  context: 'Context',
};

function escapeHtml(text: string): string {
  const div = document.createElement('div');
  div.textContent = text;
  return div.innerHTML;
}

function featureItem(feature: FeatureInfo, variables: string[]): string {
  const slots =
    choicesNeeded(feature) === 0
      ? ''
      : `<span class="var-slots" hidden>
          ${Array.from({ length: choicesNeeded(feature) }, (_, slot) => {
            const options = variables
              .map((v) => `<option value="${escapeHtml(v)}">${escapeHtml(v)}</option>`)
              .join('');
            return `<select class="var-choice" data-slot="${slot}">
              <option value="">variable...</option>${options}
            </select>`;
          }).join(' ')}
          <span class="var-hint" hidden>pick a variable to include this</span>
        </span>`;
  return `
    <div class="feature-item" data-feature-id="${escapeHtml(feature.feature_id)}">
      <label class="feature-check">
        <input type="checkbox" />
        <span class="swatch" style="background:${escapeHtml(feature.color)}"></span>
        <span class="feature-label">${escapeHtml(feature.label)}</span>
      </label>
      ${slots}
    </div>
  `;
}

export class AuthoringView {
  readonly root: HTMLElement;
  state: AuthoringState | null = null;
  readonly exporter = new Exporter();
  lastResponse: DescriptionResponse | null = null;

  private chartType = '';
  private seq = 0;
  private inflight: AbortController | null = null;

  constructor(
    private api: ApiClient,
    readonly chartId: string,
  ) {
    this.root = document.createElement('section');
    this.root.className = 'authoring';
    this.root.innerHTML = `
      <header class="authoring-header">
        <a class="back-link" href="#/">&larr; All charts</a>
        <h2 class="chart-title"></h2>
      </header>
      <p class="load-error" hidden></p>
      <div class="authoring-grid" hidden>
        <aside class="feature-panel"></aside>
        <div class="preview-panel">
          <div class="svg-host"></div>
          <ol class="segment-list"></ol>
          <p class="description-text"></p>
          <p class="render-error" hidden></p>
          <div class="export-bar">
            <button class="copy-btn" disabled>Copy text</button>
            <button class="download-btn" disabled>Download .txt</button>
          </div>
        </div>
      </div>
    `;
  }

  private q<T extends HTMLElement>(selector: string): T {
    return this.root.querySelector(selector) as T;
  }

  async load(): Promise<void> {
    let catalog: FeatureCatalog;
    let svg: string | null;
    try {
      const detail = await this.api.getChart(this.chartId);
      catalog = await this.api.getFeatures(this.chartId);
      svg = await this.api.getSvg(this.chartId);
      this.chartType = detail.metadata.type;
      this.q('.chart-title').textContent = detail.metadata.title;
    } catch (err) {
      const msg = this.q('.load-error');
      msg.textContent = `Could not load chart: ${(err as Error).message}`;
      msg.hidden = false;
      return;
    }
    this.state = new AuthoringState(catalog);
    if (svg !== null) {
      this.q('.svg-host').innerHTML = svg;
    } else {
      this.q('.svg-host').innerHTML = '<p class="no-svg">No chart image.</p>';
    }
    this.buildFeaturePanel(catalog);
    this.wireEvents();
    this.q('.authoring-grid').hidden = false;
  }

  private buildFeaturePanel(catalog: FeatureCatalog): void {
    const panel = this.q('.feature-panel');
    const sections: string[] = [];
    for (const category of ['general_info', 'data_fact', 'context']) {
      const features = catalog.features.filter((f) => f.category === category);
      if (features.length === 0) continue;
      sections.push(`
        <section class="feature-category">
          <h3>${CATEGORY_TITLES[category]}</h3>
          ${features.map((f) => featureItem(f, catalog.variables)).join('')}
        </section>
      `);
    }
    sections.push(`
      <section class="feature-category context-entry">
        <h3>Context note</h3>
        <textarea class="context-input" rows="3"
          placeholder="Extra context shown when the context feature is on"></textarea>
      </section>
    `);
    panel.innerHTML = sections.join('');
  }

  private wireEvents(): void {
    const panel = this.q('.feature-panel');
    panel.addEventListener('change', (ev) => {
      const target = ev.target as HTMLElement;
      const item = target.closest('.feature-item') as HTMLElement | null;
      if (!item) return;
      const id = item.dataset.featureId as string;
      if (target.matches('input[type="checkbox"]')) {
        this.onToggle(id, item);
      } else if (target.matches('select.var-choice')) {
        this.onChoice(id, item, target as HTMLSelectElement);
      }
    });
    const context = this.q<HTMLTextAreaElement>('.context-input');
    context.addEventListener('change', () => {
      if (!this.state) return;
      this.state.contextText = context.value;
      if (this.state.renderableIds().includes('context.note')) void this.render();
    });

    const list = this.q('.segment-list');
    attachDragReorder(list, '.segment-tag', (from, to) => {
      if (this.state?.reorder(from, to)) void this.render();
    });
    list.addEventListener('mouseover', (ev) => {
      const tag = (ev.target as Element).closest('.segment-tag');
      if (tag) this.highlightSegment(Number((tag as HTMLElement).dataset.index));
    });
    list.addEventListener('mouseout', () => {
      const host = this.q('.svg-host');
      if (host.firstElementChild) clearPulse(host.firstElementChild);
    });
    list.addEventListener('click', (ev) => {
      const target = ev.target as HTMLElement;
      const tag = target.closest('.segment-tag') as HTMLElement | null;
      if (!tag) return;
      if (target.matches('.edit-btn')) this.startEdit(tag);
      if (target.matches('.reset-btn')) {
        this.state?.clearEdit(tag.dataset.featureId as string);
        void this.render();
      }
    });

    this.q('.copy-btn').addEventListener('click', () => void this.exporter.copy());
    this.q('.download-btn').addEventListener('click', () =>
      this.exporter.download(this.chartId),
    );
  }

  private onToggle(id: string, item: HTMLElement): void {
    if (!this.state) return;
    const complete = this.state.toggle(id);
    const slots = item.querySelector('.var-slots') as HTMLElement | null;
    if (slots) {
      slots.hidden = !this.state.isSelected(id);
      const hint = slots.querySelector('.var-hint') as HTMLElement;
      hint.hidden = complete || !this.state.isSelected(id);
    }
    // A selected feature with no variable chosen yet stays out of the
    // request until its dropdowns are filled in.
    if (complete || !this.state.isSelected(id)) void this.render();
  }

  private onChoice(id: string, item: HTMLElement, select: HTMLSelectElement): void {
    if (!this.state) return;
    this.state.setChoice(id, Number(select.dataset.slot), select.value);
    if (!this.state.isSelected(id)) return;
    const complete = this.state.isComplete(id);
    (item.querySelector('.var-hint') as HTMLElement).hidden = complete;
    if (complete) void this.render();
  }

  private startEdit(tag: HTMLElement): void {
    if (tag.querySelector('.edit-area')) return;
    const id = tag.dataset.featureId as string;
    const textEl = tag.querySelector('.segment-text') as HTMLElement;
    const area = document.createElement('textarea');
    area.className = 'edit-area';
    area.value = textEl.textContent ?? '';
    textEl.replaceWith(area);
    area.focus();
    // Enter commits and blur follows when the list re-renders; the
    // flag keeps that from posting twice.
    let settled = false;
    const commit = () => {
      if (settled) return;
      settled = true;
      this.state?.setEdit(id, area.value);
      void this.render();
    };
    area.addEventListener('keydown', (ev) => {
      const key = (ev as KeyboardEvent).key;
      if (key === 'Enter' && !(ev as KeyboardEvent).shiftKey) {
        ev.preventDefault();
        commit();
      } else if (key === 'Escape') {
        settled = true;
        if (this.lastResponse) this.renderSegments(this.lastResponse);
      }
    });
    area.addEventListener('blur', commit);
  }

  /** Ask the service for the composed description. Only the newest
   *  request may touch the screen; stale responses are dropped. */
  render(): Promise<void> {
    this.pending = this.renderOnce();
    return this.pending;
  }

  /** Resolves when the most recent render settles; handy for tests. */
  pending: Promise<void> = Promise.resolve();

  private async renderOnce(): Promise<void> {
    if (!this.state) return;
    const seq = ++this.seq;
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    let resp: DescriptionResponse;
    try {
      resp = await this.api.renderDescription(
        this.chartId,
        this.state.toRenderRequest(),
        controller.signal,
      );
    } catch (err) {
      if (seq !== this.seq || (err as Error).name === 'AbortError') return;
      // Keep the previous description on screen; just surface the error.
      const banner = this.q('.render-error');
      banner.textContent = `Render failed: ${(err as Error).message}`;
      banner.hidden = false;
      return;
    }
    if (seq !== this.seq) return;
    this.q('.render-error').hidden = true;
    this.lastResponse = resp;
    this.exporter.setText(resp.text);
    this.renderSegments(resp);
  }

  private renderSegments(resp: DescriptionResponse): void {
    const list = this.q('.segment-list');
    list.replaceChildren(
      ...resp.segments.map((seg, i) => this.segmentTag(seg, i)),
    );
    this.q('.description-text').textContent = resp.text;
    const disabled = this.exporter.empty;
    this.q<HTMLButtonElement>('.copy-btn').disabled = disabled;
    this.q<HTMLButtonElement>('.download-btn').disabled = disabled;
  }

  private segmentTag(seg: Segment, index: number): HTMLElement {
    const li = document.createElement('li');
    li.className = 'segment-tag';
    li.draggable = true;
    li.dataset.index = String(index);
    li.dataset.featureId = seg.feature_id;
    const feature = this.state?.catalog.features.find(
      (f) => f.feature_id === seg.feature_id,
    );
    const resetBtn = seg.edited
      ? '<button class="reset-btn" title="Restore generated text">reset</button>'
      : '';
    li.innerHTML = `
      <span class="swatch" style="background:${escapeHtml(feature?.color ?? '#888')}"></span>
      <span class="segment-label">${escapeHtml(feature?.label ?? seg.feature_id)}${
        seg.edited ? ' (edited)' : ''
      }</span>
      <span class="segment-text">${escapeHtml(seg.text)}</span>
      <button class="edit-btn" title="Edit text">edit</button>
      ${resetBtn}
    `;
    return li;
  }

  highlightSegment(index: number): void {
    const seg = this.lastResponse?.segments[index];
    const svg = this.q('.svg-host').firstElementChild;
    if (!seg || !svg || svg.tagName.toLowerCase() !== 'svg') return;
    pulse(resolveAnchors(svg, seg.anchors, this.chartType));
  }
}
