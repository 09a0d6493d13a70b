import type { ApiClient } from './api.js';
import type { ChartSummary } from './types.js';

const TYPE_FILTERS = [
  '',
  'line',
  'bar',
  'column',
  'stackedcolumn',
  'groupedcolumn',
  'stackedbar',
  'groupedbar',
  'area',
  'stackedarea',
  'pie',
];

function escapeHtml(text: string): string {
  const div = document.createElement('div');
  div.textContent = text;
  return div.innerHTML;
}

function card(chart: ChartSummary): HTMLElement {
  const el = document.createElement('article');
  el.className = 'chart-card';
  el.dataset.chartId = chart.id;
  const svgNote = chart.has_svg ? '' : '<span class="no-svg">no image</span>';
  el.innerHTML = `
    <h3>${escapeHtml(chart.title)}</h3>
    <p class="meta">
      <span class="type-tag">${escapeHtml(chart.type)}</span>
      <span>${chart.rows} rows</span>
      ${svgNote}
    </p>
  `;
  return el;
}

export class GalleryView {
  readonly root: HTMLElement;
  private grid: HTMLElement;
  private filter: HTMLSelectElement;
  private status: HTMLElement;
  private preview: HTMLElement;
  private charts: ChartSummary[] = [];

  constructor(
    private api: ApiClient,
    private onOpen: (chartId: string) => void,
  ) {
    this.root = document.createElement('section');
    this.root.className = 'gallery';
    this.root.innerHTML = `
      <header class="gallery-header">
        <h2>Charts</h2>
        <label>Type
          <select class="type-filter">
            ${TYPE_FILTERS.map(
              (t) => `<option value="${t}">${t === '' ? 'all' : t}</option>`,
            ).join('')}
          </select>
        </label>
      </header>
      <p class="gallery-status" hidden></p>
      <div class="gallery-body">
        <div class="gallery-grid"></div>
        <aside class="preview-pane" hidden></aside>
      </div>
    `;
    this.grid = this.root.querySelector('.gallery-grid') as HTMLElement;
    this.filter = this.root.querySelector('.type-filter') as HTMLSelectElement;
    this.status = this.root.querySelector('.gallery-status') as HTMLElement;
    this.preview = this.root.querySelector('.preview-pane') as HTMLElement;

    this.filter.addEventListener('change', () => void this.load());
    this.grid.addEventListener('click', (ev) => {
      const hit = (ev.target as Element).closest('[data-chart-id]');
      if (hit) void this.showPreview((hit as HTMLElement).dataset.chartId as string);
    });
    this.preview.addEventListener('click', (ev) => {
      const btn = (ev.target as Element).closest('.open-btn');
      if (btn) this.onOpen((btn as HTMLElement).dataset.chartId as string);
    });
  }

  async load(): Promise<void> {
    this.showStatus('Loading charts...');
    try {
      const type = this.filter.value || undefined;
      this.charts = (await this.api.listCharts({ type })).charts;
    } catch (err) {
      this.grid.replaceChildren();
      this.preview.hidden = true;
      this.showStatus(`Could not reach the chart service: ${(err as Error).message}`);
      return;
    }
    // The service lists newest first; keep that order.
    this.grid.replaceChildren(...this.charts.map(card));
    this.preview.hidden = true;
    if (this.charts.length === 0) {
      this.showStatus(
        this.filter.value
          ? `No ${this.filter.value} charts in the store.`
          : 'The store is empty. Import a chart to get started.',
      );
    } else {
      this.hideStatus();
    }
  }

  async showPreview(chartId: string): Promise<void> {
    const chart = this.charts.find((c) => c.id === chartId);
    if (!chart) return;
    const svg = chart.has_svg ? await this.api.getSvg(chartId) : null;
    this.preview.innerHTML = `
      <h3>${escapeHtml(chart.title)}</h3>
      <p class="meta">
        <span class="type-tag">${escapeHtml(chart.type)}</span>
        <span>${chart.rows} rows</span>
      </p>
      <div class="preview-svg">${svg ?? '<p class="no-svg">No chart image.</p>'}</div>
      <button class="open-btn" data-chart-id="${escapeHtml(chart.id)}">
        Open in editor
      </button>
    `;
    this.preview.hidden = false;
  }

  private showStatus(text: string): void {
    this.status.textContent = text;
    this.status.hidden = false;
  }

  private hideStatus(): void {
    this.status.hidden = true;
  }
}
