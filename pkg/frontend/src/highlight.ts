import type { Anchor } from './types.js';

export const PULSE_CLASS = 'pulse';
export const PULSE_MS = 600;

// Mark shapes by chart type, for SVGs that were never annotated with
// data-row attributes (e.g. fetched straight from the remote API).
const MARK_SELECTOR: Record<string, string> = {
  line: 'circle',
  area: 'circle',
  pie: 'path',
};

function markSelector(chartType: string): string {
  return MARK_SELECTOR[chartType] ?? 'rect';
}

function fallbackDataPoint(svg: Element, chartType: string, row: number): Element[] {
  const marks = Array.from(svg.querySelectorAll(markSelector(chartType))).filter(
    (el) => el.getAttribute('fill') !== 'none',
  );
  const hit = marks[row];
  return hit ? [hit] : [];
}

/** Elements a segment's anchors refer to. Annotated data-row/data-column
 *  attributes win; nth-mark heuristics cover plain SVGs. */
export function resolveAnchors(
  svg: Element,
  anchors: Anchor[],
  chartType: string,
): Element[] {
  const out: Element[] = [];
  for (const anchor of anchors) {
    let hits: Element[] = [];
    switch (anchor.target) {
      case 'whole_chart':
        hits = [svg];
        break;
      case 'title_block':
        hits = Array.from(svg.querySelectorAll('[data-anchor="title"]'));
        break;
      case 'data_point': {
        if (anchor.row === null) break;
        hits = Array.from(svg.querySelectorAll(`[data-row="${anchor.row}"]`));
        if (anchor.column !== null) {
          const exact = hits.filter(
            (el) => el.getAttribute('data-column') === anchor.column,
          );
          if (exact.length > 0) hits = exact;
        }
        if (hits.length === 0) hits = fallbackDataPoint(svg, chartType, anchor.row);
        break;
      }
      case 'column':
        if (anchor.column === null) break;
        hits = Array.from(
          svg.querySelectorAll(`[data-column="${anchor.column}"]`),
        );
        break;
      case 'axis':
        // Axis geometry isn't annotated; nothing to highlight.
        break;
    }
    if (hits.length === 0 && anchor.target !== 'axis') {
      console.warn('anchor did not resolve', anchor);
    }
    out.push(...hits);
  }
  return [...new Set(out)];
}

const timers = new WeakMap<Element, ReturnType<typeof setTimeout>>();

export function pulse(elements: Element[]): void {
  for (const el of elements) {
    el.classList.add(PULSE_CLASS);
    const old = timers.get(el);
    if (old !== undefined) clearTimeout(old);
    timers.set(
      el,
      setTimeout(() => el.classList.remove(PULSE_CLASS), PULSE_MS),
    );
  }
}

export function clearPulse(root: Element): void {
  for (const el of root.querySelectorAll(`.${PULSE_CLASS}`)) {
    el.classList.remove(PULSE_CLASS);
  }
  root.classList.remove(PULSE_CLASS);
}
