import { afterEach, beforeEach, describe, expect, it, vi } from 'vitest';

import { clearPulse, pulse, PULSE_CLASS, resolveAnchors } from '../src/highlight.js';
import type { Anchor, FeatureCatalog } from '../src/types.js';
import { recordedResponse, recordedText } from './stub.js';

function mountSvg(markup: string): Element {
  document.body.innerHTML = markup;
  const svg = document.body.querySelector('svg');
  if (!svg) throw new Error('no svg in markup');
  return svg;
}

function anchor(partial: Partial<Anchor> & { target: Anchor['target'] }): Anchor {
  return { row: null, column: null, axis: null, ...partial };
}

describe('resolveAnchors on the annotated service svg', () => {
  const svgText = recordedText('GET', '/api/charts/line-gdp/svg');
  const catalog = recordedResponse(
    'GET',
    '/api/charts/line-gdp/features',
  ) as FeatureCatalog;

  it('maps the extrema anchors to exactly the max and min marks', () => {
    const svg = mountSvg(svgText);
    const extrema = catalog.features.find((f) => f.feature_id === 'fact.extrema');
    const hits = resolveAnchors(svg, extrema!.anchors, 'line');
    expect(hits.map((el) => el.getAttribute('data-row')).sort()).toEqual(['0', '5']);
    expect(hits.every((el) => el.getAttribute('data-column') === 'Growth')).toBe(true);
  });

  it('maps title anchors to the annotated title block', () => {
    const svg = mountSvg(svgText);
    const hits = resolveAnchors(svg, [anchor({ target: 'title_block' })], 'line');
    expect(hits).toHaveLength(1);
    expect(hits[0].getAttribute('data-anchor')).toBe('title');
  });

  it('maps whole_chart to the svg root', () => {
    const svg = mountSvg(svgText);
    expect(resolveAnchors(svg, [anchor({ target: 'whole_chart' })], 'line')).toEqual([
      svg,
    ]);
  });

  it('maps column anchors to every mark in the column', () => {
    const svg = mountSvg(svgText);
    const hits = resolveAnchors(
      svg,
      [anchor({ target: 'column', column: 'Growth' })],
      'line',
    );
    expect(hits).toHaveLength(10);
  });

  it('axis anchors highlight nothing and stay quiet', () => {
    const svg = mountSvg(svgText);
    const warn = vi.spyOn(console, 'warn').mockImplementation(() => {});
    expect(resolveAnchors(svg, [anchor({ target: 'axis' })], 'line')).toEqual([]);
    expect(warn).not.toHaveBeenCalled();
    warn.mockRestore();
  });

  it('warns once per unresolvable anchor', () => {
    const svg = mountSvg(svgText);
    const warn = vi.spyOn(console, 'warn').mockImplementation(() => {});
    const hits = resolveAnchors(
      svg,
      [anchor({ target: 'data_point', row: 99 })],
      'line',
    );
    expect(hits).toEqual([]);
    expect(warn).toHaveBeenCalledTimes(1);
    warn.mockRestore();
  });
});

describe('resolveAnchors fallback on plain svgs', () => {
  it('picks the nth circle on line charts without annotations', () => {
    const svg = mountSvg(
      '<svg><circle cx="1"/><circle cx="2"/><circle cx="3"/></svg>',
    );
    const hits = resolveAnchors(svg, [anchor({ target: 'data_point', row: 1 })], 'line');
    expect(hits).toHaveLength(1);
    expect(hits[0].getAttribute('cx')).toBe('2');
  });

  it('picks paths for pie charts and rects otherwise', () => {
    const pie = mountSvg('<svg><path d="a"/><path d="b"/></svg>');
    expect(
      resolveAnchors(pie, [anchor({ target: 'data_point', row: 1 })], 'pie')[0].getAttribute(
        'd',
      ),
    ).toBe('b');
    const bar = mountSvg(
      '<svg><rect fill="none" width="9"/><rect width="1"/><rect width="2"/></svg>',
    );
    // fill="none" marks background geometry, not data.
    expect(
      resolveAnchors(bar, [anchor({ target: 'data_point', row: 0 })], 'bar')[0].getAttribute(
        'width',
      ),
    ).toBe('1');
  });
});

describe('pulse', () => {
  beforeEach(() => {
    vi.useFakeTimers();
  });

  afterEach(() => {
    vi.useRealTimers();
  });

  it('flashes the class for 600ms', () => {
    const svg = mountSvg('<svg><circle/></svg>');
    const mark = svg.querySelector('circle') as Element;
    pulse([mark]);
    expect(mark.classList.contains(PULSE_CLASS)).toBe(true);
    vi.advanceTimersByTime(599);
    expect(mark.classList.contains(PULSE_CLASS)).toBe(true);
    vi.advanceTimersByTime(1);
    expect(mark.classList.contains(PULSE_CLASS)).toBe(false);
  });

  it('re-pulsing restarts the timer instead of stacking removals', () => {
    const svg = mountSvg('<svg><circle/></svg>');
    const mark = svg.querySelector('circle') as Element;
    pulse([mark]);
    vi.advanceTimersByTime(400);
    pulse([mark]);
    vi.advanceTimersByTime(400);
    expect(mark.classList.contains(PULSE_CLASS)).toBe(true);
    vi.advanceTimersByTime(200);
    expect(mark.classList.contains(PULSE_CLASS)).toBe(false);
  });

  it('clearPulse wipes highlights immediately', () => {
    const svg = mountSvg('<svg><circle/><rect/></svg>');
    const marks = Array.from(svg.querySelectorAll('circle, rect'));
    pulse([svg, ...marks]);
    clearPulse(svg);
    expect(svg.classList.contains(PULSE_CLASS)).toBe(false);
    expect(marks.some((m) => m.classList.contains(PULSE_CLASS))).toBe(false);
  });
});
