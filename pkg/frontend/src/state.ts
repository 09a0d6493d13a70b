import type { FeatureCatalog, FeatureInfo, RenderRequest } from './types.js';

// How many variables a feature's dropdowns must supply before it can be
// rendered. The comparison needs a pair; everything else needs one.
export function choicesNeeded(feature: FeatureInfo): number {
  if (!feature.requires_variable) return 0;
  return feature.feature_id === 'fact.comparison' ? 2 : 1;
}

export class AuthoringState {
  readonly catalog: FeatureCatalog;
  private selected: string[] = [];
  private choices = new Map<string, string[]>();
  private edits = new Map<string, string>();
  contextText = '';

  constructor(catalog: FeatureCatalog) {
    this.catalog = catalog;
  }

  feature(id: string): FeatureInfo {
    const found = this.catalog.features.find((f) => f.feature_id === id);
    if (!found) throw new Error(`unknown feature: ${id}`);
    return found;
  }

  isSelected(id: string): boolean {
    return this.selected.includes(id);
  }

  selectedIds(): string[] {
    return [...this.selected];
  }

  /** Toggle a checkbox. Returns false when the feature still needs a
   *  variable choice, so the caller should prompt instead of rendering. */
  toggle(id: string): boolean {
    this.feature(id);
    const at = this.selected.indexOf(id);
    if (at >= 0) {
      this.selected.splice(at, 1);
      this.edits.delete(id);
      return true;
    }
    this.selected.push(id);
    return this.isComplete(id);
  }

  isComplete(id: string): boolean {
    const needed = choicesNeeded(this.feature(id));
    if (needed === 0) return true;
    const chosen = this.choices.get(id) ?? [];
    return chosen.length >= needed && chosen.every(Boolean);
  }

  setChoice(id: string, slot: number, variable: string): void {
    const feature = this.feature(id);
    const chosen = (this.choices.get(id) ?? []).slice(0, choicesNeeded(feature));
    chosen[slot] = variable;
    this.choices.set(id, chosen);
  }

  getChoices(id: string): string[] {
    return this.choices.get(id) ?? [];
  }

  setEdit(id: string, text: string): void {
    if (!this.selected.includes(id)) throw new Error(`edit for unselected ${id}`);
    this.edits.set(id, text);
  }

  clearEdit(id: string): void {
    this.edits.delete(id);
  }

  getEdit(id: string): string | undefined {
    return this.edits.get(id);
  }

  /** Move the segment at position `from` to position `to`, both indices
   *  into the renderable (complete) selection. Out-of-range is a no-op. */
  reorder(from: number, to: number): boolean {
    const renderable = this.renderableIds();
    if (from === to) return false;
    if (from < 0 || to < 0 || from >= renderable.length || to >= renderable.length) {
      return false;
    }
    const moved = renderable[from];
    const order = renderable.slice();
    order.splice(from, 1);
    order.splice(to, 0, moved);
    // Re-thread the full selection: renderable ids take the new order,
    // incomplete ones keep their positions at the end.
    const pending = this.selected.filter((id) => !this.isComplete(id));
    this.selected = [...order, ...pending];
    return true;
  }

  /** Selected features whose variable choices are complete; only these
   *  are sent to the service. */
  renderableIds(): string[] {
    return this.selected.filter((id) => this.isComplete(id));
  }

  /** The request must be valid against the catalog before it is sent. */
  validate(): void {
    const known = new Set(this.catalog.features.map((f) => f.feature_id));
    const ids = this.renderableIds();
    if (new Set(ids).size !== ids.length) throw new Error('duplicate selection');
    for (const id of ids) {
      if (!known.has(id)) throw new Error(`unknown feature: ${id}`);
    }
    for (const [id, vars] of this.choices) {
      for (const v of vars) {
        if (v && !this.catalog.variables.includes(v)) {
          throw new Error(`unknown variable ${v} for ${id}`);
        }
      }
    }
    for (const id of this.edits.keys()) {
      if (!ids.includes(id)) throw new Error(`edit for unrendered ${id}`);
    }
  }

  toRenderRequest(): RenderRequest {
    this.validate();
    const ids = this.renderableIds();
    const variable_choices: Record<string, string[]> = {};
    const manual_edits: Record<string, string> = {};
    for (const id of ids) {
      if (choicesNeeded(this.feature(id)) > 0) {
        variable_choices[id] = this.getChoices(id).slice(0, choicesNeeded(this.feature(id)));
      }
      const edit = this.edits.get(id);
      if (edit !== undefined) manual_edits[id] = edit;
    }
    return {
      selected_feature_ids: ids,
      variable_choices,
      manual_edits,
      context_text: this.contextText,
    };
  }
}
