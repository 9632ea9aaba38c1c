import { ApiClient } from './api.js';
import { variableChartSvg } from './chart.js';
import {
  renderConditionChips,
  renderError,
  renderOutcome,
} from './render.js';
import { QueryBuilderState } from './state.js';
import type { ApproximateSubquery, AttributesResponse } from './types.js';

/** Explorer app: compose a conjunctive fuzzy query from pickers, submit it,
 * inspect the failure report, adopt an approximate subquery with one click,
 * and chart each attribute's membership functions. One query is in flight
 * at a time; all computation happens server-side. */
export class App {
  readonly state = new QueryBuilderState();
  private attributes: AttributesResponse = { columns: [], attributes: [] };
  private pending = false;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
  ) {}

  async init(): Promise<void> {
    this.root.innerHTML = `
      <header><h1>flexquery explorer</h1></header>
      <section class="builder">
        <label>attribute <select id="attribute-picker"></select></label>
        <label>term <select id="term-picker"></select></label>
        <button id="add-condition" type="button">add condition</button>
        <div id="condition-chips" class="chips"></div>
        <button id="submit-query" type="button">run query</button>
        <div id="error" class="error"></div>
      </section>
      <section id="outcome" class="outcome"></section>
      <section class="history">
        <p class="panel-title">history</p>
        <ol id="history-list"></ol>
      </section>
      <section class="chart">
        <label>membership functions
          <select id="chart-picker"></select>
        </label>
        <div id="mf-chart"></div>
      </section>`;
    this.byId('add-condition').addEventListener('click', () => this.addCondition());
    this.byId('submit-query').addEventListener('click', () => void this.submit());
    this.byId('attribute-picker').addEventListener('change', () => this.fillTermPicker());
    this.byId('chart-picker').addEventListener('change', () => void this.showChart());

    try {
      this.attributes = await this.api.attributes();
    } catch (err) {
      this.showError(err);
      return;
    }
    this.fillPickers();
    this.renderChips();
    await this.showChart();
  }

  private byId<T extends HTMLElement = HTMLElement>(id: string): T {
    return this.root.querySelector(`#${id}`) as T;
  }

  private fillPickers(): void {
    const attrPicker = this.byId<HTMLSelectElement>('attribute-picker');
    const chartPicker = this.byId<HTMLSelectElement>('chart-picker');
    attrPicker.innerHTML = '';
    chartPicker.innerHTML = '';
    for (const variable of this.attributes.attributes) {
      for (const picker of [attrPicker, chartPicker]) {
        const option = document.createElement('option');
        option.value = variable.attribute;
        option.textContent = variable.attribute;
        picker.appendChild(option);
      }
    }
    this.fillTermPicker();
  }

  private fillTermPicker(): void {
    const attrPicker = this.byId<HTMLSelectElement>('attribute-picker');
    const termPicker = this.byId<HTMLSelectElement>('term-picker');
    termPicker.innerHTML = '';
    const variable = this.attributes.attributes.find(
      (v) => v.attribute === attrPicker.value,
    );
    for (const term of variable?.terms ?? []) {
      const option = document.createElement('option');
      option.value = term.label;
      option.textContent = term.label;
      termPicker.appendChild(option);
    }
  }

  private addCondition(): void {
    const attribute = this.byId<HTMLSelectElement>('attribute-picker').value;
    const label = this.byId<HTMLSelectElement>('term-picker').value;
    if (!attribute || !label) return;
    this.state.addCondition({ attribute, label });
    this.renderChips();
  }

  private renderChips(): void {
    renderConditionChips(this.byId('condition-chips'), this.state.conditions,
      (c) => {
        this.state.removeCondition(c);
        this.renderChips();
      });
  }

  private renderHistory(): void {
    const list = this.byId('history-list');
    list.innerHTML = '';
    for (const past of this.state.history) {
      const item = document.createElement('li');
      item.textContent = past.map((c) => `${c.attribute} is ${c.label}`).join(' and ');
      list.appendChild(item);
    }
  }

  private showError(err: unknown): void {
    const message = err instanceof Error ? err.message : String(err);
    renderError(this.byId('error'), message);
  }

  get isPending(): boolean {
    return this.pending;
  }

  async submit(): Promise<void> {
    if (this.pending || this.state.conditions.length === 0) return;
    this.pending = true;
    const submitButton = this.byId<HTMLButtonElement>('submit-query');
    submitButton.disabled = true;
    renderError(this.byId('error'), null);
    try {
      const label = this.attributes.columns.find((c) => c.kind === 'text');
      const outcome = await this.api.query(
        this.state.toRequestBody(label ? [label.name] : undefined),
      );
      this.state.recordOutcome(outcome);
      renderOutcome(this.byId('outcome'), outcome, (entry) => this.adopt(entry));
    } catch (err) {
      this.showError(err);
    } finally {
      this.pending = false;
      submitButton.disabled = false;
    }
  }

  adopt(entry: ApproximateSubquery): void {
    try {
      this.state.adoptApproximate(entry);
    } catch (err) {
      this.showError(err);
      return;
    }
    this.renderChips();
    this.renderHistory();
  }

  async showChart(): Promise<void> {
    const attribute = this.byId<HTMLSelectElement>('chart-picker').value;
    if (!attribute) return;
    try {
      const variable = await this.api.membershipFunctions(attribute);
      this.byId('mf-chart').innerHTML = variableChartSvg(variable);
    } catch (err) {
      this.showError(err);
    }
  }
}

export function mount(root: HTMLElement, baseUrl = ''): App {
  const app = new App(root, new ApiClient(baseUrl));
  void app.init();
  return app;
}
