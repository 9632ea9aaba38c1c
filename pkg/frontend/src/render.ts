import type {
  Answer,
  ApproximateSubquery,
  Condition,
  QueryResult,
} from './types.js';
import { conditionText } from './types.js';

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderConditionChips(
  root: HTMLElement,
  conditions: readonly Condition[],
  onRemove: (c: Condition) => void,
): void {
  root.innerHTML = '';
  if (conditions.length === 0) {
    root.appendChild(el('span', 'hint', 'no conditions yet'));
    return;
  }
  for (const c of conditions) {
    const chip = el('span', 'chip condition-chip', conditionText(c));
    const remove = el('button', 'chip-remove', '×');
    remove.type = 'button';
    remove.title = 'remove condition';
    remove.addEventListener('click', () => onRemove(c));
    chip.appendChild(remove);
    root.appendChild(chip);
  }
}

function degreeBar(answer: Answer): HTMLElement {
  const cell = el('div', 'degree-cell');
  const bar = el('div', 'degree-bar');
  bar.style.width = `${Math.round(answer.degree * 100)}%`;
  cell.appendChild(bar);
  cell.appendChild(el('span', 'degree-value', answer.degree.toFixed(2)));
  return cell;
}

export function renderAnswers(root: HTMLElement, answers: Answer[]): void {
  root.innerHTML = '';
  if (answers.length === 0) {
    root.appendChild(el('p', 'hint', 'no rows'));
    return;
  }
  const table = el('table', 'answers-table');
  const header = el('tr');
  header.appendChild(el('th', undefined, 'row'));
  for (const key of Object.keys(answers[0].projection)) {
    header.appendChild(el('th', undefined, key));
  }
  header.appendChild(el('th', undefined, 'degree'));
  table.appendChild(header);
  for (const answer of answers) {
    const tr = el('tr', 'answer-row');
    tr.appendChild(el('td', undefined, String(answer.row)));
    for (const value of Object.values(answer.projection)) {
      tr.appendChild(el('td', undefined, value));
    }
    const td = el('td');
    td.appendChild(degreeBar(answer));
    tr.appendChild(td);
    table.appendChild(tr);
  }
  root.appendChild(table);
}

export function renderFailureReasons(
  root: HTMLElement,
  reasons: Condition[][],
): void {
  root.innerHTML = '';
  root.appendChild(el('p', 'panel-title',
    'incompatible criteria (minimal failure reasons)'));
  for (const reason of reasons) {
    const chip = el('span', 'chip reason-chip',
      reason.map(conditionText).join(' and '));
    root.appendChild(chip);
  }
}

export function renderApproximate(
  root: HTMLElement,
  entries: ApproximateSubquery[],
  onAdopt: (entry: ApproximateSubquery) => void,
): void {
  root.innerHTML = '';
  root.appendChild(el('p', 'panel-title',
    'approximate subqueries (click to adopt)'));
  const list = el('div', 'subquery-list');
  entries.forEach((entry, i) => {
    const button = el('button', 'subquery');
    button.type = 'button';
    button.dataset.index = String(i);
    const title = entry.conditions.map(conditionText).join(' and ');
    button.appendChild(el('span', 'subquery-title', title));
    const best = entry.answers
      .slice(0, 3)
      .map((a) => `${Object.values(a.projection)[0] ?? a.row} (${a.degree.toFixed(2)})`)
      .join(', ');
    button.appendChild(el('span', 'subquery-answers', best));
    button.addEventListener('click', () => onAdopt(entry));
    list.appendChild(button);
  });
  root.appendChild(list);
}

export function renderOutcome(
  root: HTMLElement,
  outcome: QueryResult,
  onAdopt: (entry: ApproximateSubquery) => void,
): void {
  root.innerHTML = '';
  if (outcome.status === 'answers') {
    const head = el('p', 'panel-title',
      `${outcome.answers.length} answer(s), ranked by satisfaction`);
    root.appendChild(head);
    const box = el('div', 'answers');
    renderAnswers(box, outcome.answers);
    root.appendChild(box);
    return;
  }
  root.appendChild(el('p', 'empty-banner', 'the query has no answers'));
  const reasons = el('div', 'failure-reasons');
  renderFailureReasons(reasons, outcome.failure_reasons);
  root.appendChild(reasons);
  const approx = el('div', 'approximate');
  renderApproximate(approx, outcome.approximate, onAdopt);
  root.appendChild(approx);
}

export function renderError(root: HTMLElement, message: string | null): void {
  root.textContent = message ?? '';
  root.classList.toggle('visible', message !== null);
}
