import {
  ApproximateSubquery,
  Condition,
  QueryRequestBody,
  QueryResult,
  conditionKey,
  sameCondition,
} from './types.js';

/** Builder state for the cooperative query loop: the selected conditions,
 * the last outcome, and the history of previously submitted queries.
 * Conditions are kept unique; the state serializes losslessly to the
 * structured /api/query request body. */
export class QueryBuilderState {
  private _conditions: Condition[] = [];
  private _lastOutcome: QueryResult | null = null;
  private _history: Condition[][] = [];

  get conditions(): readonly Condition[] {
    return this._conditions;
  }

  get lastOutcome(): QueryResult | null {
    return this._lastOutcome;
  }

  get history(): readonly Condition[][] {
    return this._history;
  }

  addCondition(condition: Condition): boolean {
    if (this._conditions.some((c) => sameCondition(c, condition))) {
      return false;
    }
    this._conditions.push({ ...condition });
    return true;
  }

  removeCondition(condition: Condition): void {
    this._conditions = this._conditions.filter((c) => !sameCondition(c, condition));
  }

  clearConditions(): void {
    this._conditions = [];
  }

  recordOutcome(outcome: QueryResult): void {
    this._lastOutcome = outcome;
  }

  toRequestBody(select?: string[]): QueryRequestBody {
    const body: QueryRequestBody = {
      conditions: this._conditions.map((c) => ({ ...c })),
    };
    if (select && select.length > 0) {
      body.select = [...select];
    }
    return body;
  }

  static fromRequestBody(body: QueryRequestBody): QueryBuilderState {
    const state = new QueryBuilderState();
    for (const c of body.conditions) {
      state.addCondition(c);
    }
    return state;
  }

  /** Replace the builder's conditions with an approximate subquery from the
   * last failure report, pushing the replaced query onto the history.
   * Rejects entries that are not part of the last outcome. */
  adoptApproximate(entry: ApproximateSubquery): void {
    const approximate = this._lastOutcome?.approximate ?? [];
    const wanted = new Set(entry.conditions.map(conditionKey));
    const present = approximate.some((candidate) => {
      const keys = new Set(candidate.conditions.map(conditionKey));
      return keys.size === wanted.size && [...wanted].every((k) => keys.has(k));
    });
    if (!present) {
      throw new Error('subquery is not part of the last failure report');
    }
    this._history.push(this._conditions.map((c) => ({ ...c })));
    this._conditions = entry.conditions.map((c) => ({ ...c }));
  }
}
