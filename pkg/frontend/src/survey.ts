/**
 * Questionnaire flow state: one form per prompt, submission blocked
 * until every item is answered within the instrument's scale.
 */

import type { SurveyAnswerMsg, SurveyPromptMsg } from "./protocol.js";

export class SurveyForm {
  readonly position: string;
  readonly instrument: string;
  readonly items: number;
  readonly scaleMin: number;
  readonly scaleMax: number;
  private answers: (number | null)[];

  constructor(prompt: SurveyPromptMsg) {
    this.position = prompt.position;
    this.instrument = prompt.instrument;
    this.items = prompt.items;
    this.scaleMin = prompt.scale_min;
    this.scaleMax = prompt.scale_max;
    this.answers = new Array(prompt.items).fill(null);
  }

  setAnswer(index: number, value: number): boolean {
    if (index < 0 || index >= this.items) return false;
    if (!Number.isInteger(value) || value < this.scaleMin || value > this.scaleMax) {
      return false;
    }
    this.answers[index] = value;
    return true;
  }

  answer(index: number): number | null {
    return this.answers[index];
  }

  missing(): number[] {
    const out: number[] = [];
    this.answers.forEach((a, i) => {
      if (a === null) out.push(i);
    });
    return out;
  }

  isComplete(): boolean {
    return this.missing().length === 0;
  }

  /** The answer message, or null while any item is unanswered. */
  toMessage(): Omit<SurveyAnswerMsg, "seq"> | null {
    if (!this.isComplete()) return null;
    return {
      type: "survey_answer",
      position: this.position,
      instrument: this.instrument,
      item_scores: this.answers.map((a) => a as number),
    };
  }
}
