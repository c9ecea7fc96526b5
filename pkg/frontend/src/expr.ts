/**
 * The lottery expression grammar shared with the problem-file format.
 * Builders validate client-side against the space before anything is
 * sent to the server; the server remains the authority.
 */

import { ONE, ZERO, add, cmp, parseRat } from "./rational.js";

export interface Space {
  states: string[];
  consequences: string[]; // index 0 worst, index 1 best
}

export type Expr =
  | { matrix: string[][] }
  | { const: string }
  | { chance: string }
  | { event: string[] }
  | { mix: { w: string; of: Expr }[] }
  | { given: { event: string[]; then: Expr } };

export interface PreferenceInput {
  lhs: Expr;
  rhs: Expr;
}

export function constE(consequence: string): Expr {
  return { const: consequence };
}

export function chanceE(q: string): Expr {
  const v = parseRat(q);
  if (cmp(v, ZERO) < 0 || cmp(v, ONE) > 0) {
    throw new Error(`chance must be in [0, 1], got ${q}`);
  }
  return { chance: q };
}

export function eventE(states: string[]): Expr {
  if (states.length === 0) throw new Error("event needs at least one state");
  return { event: [...states] };
}

export function mixE(terms: { w: string; of: Expr }[]): Expr {
  if (terms.length === 0) throw new Error("mix needs at least one term");
  let total = ZERO;
  for (const t of terms) {
    const w = parseRat(t.w);
    if (cmp(w, ZERO) < 0) throw new Error("mix weights must be nonnegative");
    total = add(total, w);
  }
  if (cmp(total, ONE) !== 0) throw new Error("mix weights must sum to 1");
  return { mix: terms.map((t) => ({ w: t.w, of: t.of })) };
}

export function givenE(event: string[], then: Expr): Expr {
  if (event.length === 0) throw new Error("given needs a nonempty event");
  return { given: { event: [...event], then } };
}

export function matrixE(rows: string[][]): Expr {
  for (const row of rows) {
    let total = ZERO;
    for (const cell of row) {
      const v = parseRat(cell);
      if (cmp(v, ZERO) < 0) throw new Error("matrix entries must be nonnegative");
      total = add(total, v);
    }
    if (cmp(total, ONE) !== 0) throw new Error("matrix rows must sum to 1");
  }
  return { matrix: rows.map((r) => [...r]) };
}

/**
 * Shorthand used by text inputs: `const:c2`, `chance:0.54`,
 * `event:s1,s2`, or a raw JSON expression starting with `{`.
 */
export function parseExprShorthand(text: string): Expr {
  const t = text.trim();
  if (t.startsWith("{")) return JSON.parse(t) as Expr;
  if (t.startsWith("const:")) return constE(t.slice(6).trim());
  if (t.startsWith("chance:")) return chanceE(t.slice(7).trim());
  if (t.startsWith("event:")) {
    return eventE(
      t
        .slice(6)
        .split(",")
        .map((s) => s.trim())
        .filter(Boolean),
    );
  }
  throw new Error(`cannot parse expression ${JSON.stringify(text)}`);
}

/** Check every label an expression mentions against the space. */
export function validateExpr(expr: Expr, space: Space): string[] {
  const problems: string[] = [];
  const walk = (e: Expr): void => {
    if ("const" in e) {
      if (!space.consequences.includes(e.const)) {
        problems.push(`unknown consequence ${e.const}`);
      }
    } else if ("event" in e) {
      for (const s of e.event) {
        if (!space.states.includes(s)) problems.push(`unknown state ${s}`);
      }
    } else if ("matrix" in e) {
      if (e.matrix.length !== space.states.length) {
        problems.push("matrix row count does not match the states");
      }
      for (const row of e.matrix) {
        if (row.length !== space.consequences.length) {
          problems.push("matrix column count does not match the consequences");
        }
      }
    } else if ("mix" in e) {
      for (const t of e.mix) walk(t.of);
    } else if ("given" in e) {
      for (const s of e.given.event) {
        if (!space.states.includes(s)) problems.push(`unknown state ${s}`);
      }
      walk(e.given.then);
    }
  };
  walk(expr);
  return problems;
}
