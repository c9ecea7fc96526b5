/**
 * Exact rationals over bigint, used only for client-side input
 * validation (mixture weights, matrix rows). Server payload values are
 * displayed verbatim; the client never recomputes them.
 */

export interface Rat {
  readonly num: bigint;
  readonly den: bigint; // always > 0
}

function gcd(a: bigint, b: bigint): bigint {
  a = a < 0n ? -a : a;
  b = b < 0n ? -b : b;
  while (b) {
    [a, b] = [b, a % b];
  }
  return a;
}

export function rat(num: bigint, den: bigint): Rat {
  if (den === 0n) throw new Error("zero denominator");
  if (den < 0n) {
    num = -num;
    den = -den;
  }
  const g = gcd(num, den) || 1n;
  return { num: num / g, den: den / g };
}

const FRACTION = /^(-?\d+)\/(\d+)$/;
const DECIMAL = /^(-?)(\d+)(?:\.(\d+))?$/;

/** Parse "n/d" or an exact decimal literal ("0.1" is one tenth). */
export function parseRat(text: string): Rat {
  const frac = FRACTION.exec(text.trim());
  if (frac) return rat(BigInt(frac[1]!), BigInt(frac[2]!));
  const dec = DECIMAL.exec(text.trim());
  if (dec) {
    const sign = dec[1] === "-" ? -1n : 1n;
    const whole = BigInt(dec[2]!);
    const fracPart = dec[3] ?? "";
    const scale = 10n ** BigInt(fracPart.length);
    const num = sign * (whole * scale + BigInt(fracPart || "0"));
    return rat(num, scale);
  }
  throw new Error(`not a rational literal: ${JSON.stringify(text)}`);
}

export function formatRat(q: Rat): string {
  return q.den === 1n ? q.num.toString() : `${q.num}/${q.den}`;
}

export function add(a: Rat, b: Rat): Rat {
  return rat(a.num * b.den + b.num * a.den, a.den * b.den);
}

export function cmp(a: Rat, b: Rat): number {
  const d = a.num * b.den - b.num * a.den;
  return d < 0n ? -1 : d > 0n ? 1 : 0;
}

export const ZERO: Rat = { num: 0n, den: 1n };
export const ONE: Rat = { num: 1n, den: 1n };

/** Decimal rendering for axis labels; display-only. */
export function toNumber(q: Rat): number {
  return Number(q.num) / Number(q.den);
}
