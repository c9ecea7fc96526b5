import { describe, expect, it } from "vitest";

import {
  chanceE,
  constE,
  eventE,
  givenE,
  matrixE,
  mixE,
  parseExprShorthand,
  validateExpr,
} from "../src/expr.js";
import type { Space } from "../src/expr.js";

const SPACE: Space = {
  states: ["s1", "s2"],
  consequences: ["c1", "c3", "c2"],
};

describe("builders", () => {
  it("accepts well-formed expressions", () => {
    expect(constE("c2")).toEqual({ const: "c2" });
    expect(chanceE("27/50")).toEqual({ chance: "27/50" });
    expect(eventE(["s1", "s2"])).toEqual({ event: ["s1", "s2"] });
    expect(
      mixE([
        { w: "1/3", of: constE("c1") },
        { w: "2/3", of: constE("c2") },
      ]),
    ).toEqual({
      mix: [
        { w: "1/3", of: { const: "c1" } },
        { w: "2/3", of: { const: "c2" } },
      ],
    });
    expect(givenE(["s1"], constE("c2"))).toEqual({
      given: { event: ["s1"], then: { const: "c2" } },
    });
  });

  it("rejects chances outside [0, 1]", () => {
    expect(() => chanceE("3/2")).toThrow();
    expect(() => chanceE("-1/10")).toThrow();
  });

  it("rejects mixtures that do not sum to one", () => {
    expect(() =>
      mixE([
        { w: "1/3", of: constE("c1") },
        { w: "1/3", of: constE("c2") },
      ]),
    ).toThrow(/sum to 1/);
    expect(() => mixE([{ w: "-1", of: constE("c1") }])).toThrow();
  });

  it("rejects matrix rows that do not sum to one", () => {
    expect(() => matrixE([["1/2", "1/4", "1/8"]])).toThrow(/sum to 1/);
    expect(matrixE([["1/2", "1/4", "1/4"]])).toEqual({
      matrix: [["1/2", "1/4", "1/4"]],
    });
  });
});

describe("validateExpr", () => {
  it("flags unknown labels", () => {
    expect(validateExpr(constE("nope"), SPACE)).toHaveLength(1);
    expect(validateExpr(eventE(["s1", "zz"]), SPACE)).toHaveLength(1);
    expect(validateExpr(constE("c3"), SPACE)).toHaveLength(0);
  });

  it("flags wrong matrix shape", () => {
    const bad = { matrix: [["1", "0", "0"]] };
    expect(validateExpr(bad, SPACE).length).toBeGreaterThan(0);
    const good = {
      matrix: [
        ["1", "0", "0"],
        ["0", "1", "0"],
      ],
    };
    expect(validateExpr(good, SPACE)).toHaveLength(0);
  });

  it("recurses into mixtures and conditionals", () => {
    const expr = mixE([
      { w: "1/2", of: constE("bogus") },
      { w: "1/2", of: givenE(["s9"], constE("c1")) },
    ]);
    expect(validateExpr(expr, SPACE)).toHaveLength(2);
  });
});

describe("parseExprShorthand", () => {
  it("parses the text-input shorthands", () => {
    expect(parseExprShorthand("const:c2")).toEqual({ const: "c2" });
    expect(parseExprShorthand("chance:0.54")).toEqual({ chance: "0.54" });
    expect(parseExprShorthand("event:s1, s2")).toEqual({
      event: ["s1", "s2"],
    });
    expect(parseExprShorthand('{"const":"c1"}')).toEqual({ const: "c1" });
  });

  it("rejects unknown shapes", () => {
    expect(() => parseExprShorthand("banana")).toThrow();
    expect(() => parseExprShorthand("chance:2")).toThrow();
  });
});
