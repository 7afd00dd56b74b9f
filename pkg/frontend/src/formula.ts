/** S-expression formulas and their conventional display.
 *
 * The server speaks canonical s-expressions.  The UI shows infix notation
 * with minimal parentheses and keeps the exact server string in tooltips,
 * so nothing is lost in translation.
 */

export type Formula =
  | { kind: "atom"; name: string }
  | { kind: "op"; op: string; args: Formula[] };

function tokenize(text: string): string[] {
  const out: string[] = [];
  let i = 0;
  while (i < text.length) {
    const c = text[i]!;
    if (c === "(" || c === ")") {
      out.push(c);
      i += 1;
    } else if (/\s/.test(c)) {
      i += 1;
    } else {
      let j = i;
      while (j < text.length && !/[()\s]/.test(text[j]!)) j += 1;
      out.push(text.slice(i, j));
      i = j;
    }
  }
  return out;
}

export function parseSexpr(text: string): Formula {
  const tokens = tokenize(text);
  let pos = 0;

  function next(): string {
    const t = tokens[pos];
    if (t === undefined) throw new Error("unexpected end of formula");
    pos += 1;
    return t;
  }

  function expr(): Formula {
    const t = next();
    if (t === ")") throw new Error("unexpected ')'");
    if (t !== "(") return { kind: "atom", name: t };
    const op = next();
    if (op === "(" || op === ")") throw new Error("expected an operator name after '('");
    const args: Formula[] = [];
    while (tokens[pos] !== ")") {
      if (tokens[pos] === undefined) throw new Error("unclosed parenthesis");
      args.push(expr());
    }
    pos += 1;
    return { kind: "op", op, args };
  }

  const result = expr();
  if (pos !== tokens.length) throw new Error("trailing input after formula");
  return result;
}

// display precedence: negation and box bind tightest, implication loosest
const INFIX: Record<string, { symbol: string; prec: number }> = {
  "->": { symbol: "→", prec: 10 },
  or: { symbol: "∨", prec: 20 },
  and: { symbol: "∧", prec: 30 },
};

const PREFIX: Record<string, string> = {
  box: "☐",
  not: "¬",
};

const ATOMS: Record<string, string> = {
  false: "⊥",
};

const PREFIX_PREC = 40;

function isFalse(f: Formula): boolean {
  return f.kind === "atom" && f.name === "false";
}

function render(f: Formula, min: number): string {
  if (f.kind === "atom") return ATOMS[f.name] ?? f.name;

  // an implication into falsity displays as negation, matching how the
  // systems expand their "not" operator on input
  if (f.op === "->" && f.args.length === 2 && isFalse(f.args[1]!)) {
    const body = "¬" + render(f.args[0]!, PREFIX_PREC);
    return PREFIX_PREC < min ? `(${body})` : body;
  }

  const infix = INFIX[f.op];
  if (infix && f.args.length === 2) {
    // every binary operator here associates to the right
    const body =
      render(f.args[0]!, infix.prec + 1) +
      " " +
      infix.symbol +
      " " +
      render(f.args[1]!, infix.prec);
    return infix.prec < min ? `(${body})` : body;
  }

  const prefix = PREFIX[f.op];
  if (prefix && f.args.length === 1) {
    const body = prefix + render(f.args[0]!, PREFIX_PREC);
    return PREFIX_PREC < min ? `(${body})` : body;
  }

  // operators without display conventions fall back to functional notation
  return `${f.op}(${f.args.map((a) => render(a, 0)).join(", ")})`;
}

/** Conventional notation for a formula or its s-expression text. */
export function infix(f: Formula | string): string {
  const root = typeof f === "string" ? parseSexpr(f) : f;
  return render(root, 0);
}
