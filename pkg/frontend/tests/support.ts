import { readFileSync } from "node:fs";

import type { LineSnapshot, SystemInfo, TreeSnapshot } from "../src/api.js";

function fixture<T>(name: string): T {
  const url = new URL(`./fixtures/${name}.json`, import.meta.url);
  return JSON.parse(readFileSync(url, "utf8")) as T;
}

export function treeSnapshot(name: string): TreeSnapshot {
  return fixture<TreeSnapshot>(name);
}

export function lineSnapshot(name: string): LineSnapshot {
  return fixture<LineSnapshot>(name);
}

export function systemsFixture(): SystemInfo[] {
  return fixture<SystemInfo[]>("systems");
}

/** Serialize exactly like the server's canonical document bytes:
 * sorted keys, no whitespace.  ASCII content only, so JSON.stringify
 * matches the server's escaping. */
export function canonicalJson(value: unknown): string {
  if (Array.isArray(value)) {
    return "[" + value.map(canonicalJson).join(",") + "]";
  }
  if (value !== null && typeof value === "object") {
    const entries = Object.keys(value as Record<string, unknown>)
      .sort()
      .map((k) => JSON.stringify(k) + ":" + canonicalJson((value as Record<string, unknown>)[k]));
    return "{" + entries.join(",") + "}";
  }
  return JSON.stringify(value);
}

export function countMatches(haystack: string, needle: string): number {
  let count = 0;
  let at = haystack.indexOf(needle);
  while (at !== -1) {
    count += 1;
    at = haystack.indexOf(needle, at + needle.length);
  }
  return count;
}

const ENTITIES: Record<string, string> = {
  "&amp;": "&",
  "&lt;": "<",
  "&gt;": ">",
  "&quot;": '"',
  "&#39;": "'",
};

/** Reverse the renderer's escaping, as a browser would when reading back. */
export function unesc(text: string): string {
  return text.replace(/&(?:amp|lt|gt|quot|#39);/g, (e) => ENTITIES[e]!);
}

/** All tooltip payloads of formula spans, in document order. */
export function formulaTitles(html: string): string[] {
  const out: string[] = [];
  const re = /<span class="formula[^"]*" title="([^"]*)"/g;
  let m: RegExpExecArray | null;
  while ((m = re.exec(html)) !== null) out.push(unesc(m[1]!));
  return out;
}
