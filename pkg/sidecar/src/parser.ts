/**
 * Deterministic heuristic dependency parser emitting CoNLL-U.
 *
 * Sentences are split on terminator runs (., !, ? plus trailing closers);
 * tokens are maximal letter/digit runs (with internal apostrophes or
 * hyphens) or single non-space characters, so every non-whitespace
 * character lands in exactly one token and no form ever contains
 * whitespace. Attachment is linear: the first non-punctuation token is
 * the root and every other token attaches to its predecessor, which
 * yields a single-rooted tree for any token sequence.
 */

export interface ModelInfo {
  name: string;
  version: string;
}

interface Token {
  form: string;
  upos: "PUNCT" | "NUM" | "X";
}

const SENTENCE_RE = /[^.!?]*[.!?]+["'”’)\]]*\s*|[^.!?]+$/gu;
const TOKEN_RE = /[\p{L}\p{N}]+(?:['’-][\p{L}\p{N}]+)*|\S/gu;

export function splitSentences(text: string): string[] {
  const sentences: string[] = [];
  for (const match of text.matchAll(SENTENCE_RE)) {
    const chunk = match[0].trim();
    if (chunk) {
      sentences.push(chunk);
    }
  }
  return sentences;
}

function tokenize(sentence: string): Token[] {
  const tokens: Token[] = [];
  for (const match of sentence.matchAll(TOKEN_RE)) {
    const form = match[0];
    let upos: Token["upos"] = "X";
    if (/^[\p{N}]+$/u.test(form)) {
      upos = "NUM";
    } else if (!/[\p{L}\p{N}]/u.test(form)) {
      upos = "PUNCT";
    }
    tokens.push({ form, upos });
  }
  return tokens;
}

function sentenceBlock(storyId: string, index: number, sentence: string): string {
  const tokens = tokenize(sentence);
  const rootIndex = 1 + Math.max(0, tokens.findIndex((t) => t.upos !== "PUNCT"));
  const lines = [
    `# sent_id = ${storyId}-${index}`,
    `# text = ${sentence.replace(/\s+/gu, " ")}`,
  ];
  tokens.forEach((token, i) => {
    const id = i + 1;
    let head: number;
    let deprel: string;
    if (id === rootIndex) {
      head = 0;
      deprel = "root";
    } else {
      head = id === 1 ? rootIndex : id - 1;
      deprel = token.upos === "PUNCT" ? "punct" : "dep";
    }
    lines.push(
      [id, token.form, "_", token.upos, "_", "_", head, deprel, "_", "_"].join("\t"),
    );
  });
  return lines.join("\n");
}

/** Render text as CoNLL-U, one sentence block per detected sentence, in text order. */
export function parseToConllu(storyId: string, text: string): string {
  const sentences = splitSentences(text);
  if (sentences.length === 0) {
    throw new Error("no sentences found in text");
  }
  const blocks = sentences.map((sentence, i) => sentenceBlock(storyId, i + 1, sentence));
  return blocks.join("\n\n") + "\n";
}

export async function loadParser(): Promise<ModelInfo> {
  return { name: "linear-attach", version: "1.0.0" };
}
