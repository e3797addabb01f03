/**
 * Six-category toxicity scorer.
 *
 * Scores are lexicon-driven: each occurrence of a lexicon term contributes
 * its per-category weight through the noisy-or rule
 * score = 1 - prod(1 - w), which keeps every value in [0, 1) and is
 * order-independent. The lexicon is embedded; a file named
 * toxicity_lexicon.tsv in the model cache directory (lines of
 * "term<TAB>category=weight[,category=weight...]", '#' comments) replaces
 * it when present.
 */

import * as fs from "node:fs";
import * as path from "node:path";

import type { ModelInfo } from "./parser";

export const CATEGORIES = [
  "toxic",
  "severe_toxic",
  "obscene",
  "threat",
  "insult",
  "identity_hate",
] as const;

export type Category = (typeof CATEGORIES)[number];
export type ScoreRecord = Record<Category, number>;

type Lexicon = Map<string, Partial<ScoreRecord>>;

const WORD_RE = /[\p{L}\p{N}']+/gu;

const EMBEDDED_LEXICON: ReadonlyArray<[string, Partial<ScoreRecord>]> = [
  ["stupid", { toxic: 0.55, insult: 0.5 }],
  ["idiot", { toxic: 0.7, insult: 0.75 }],
  ["idiots", { toxic: 0.7, insult: 0.75 }],
  ["fool", { toxic: 0.4, insult: 0.45 }],
  ["moron", { toxic: 0.65, insult: 0.7 }],
  ["hate", { toxic: 0.45, identity_hate: 0.2 }],
  ["despise", { toxic: 0.4, identity_hate: 0.25 }],
  ["kill", { toxic: 0.5, threat: 0.65 }],
  ["destroy", { toxic: 0.3, threat: 0.35 }],
  ["hurt", { toxic: 0.35, threat: 0.4 }],
  ["attack", { toxic: 0.35, threat: 0.45 }],
  ["menace", { toxic: 0.25, threat: 0.3 }],
  ["exterminate", { toxic: 0.6, severe_toxic: 0.4, threat: 0.7 }],
  ["slaughter", { toxic: 0.5, severe_toxic: 0.3, threat: 0.6 }],
  ["damn", { toxic: 0.4, obscene: 0.45 }],
  ["hell", { toxic: 0.35, obscene: 0.4 }],
  ["crap", { toxic: 0.4, obscene: 0.5 }],
  ["garbage", { toxic: 0.25, insult: 0.3 }],
  ["trash", { toxic: 0.3, insult: 0.35 }],
  ["loser", { toxic: 0.45, insult: 0.55 }],
  ["pathetic", { toxic: 0.4, insult: 0.5 }],
  ["wretched", { toxic: 0.3, insult: 0.4 }],
  ["worthless", { toxic: 0.5, severe_toxic: 0.15, insult: 0.6 }],
  ["scum", { toxic: 0.6, severe_toxic: 0.2, insult: 0.65 }],
  ["vermin", { toxic: 0.5, insult: 0.5, identity_hate: 0.55 }],
  ["savages", { toxic: 0.55, identity_hate: 0.6 }],
];

function parseLexiconFile(text: string): Lexicon {
  const lexicon: Lexicon = new Map();
  text.split("\n").forEach((raw, lineIndex) => {
    const line = raw.trim();
    if (!line || line.startsWith("#")) {
      return;
    }
    const [term, spec, ...extra] = line.split("\t");
    if (!term || !spec || extra.length > 0) {
      throw new Error(`lexicon line ${lineIndex + 1}: expected "term<TAB>assignments"`);
    }
    const weights: Partial<ScoreRecord> = {};
    for (const pair of spec.split(",")) {
      const [category, value] = pair.split("=");
      if (!CATEGORIES.includes(category as Category)) {
        throw new Error(`lexicon line ${lineIndex + 1}: unknown category ${category}`);
      }
      const weight = Number(value);
      if (!Number.isFinite(weight) || weight < 0 || weight > 1) {
        throw new Error(`lexicon line ${lineIndex + 1}: weight out of [0,1]: ${value}`);
      }
      weights[category as Category] = weight;
    }
    lexicon.set(term.toLowerCase(), weights);
  });
  return lexicon;
}

export class ToxicityScorer {
  readonly info: ModelInfo;
  private readonly lexicon: Lexicon;

  constructor(lexicon: Lexicon, source: "embedded" | "file") {
    this.lexicon = lexicon;
    this.info = { name: "lexicon-noisy-or", version: `1.0.0+${source}` };
  }

  scoreSentence(sentence: string): ScoreRecord {
    const miss: Record<Category, number> = {
      toxic: 1,
      severe_toxic: 1,
      obscene: 1,
      threat: 1,
      insult: 1,
      identity_hate: 1,
    };
    for (const match of sentence.toLowerCase().matchAll(WORD_RE)) {
      const weights = this.lexicon.get(match[0]);
      if (!weights) {
        continue;
      }
      for (const category of CATEGORIES) {
        const w = weights[category];
        if (w !== undefined) {
          miss[category] *= 1 - w;
        }
      }
    }
    const scores = {} as ScoreRecord;
    for (const category of CATEGORIES) {
      scores[category] = 1 - miss[category];
    }
    return scores;
  }
}

export async function loadToxicity(cacheDir?: string): Promise<ToxicityScorer> {
  if (cacheDir) {
    const file = path.join(cacheDir, "toxicity_lexicon.tsv");
    if (fs.existsSync(file)) {
      return new ToxicityScorer(parseLexiconFile(fs.readFileSync(file, "utf8")), "file");
    }
  }
  return new ToxicityScorer(new Map(EMBEDDED_LEXICON), "embedded");
}
