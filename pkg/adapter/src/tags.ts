/**
 * Pinned mapping from the tagger's Universal Dependencies POS tags to the
 * coarse tag set of the downstream pipeline. Anything unmapped is OTHER.
 */

export const COARSE_TAGS = [
  'NOUN',
  'PROPN',
  'ADJ',
  'VERB',
  'DET',
  'ADP',
  'CONJ',
  'NUM',
  'PUNCT',
  'OTHER',
] as const

export type CoarseTag = (typeof COARSE_TAGS)[number]

const UD_TO_COARSE: Record<string, CoarseTag> = {
  NOUN: 'NOUN',
  PROPN: 'PROPN',
  ADJ: 'ADJ',
  VERB: 'VERB',
  AUX: 'VERB',
  DET: 'DET',
  ADP: 'ADP',
  CCONJ: 'CONJ',
  SCONJ: 'CONJ',
  NUM: 'NUM',
  PUNCT: 'PUNCT',
  SYM: 'PUNCT',
}

export function toCoarseTag(udTag: string): CoarseTag {
  return UD_TO_COARSE[udTag] ?? 'OTHER'
}

// The model leaves out-of-vocabulary plurals untouched ("GANs" -> "gans"),
// while the downstream pipeline keys phrases on singular lemmas. When the
// tagger returns a noun lemma identical to the lowercased surface, apply the
// same plural-stripping rules the pipeline itself uses.
const PLURAL_EXCEPTIONS = new Set(['series', 'species', 'news', 'bias', 'alias', 'canvas', 'atlas'])
const ES_SUFFIXES = ['ses', 'xes', 'zes', 'ches', 'shes']

export function stripPlural(word: string): string {
  if (PLURAL_EXCEPTIONS.has(word) || /(?:ss|us|is)$/.test(word)) {
    return word
  }
  if (word.endsWith('ies') && word.length > 4) {
    return word.slice(0, -3) + 'y'
  }
  if (ES_SUFFIXES.some(s => word.endsWith(s))) {
    return word.slice(0, -2)
  }
  if (word.endsWith('s') && word.length > 3) {
    return word.slice(0, -1)
  }
  return word
}

export function normalizeLemma(surface: string, rawLemma: string, tag: CoarseTag): string {
  let lemma = (rawLemma || surface).toLowerCase().replace(/\s+/g, '')
  if (!lemma) {
    lemma = '_'
  }
  if ((tag === 'NOUN' || tag === 'PROPN') && lemma === surface.toLowerCase()) {
    lemma = stripPlural(lemma)
  }
  return lemma
}
