/**
 * Corpus tagging: read paper JSONL, run the tokenizer/POS-tagger/lemmatizer
 * over title/abstract/body, and emit one tagged document per line in the
 * interchange format the ranking pipeline consumes via --tagged:
 *
 *   {"id": str, "title": [[surface, lemma, pos], ...],
 *    "abstract": [...], "body": [...]}
 *
 * Output preserves input order. Malformed lines are skipped with a warning
 * and counted; output is byte-identical across runs for a fixed model
 * version.
 */

import * as fs from 'node:fs'
import * as readline from 'node:readline'

import winkNLP, { ItemToken, ItsFunction } from 'wink-nlp'
import model from 'wink-eng-lite-web-model'

import { CoarseTag, normalizeLemma, toCoarseTag } from './tags.js'

export type TokenTriple = [string, string, CoarseTag]

export interface TaggedDocument {
  id: string
  title: TokenTriple[]
  abstract: TokenTriple[]
  body: TokenTriple[]
}

export interface AdaptSummary {
  written: number
  skipped: number
  warnings: string[]
}

export type TagText = (text: string) => TokenTriple[]

export function createTagger(): TagText {
  const nlp = winkNLP(model)
  // wink's declared helper arities do not line up with out()'s ItsFunction
  // union; the runtime contract is the documented one
  const posOf = nlp.its.pos as unknown as ItsFunction<string>
  const lemmaOf = nlp.its.lemma as unknown as ItsFunction<string>
  return (text: string) => {
    if (!text) {
      return []
    }
    const triples: TokenTriple[] = []
    nlp
      .readDoc(text)
      .tokens()
      .each((token: ItemToken) => {
        const surface = token.out()
        const tag = toCoarseTag(String(token.out(posOf)))
        const lemma = normalizeLemma(surface, String(token.out(lemmaOf)), tag)
        triples.push([surface, lemma, tag])
      })
    return triples
  }
}

export function tagRecord(
  tagText: TagText,
  record: { id: string; title?: string; abstract?: string; body?: string },
): TaggedDocument {
  return {
    id: record.id,
    title: tagText(record.title ?? ''),
    abstract: tagText(record.abstract ?? ''),
    body: tagText(record.body ?? ''),
  }
}

function parseRecord(line: string): { id: string; title?: string; abstract?: string; body?: string } {
  const obj = JSON.parse(line)
  if (typeof obj !== 'object' || obj === null || typeof obj.id !== 'string' || !obj.id) {
    throw new Error('record has no usable id')
  }
  return obj
}

export async function adaptCorpus(corpusPath: string, outPath: string): Promise<AdaptSummary> {
  const tagText = createTagger()
  const summary: AdaptSummary = { written: 0, skipped: 0, warnings: [] }
  const out = fs.createWriteStream(outPath, { encoding: 'utf-8' })
  const lines = readline.createInterface({
    input: fs.createReadStream(corpusPath, { encoding: 'utf-8' }),
    crlfDelay: Infinity,
  })
  let lineNumber = 0
  for await (const line of lines) {
    lineNumber += 1
    if (!line.trim()) {
      continue
    }
    let doc: TaggedDocument
    try {
      doc = tagRecord(tagText, parseRecord(line))
    } catch (err) {
      summary.skipped += 1
      summary.warnings.push(`line ${lineNumber}: ${(err as Error).message}`)
      continue
    }
    out.write(JSON.stringify(doc) + '\n')
    summary.written += 1
  }
  await new Promise<void>((resolve, reject) => {
    out.end(() => resolve())
    out.on('error', reject)
  })
  return summary
}
