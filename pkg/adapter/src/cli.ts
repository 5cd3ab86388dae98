#!/usr/bin/env node

import * as process from 'node:process'

function usage(): never {
  console.error('usage: tagged-corpus-adapter --corpus <corpus.jsonl> --out <tagged.jsonl>')
  process.exit(2)
}

async function main() {
  const args = process.argv.slice(2)
  let corpus: string | undefined
  let out: string | undefined
  for (let i = 0; i < args.length; i += 1) {
    if (args[i] === '--corpus') {
      corpus = args[++i]
    } else if (args[i] === '--out') {
      out = args[++i]
    } else {
      usage()
    }
  }
  if (!corpus || !out) {
    usage()
  }

  let adaptCorpus
  try {
    adaptCorpus = (await import('./adapt.js')).adaptCorpus
  } catch (err) {
    const message = (err as Error).message ?? ''
    if (message.includes('wink-eng-lite-web-model') || message.includes('wink-nlp')) {
      console.error('language model not installed; run: npm install wink-nlp wink-eng-lite-web-model')
      process.exit(1)
    }
    throw err
  }

  try {
    const summary = await adaptCorpus(corpus, out)
    for (const warning of summary.warnings) {
      console.error(`warning: ${warning}`)
    }
    console.error(`${summary.written} documents tagged, ${summary.skipped} skipped -> ${out}`)
    process.exit(0)
  } catch (err) {
    console.error(`error: ${(err as Error).message}`)
    process.exit(1)
  }
}

main()
