#!/usr/bin/env node
/**
 * Streaming annotator CLI.
 *
 * Reads dataset JSONL on stdin, writes one annotation record per present
 * field on stdout, in input order.  The first output line is a '#'
 * comment advertising the annotator and model versions so corpus-level
 * drift stays attributable; consumers ignore comment lines.
 *
 * Flags:
 *   --strict        exit non-zero if any input line was skipped
 *   --batch-size N  buffer N records per annotation pass (default 32)
 */

import { createInterface } from 'node:readline';
import { createRequire } from 'node:module';
import { fileURLToPath } from 'node:url';
import path from 'node:path';
import nlp from 'compromise';

import { annotateRecord, DatasetRecord } from './annotate.js';

const require = createRequire(import.meta.url);

function versionHeader(): string {
  const own = require('../package.json') as { version: string };
  return `# entity-faithful-annotator ${own.version} (compromise ${nlp.version})`;
}

export interface CliOptions {
  strict: boolean;
  batchSize: number;
}

export function parseArgs(argv: string[]): CliOptions {
  const opts: CliOptions = { strict: false, batchSize: 32 };
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === '--strict') {
      opts.strict = true;
    } else if (arg === '--batch-size') {
      const value = Number(argv[++i]);
      if (!Number.isInteger(value) || value < 1) {
        throw new Error(`--batch-size expects a positive integer, got ${argv[i]}`);
      }
      opts.batchSize = value;
    } else {
      throw new Error(`unknown flag: ${arg}`);
    }
  }
  return opts;
}

function flush(batch: DatasetRecord[], write: (line: string) => void): void {
  for (const rec of batch) {
    for (const ann of annotateRecord(rec)) {
      write(JSON.stringify(ann));
    }
  }
  batch.length = 0;
}

export async function run(
  input: NodeJS.ReadableStream,
  write: (line: string) => void,
  warn: (line: string) => void,
  opts: CliOptions,
): Promise<number> {
  write(versionHeader());
  const batch: DatasetRecord[] = [];
  let lineNo = 0;
  let skipped = 0;
  const rl = createInterface({ input, crlfDelay: Infinity });
  for await (const line of rl) {
    lineNo += 1;
    const trimmed = line.trim();
    if (trimmed === '' || trimmed.startsWith('#')) continue;
    let rec: unknown;
    try {
      rec = JSON.parse(trimmed);
    } catch {
      warn(`line ${lineNo}: unparseable JSON, skipped`);
      skipped += 1;
      continue;
    }
    const record = rec as Partial<DatasetRecord>;
    if (typeof record.id !== 'string' || typeof record.source !== 'string'
        || typeof record.summary !== 'string') {
      warn(`line ${lineNo}: missing id/source/summary string fields, skipped`);
      skipped += 1;
      continue;
    }
    batch.push(record as DatasetRecord);
    if (batch.length >= opts.batchSize) flush(batch, write);
  }
  flush(batch, write);
  return skipped > 0 && opts.strict ? 1 : 0;
}

async function main(): Promise<void> {
  let opts: CliOptions;
  try {
    opts = parseArgs(process.argv.slice(2));
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    process.exit(2);
  }
  const code = await run(
    process.stdin,
    (line) => process.stdout.write(line + '\n'),
    (line) => process.stderr.write(line + '\n'),
    opts,
  );
  process.exit(code);
}

const invokedDirectly = process.argv[1] !== undefined
  && path.resolve(process.argv[1]) === fileURLToPath(import.meta.url);

if (invokedDirectly) {
  main().catch((err) => {
    console.error(err);
    process.exit(1);
  });
}
