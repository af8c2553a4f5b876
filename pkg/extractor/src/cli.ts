#!/usr/bin/env node
/**
 * frnk-extract --video clip.y4m --model path/to/model.json --out clip.frnk
 *              [--stride N] [--input-size N] [--normalization unit|centered]
 *              [--batch N]
 */

import { parseArgs } from 'node:util';

import { ModelUnavailable, UndecodableVideo } from './errors.js';
import { extract } from './extract.js';

export async function runCli(argv: string[]): Promise<number> {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      options: {
        video: { type: 'string' },
        model: { type: 'string' },
        out: { type: 'string' },
        stride: { type: 'string' },
        'input-size': { type: 'string' },
        normalization: { type: 'string' },
        batch: { type: 'string' },
        help: { type: 'boolean', short: 'h' },
      },
    });
  } catch (err) {
    console.error(`frnk-extract: ${(err as Error).message}`);
    return 2;
  }
  const values = parsed.values;
  if (values.help) {
    console.log(
      'usage: frnk-extract --video V.y4m --model model.json --out F.frnk ' +
        '[--stride N] [--input-size N] [--normalization unit|centered] [--batch N]'
    );
    return 0;
  }
  if (!values.video || !values.model || !values.out) {
    console.error('frnk-extract: --video, --model and --out are required');
    return 2;
  }
  const normalization = values.normalization as 'unit' | 'centered' | undefined;
  if (normalization && normalization !== 'unit' && normalization !== 'centered') {
    console.error(`frnk-extract: bad --normalization ${normalization}`);
    return 2;
  }
  try {
    const result = await extract(
      {
        videoPath: values.video,
        modelPath: values.model,
        stride: values.stride ? Number(values.stride) : undefined,
        inputSize: values['input-size'] ? Number(values['input-size']) : undefined,
        normalization,
        batchSize: values.batch ? Number(values.batch) : undefined,
      },
      values.out
    );
    console.log(
      `wrote ${values.out}: ${result.nFrames} x ${result.nLabels} ` +
        `(fps ${result.fps}, stride ${result.stride}, ${result.sourceFrames} source frames)`
    );
    return 0;
  } catch (err) {
    if (err instanceof UndecodableVideo || err instanceof ModelUnavailable || err instanceof RangeError) {
      console.error(`frnk-extract: ${(err as Error).name}: ${(err as Error).message}`);
      return 1;
    }
    throw err;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url.endsWith(process.argv[1].split('/').pop()!);
if (invokedDirectly) {
  runCli(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
