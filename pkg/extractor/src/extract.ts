/**
 * Video -> FRNK feature extraction.
 *
 * Decodes a Y4M video, samples every stride-th frame, runs each sampled
 * frame through a 1000-class image classifier, and writes the per-frame
 * softmax distributions to the FRNK binary container. fps comes from the
 * container header and the stride is recorded in the file, so downstream
 * timing stays exact.
 */

import * as fs from 'node:fs';

import { Classifier, ClassifierOptions, TfjsClassifier } from './classifier.js';
import { ModelUnavailable, UndecodableVideo } from './errors.js';
import { encodeFrnk } from './frnk.js';
import { parseY4M, resizeToInput } from './y4m.js';

export const REQUIRED_LABELS = 1000;

export interface ExtractionConfig {
  videoPath: string;
  modelPath: string;
  /** Sample every stride-th source frame; default is one frame per 1/3 s. */
  stride?: number;
  inputSize?: number;
  normalization?: ClassifierOptions['normalization'];
  batchSize?: number;
  /** Injectable classifier backend (testing/alternative models). */
  classifier?: Classifier;
}

export interface ExtractionResult {
  nFrames: number;
  nLabels: number;
  fps: number;
  stride: number;
  sourceFrames: number;
}

export async function extract(config: ExtractionConfig, outPath: string): Promise<ExtractionResult> {
  let data: Buffer;
  try {
    data = fs.readFileSync(config.videoPath);
  } catch (err) {
    throw new UndecodableVideo(`cannot read ${config.videoPath}: ${(err as Error).message}`);
  }
  const video = parseY4M(data);

  const stride = config.stride ?? Math.max(1, Math.round(video.fps / 3));
  if (!Number.isInteger(stride) || stride < 1) {
    throw new RangeError(`stride must be a positive integer, got ${stride}`);
  }
  const sampled: number[] = [];
  for (let i = 0; i < video.frameCount; i += stride) {
    sampled.push(i);
  }
  if (sampled.length < 2) {
    throw new UndecodableVideo(
      `${video.frameCount} frames at stride ${stride} leaves ${sampled.length} samples; need >= 2`
    );
  }

  const inputSize = config.inputSize ?? 224;
  const classifier =
    config.classifier ??
    (await TfjsClassifier.load(config.modelPath, {
      inputSize,
      normalization: config.normalization,
    }));
  const ownsClassifier = config.classifier === undefined;
  try {
    if (classifier.nLabels !== REQUIRED_LABELS) {
      throw new ModelUnavailable(
        `classifier has ${classifier.nLabels} classes; the feature contract needs ${REQUIRED_LABELS}`
      );
    }

    const batchSize = config.batchSize ?? 8;
    const rows: Float32Array[] = [];
    for (let start = 0; start < sampled.length; start += batchSize) {
      const indices = sampled.slice(start, start + batchSize);
      const batch = indices.map((i) =>
        resizeToInput(video.frameRGB(i), video.width, video.height, inputSize)
      );
      rows.push(...(await classifier.classify(batch)));
    }

    const buf = encodeFrnk(
      { nFrames: rows.length, nLabels: REQUIRED_LABELS, fps: video.fps, stride },
      rows
    );
    fs.writeFileSync(outPath, buf);
    return {
      nFrames: rows.length,
      nLabels: REQUIRED_LABELS,
      fps: video.fps,
      stride,
      sourceFrames: video.frameCount,
    };
  } finally {
    if (ownsClassifier) {
      classifier.dispose();
    }
  }
}
