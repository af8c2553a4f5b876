/**
 * Image classifier backends.
 *
 * Any TensorFlow.js graph or layers model with an N-way output works; the
 * model is loaded from a local `model.json` (the standard tfjs web format
 * with weight shards alongside). Output rows are softmaxed when the model
 * emits logits instead of probabilities.
 */

import * as fs from 'node:fs';
import * as path from 'node:path';
import * as tf from '@tensorflow/tfjs';

import { ModelUnavailable } from './errors.js';

export interface Classifier {
  readonly nLabels: number;
  /** Batched inference; each input is inputSize*inputSize*3 RGB in [0, 1]. */
  classify(batch: Float32Array[]): Promise<Float32Array[]>;
  dispose(): void;
}

export type Normalization = 'unit' | 'centered';

export interface ClassifierOptions {
  inputSize?: number;       // model input resolution (default 224)
  normalization?: Normalization; // unit: [0,1]; centered: [-1,1]
}

interface ModelJson {
  format?: string;
  modelTopology?: unknown;
  weightsManifest?: Array<{ paths: string[]; weights: tf.io.WeightsManifestEntry[] }>;
  signature?: unknown;
  userDefinedMetadata?: unknown;
  generatedBy?: string;
  convertedBy?: string | null;
}

function fileLoadHandler(modelJsonPath: string): tf.io.IOHandler {
  return {
    async load(): Promise<tf.io.ModelArtifacts> {
      const doc = JSON.parse(fs.readFileSync(modelJsonPath, 'utf-8')) as ModelJson;
      const artifacts: tf.io.ModelArtifacts = {
        modelTopology: doc.modelTopology as object,
        format: doc.format,
        generatedBy: doc.generatedBy,
        convertedBy: doc.convertedBy ?? undefined,
        signature: doc.signature as never,
        userDefinedMetadata: doc.userDefinedMetadata as never,
      };
      if (doc.weightsManifest) {
        const dir = path.dirname(modelJsonPath);
        const specs: tf.io.WeightsManifestEntry[] = [];
        const shards: Buffer[] = [];
        for (const group of doc.weightsManifest) {
          specs.push(...group.weights);
          for (const shard of group.paths) {
            shards.push(fs.readFileSync(path.join(dir, shard)));
          }
        }
        const data = Buffer.concat(shards);
        artifacts.weightSpecs = specs;
        artifacts.weightData = data.buffer.slice(
          data.byteOffset, data.byteOffset + data.byteLength
        );
      }
      return artifacts;
    },
  };
}

export class TfjsClassifier implements Classifier {
  readonly nLabels: number;
  readonly inputSize: number;
  readonly normalization: Normalization;
  private readonly model: tf.GraphModel | tf.LayersModel;

  private constructor(
    model: tf.GraphModel | tf.LayersModel,
    nLabels: number,
    options: ClassifierOptions
  ) {
    this.model = model;
    this.nLabels = nLabels;
    this.inputSize = options.inputSize ?? 224;
    this.normalization = options.normalization ?? 'unit';
  }

  static async load(modelPath: string, options: ClassifierOptions = {}): Promise<TfjsClassifier> {
    if (!fs.existsSync(modelPath)) {
      throw new ModelUnavailable(`no model at ${modelPath}`);
    }
    const jsonPath = fs.statSync(modelPath).isDirectory()
      ? path.join(modelPath, 'model.json')
      : modelPath;
    if (!fs.existsSync(jsonPath)) {
      throw new ModelUnavailable(`no model.json under ${modelPath}`);
    }
    let doc: ModelJson;
    try {
      doc = JSON.parse(fs.readFileSync(jsonPath, 'utf-8')) as ModelJson;
    } catch (err) {
      throw new ModelUnavailable(`unreadable model.json: ${(err as Error).message}`);
    }
    const handler = fileLoadHandler(jsonPath);
    let model: tf.GraphModel | tf.LayersModel;
    try {
      model = doc.format === 'graph-model'
        ? await tf.loadGraphModel(handler)
        : await tf.loadLayersModel(handler);
    } catch (err) {
      throw new ModelUnavailable(`failed to load model: ${(err as Error).message}`);
    }
    const outputShape = (
      Array.isArray(model.outputs) ? model.outputs[0].shape : undefined
    ) as Array<number | null> | undefined;
    const nLabels = outputShape ? outputShape[outputShape.length - 1] : null;
    if (!nLabels || nLabels < 2) {
      throw new ModelUnavailable(`cannot determine the model's class count`);
    }
    return new TfjsClassifier(model, nLabels, options);
  }

  async classify(batch: Float32Array[]): Promise<Float32Array[]> {
    const size = this.inputSize;
    const flat = new Float32Array(batch.length * size * size * 3);
    batch.forEach((frame, i) => {
      if (frame.length !== size * size * 3) {
        throw new Error(`frame ${i} has ${frame.length} values, expected ${size * size * 3}`);
      }
      flat.set(frame, i * frame.length);
    });

    const output = tf.tidy(() => {
      let input = tf.tensor4d(flat, [batch.length, size, size, 3]);
      if (this.normalization === 'centered') {
        input = input.mul(2).sub(1);
      }
      let out = this.model.predict(input) as tf.Tensor | tf.Tensor[];
      if (Array.isArray(out)) {
        out = out[0];
      }
      return out.reshape([batch.length, this.nLabels]);
    });
    const data = Float32Array.from(await output.data());
    output.dispose();

    const rows: Float32Array[] = [];
    for (let i = 0; i < batch.length; i++) {
      rows.push(data.subarray(i * this.nLabels, (i + 1) * this.nLabels).slice());
    }
    // models that emit logits need an explicit softmax
    for (const row of rows) {
      let sum = 0;
      let min = Infinity;
      for (const v of row) {
        sum += v;
        min = Math.min(min, v);
      }
      if (min < 0 || Math.abs(sum - 1) > 1e-3) {
        softmaxInPlace(row);
      }
    }
    return rows;
  }

  dispose(): void {
    this.model.dispose();
  }
}

function softmaxInPlace(row: Float32Array): void {
  let max = -Infinity;
  for (const v of row) {
    max = Math.max(max, v);
  }
  let total = 0;
  for (let i = 0; i < row.length; i++) {
    row[i] = Math.exp(row[i] - max);
    total += row[i];
  }
  for (let i = 0; i < row.length; i++) {
    row[i] /= total;
  }
}
