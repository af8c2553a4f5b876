import * as fs from 'node:fs';
import * as path from 'node:path';
import * as tf from '@tensorflow/tfjs';

/** Deterministic PRNG so the fixture model has fixed weights on every run. */
export function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

/** Build and save a tiny fixed-weight softmax classifier in tfjs file format. */
export async function saveFixtureModel(
  dir: string,
  inputSize = 16,
  nLabels = 1000,
  seed = 12345
): Promise<string> {
  const model = tf.sequential();
  model.add(tf.layers.flatten({ inputShape: [inputSize, inputSize, 3] }));
  model.add(tf.layers.dense({ units: nLabels, activation: 'softmax' }));
  const rng = mulberry32(seed);
  model.setWeights(
    model.getWeights().map((w) => {
      const values = new Float32Array(w.size);
      for (let i = 0; i < values.length; i++) {
        values[i] = (rng() - 0.5) * 0.4;
      }
      return tf.tensor(values, w.shape as number[]);
    })
  );

  fs.mkdirSync(dir, { recursive: true });
  await model.save(
    tf.io.withSaveHandler(async (artifacts) => {
      const weightData = artifacts.weightData as ArrayBuffer | ArrayBuffer[];
      const shards = Array.isArray(weightData)
        ? weightData.map((b) => Buffer.from(b))
        : [Buffer.from(weightData)];
      fs.writeFileSync(path.join(dir, 'weights.bin'), Buffer.concat(shards));
      fs.writeFileSync(
        path.join(dir, 'model.json'),
        JSON.stringify({
          modelTopology: artifacts.modelTopology,
          format: artifacts.format,
          generatedBy: artifacts.generatedBy,
          convertedBy: artifacts.convertedBy,
          weightsManifest: [{ paths: ['weights.bin'], weights: artifacts.weightSpecs }],
        })
      );
      return { modelArtifactsInfo: { dateSaved: new Date(), modelTopologyType: 'JSON' as const } };
    })
  );
  model.dispose();
  return path.join(dir, 'model.json');
}

export interface Y4MFixtureFrame {
  /** Per-pixel YUV generator (x, y) -> [Y, Cb, Cr]. */
  at(x: number, y: number): [number, number, number];
}

export function solidFrame(y: number, cb: number, cr: number): Y4MFixtureFrame {
  return { at: () => [y, cb, cr] };
}

export function gradientFrame(offset: number): Y4MFixtureFrame {
  return {
    at: (x, yy) => [16 + ((x * 7 + yy * 13 + offset * 29) % 220), 128, 128],
  };
}

/** Assemble an in-memory .y4m stream. */
export function makeY4M(
  frames: Y4MFixtureFrame[],
  width = 32,
  height = 24,
  rate = 'F6:1',
  colourspace = '420jpeg'
): Buffer {
  const header = Buffer.from(`YUV4MPEG2 W${width} H${height} ${rate} Ip A1:1 C${colourspace}\n`, 'ascii');
  const is420 = colourspace.startsWith('420');
  const is422 = colourspace.startsWith('422');
  const mono = colourspace === 'mono';
  const cw = mono ? 0 : is420 || is422 ? width / 2 : width;
  const ch = mono ? 0 : is420 ? height / 2 : height;
  const chunks: Buffer[] = [header];
  for (const frame of frames) {
    chunks.push(Buffer.from('FRAME\n', 'ascii'));
    const payload = Buffer.alloc(width * height + 2 * cw * ch);
    let o = 0;
    for (let y = 0; y < height; y++) {
      for (let x = 0; x < width; x++) {
        payload[o++] = frame.at(x, y)[0];
      }
    }
    const xs = cw === width ? 1 : 2;
    const ys = ch === height ? 1 : 2;
    for (const plane of [1, 2] as const) {
      if (mono) break;
      for (let y = 0; y < ch; y++) {
        for (let x = 0; x < cw; x++) {
          payload[o++] = frame.at(x * xs, y * ys)[plane];
        }
      }
    }
    chunks.push(payload);
  }
  return Buffer.concat(chunks);
}

/** KL divergence with the consumer's clamp semantics (floor then renormalize). */
export function klDivergence(p: ArrayLike<number>, q: ArrayLike<number>, floor = 1e-10): number {
  const pc = Array.from(p, (v) => Math.max(v, floor));
  const qc = Array.from(q, (v) => Math.max(v, floor));
  const ps = pc.reduce((a, b) => a + b, 0);
  const qs = qc.reduce((a, b) => a + b, 0);
  let total = 0;
  for (let i = 0; i < pc.length; i++) {
    const pi = pc[i] / ps;
    const qi = qc[i] / qs;
    total += pi * Math.log(pi / qi);
  }
  return Math.max(0, total);
}
