/**
 * FRNK binary feature container, bit-exact with the summarizer's reader:
 * magic "FRNK", then little-endian u32 version, u32 n_frames, u32 n_labels,
 * f64 fps, u32 stride, then the probability matrix as row-major float32.
 */

export const FRNK_MAGIC = 'FRNK';
export const FRNK_VERSION = 1;
export const HEADER_BYTES = 4 + 4 + 4 + 4 + 8 + 4;

export interface FrnkHeader {
  version: number;
  nFrames: number;
  nLabels: number;
  fps: number;
  stride: number;
}

export function encodeFrnk(header: Omit<FrnkHeader, 'version'>, rows: Float32Array[]): Buffer {
  const { nFrames, nLabels, fps, stride } = header;
  if (rows.length !== nFrames) {
    throw new Error(`${rows.length} rows but header declares ${nFrames}`);
  }
  const buf = Buffer.alloc(HEADER_BYTES + nFrames * nLabels * 4);
  buf.write(FRNK_MAGIC, 0, 'ascii');
  buf.writeUInt32LE(FRNK_VERSION, 4);
  buf.writeUInt32LE(nFrames, 8);
  buf.writeUInt32LE(nLabels, 12);
  buf.writeDoubleLE(fps, 16);
  buf.writeUInt32LE(stride, 24);
  let offset = HEADER_BYTES;
  for (const row of rows) {
    if (row.length !== nLabels) {
      throw new Error(`row has ${row.length} entries, expected ${nLabels}`);
    }
    for (const value of row) {
      buf.writeFloatLE(value, offset);
      offset += 4;
    }
  }
  return buf;
}

export function decodeFrnk(buf: Buffer): { header: FrnkHeader; rows: Float32Array[] } {
  if (buf.length < HEADER_BYTES || buf.subarray(0, 4).toString('ascii') !== FRNK_MAGIC) {
    throw new Error('not a FRNK container');
  }
  const header: FrnkHeader = {
    version: buf.readUInt32LE(4),
    nFrames: buf.readUInt32LE(8),
    nLabels: buf.readUInt32LE(12),
    fps: buf.readDoubleLE(16),
    stride: buf.readUInt32LE(24),
  };
  const expected = HEADER_BYTES + header.nFrames * header.nLabels * 4;
  if (buf.length !== expected) {
    throw new Error(`expected ${expected} bytes, got ${buf.length}`);
  }
  const rows: Float32Array[] = [];
  for (let i = 0; i < header.nFrames; i++) {
    const row = new Float32Array(header.nLabels);
    for (let j = 0; j < header.nLabels; j++) {
      row[j] = buf.readFloatLE(HEADER_BYTES + (i * header.nLabels + j) * 4);
    }
    rows.push(row);
  }
  return { header, rows };
}
