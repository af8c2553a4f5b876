/**
 * Minimal YUV4MPEG2 (.y4m) decoder.
 *
 * Y4M is the simplest container that still carries real metadata (size,
 * frame rate, chroma subsampling) over raw uncompressed frames, and it is
 * what `ffmpeg -i video.mp4 out.y4m` produces. Supported colourspaces:
 * C420 (jpeg/mpeg2/paldv siting treated alike), C422, C444 and Cmono.
 */

import { UndecodableVideo } from './errors.js';

export interface Y4MVideo {
  width: number;
  height: number;
  fps: number;
  colourspace: string;
  frameCount: number;
  /** Decode one frame to interleaved RGB in [0, 255]. */
  frameRGB(index: number): Float32Array;
}

interface PlaneLayout {
  ySize: number;
  cWidth: number;
  cHeight: number;
}

function planeLayout(width: number, height: number, colourspace: string): PlaneLayout {
  const ySize = width * height;
  if (colourspace.startsWith('420')) {
    if (width % 2 !== 0 || height % 2 !== 0) {
      throw new UndecodableVideo(`4:2:0 needs even dimensions, got ${width}x${height}`);
    }
    return { ySize, cWidth: width / 2, cHeight: height / 2 };
  }
  if (colourspace.startsWith('422')) {
    if (width % 2 !== 0) {
      throw new UndecodableVideo(`4:2:2 needs even width, got ${width}`);
    }
    return { ySize, cWidth: width / 2, cHeight: height };
  }
  if (colourspace.startsWith('444')) {
    return { ySize, cWidth: width, cHeight: height };
  }
  if (colourspace === 'mono') {
    return { ySize, cWidth: 0, cHeight: 0 };
  }
  throw new UndecodableVideo(`unsupported colourspace C${colourspace}`);
}

export function parseY4M(data: Buffer): Y4MVideo {
  const headerEnd = data.indexOf(0x0a);
  if (headerEnd < 0) {
    throw new UndecodableVideo('no stream header line');
  }
  const header = data.subarray(0, headerEnd).toString('ascii');
  if (!header.startsWith('YUV4MPEG2')) {
    throw new UndecodableVideo(
      'not a YUV4MPEG2 stream (transcode first, e.g. `ffmpeg -i in.mp4 out.y4m`)'
    );
  }

  let width = 0;
  let height = 0;
  let fps = 0;
  let colourspace = '420jpeg';
  for (const token of header.split(/\s+/).slice(1)) {
    const value = token.slice(1);
    switch (token[0]) {
      case 'W':
        width = Number(value);
        break;
      case 'H':
        height = Number(value);
        break;
      case 'F': {
        const [num, den] = value.split(':').map(Number);
        if (!num || !den) {
          throw new UndecodableVideo(`bad frame rate ${value}`);
        }
        fps = num / den;
        break;
      }
      case 'C':
        colourspace = value;
        break;
      default:
        break; // interlacing / aspect / extensions are irrelevant here
    }
  }
  if (!Number.isInteger(width) || !Number.isInteger(height) || width < 1 || height < 1) {
    throw new UndecodableVideo(`bad dimensions ${width}x${height}`);
  }
  if (!(fps > 0)) {
    throw new UndecodableVideo('missing frame rate');
  }

  const { ySize, cWidth, cHeight } = planeLayout(width, height, colourspace);
  const frameBytes = ySize + 2 * cWidth * cHeight;

  // index FRAME marker offsets
  const offsets: number[] = [];
  let pos = headerEnd + 1;
  while (pos < data.length) {
    const lineEnd = data.indexOf(0x0a, pos);
    if (lineEnd < 0) {
      throw new UndecodableVideo(`unterminated FRAME header at byte ${pos}`);
    }
    const marker = data.subarray(pos, lineEnd).toString('ascii');
    if (!marker.startsWith('FRAME')) {
      throw new UndecodableVideo(`expected FRAME marker at byte ${pos}, got "${marker.slice(0, 16)}"`);
    }
    const start = lineEnd + 1;
    if (start + frameBytes > data.length) {
      throw new UndecodableVideo(`truncated frame payload at byte ${start}`);
    }
    offsets.push(start);
    pos = start + frameBytes;
  }
  if (offsets.length === 0) {
    throw new UndecodableVideo('stream contains no frames');
  }

  const mono = colourspace === 'mono';

  function frameRGB(index: number): Float32Array {
    if (index < 0 || index >= offsets.length) {
      throw new RangeError(`frame ${index} outside [0, ${offsets.length})`);
    }
    const base = offsets[index];
    const rgb = new Float32Array(width * height * 3);
    const cxShift = cWidth === width ? 0 : 1; // horizontal subsampling
    const cyShift = cHeight === height ? 0 : 1;
    for (let y = 0; y < height; y++) {
      for (let x = 0; x < width; x++) {
        const luma = data[base + y * width + x];
        let r: number;
        let g: number;
        let b: number;
        if (mono) {
          r = g = b = 1.164383 * (luma - 16);
        } else {
          const cIdx = (y >> cyShift) * cWidth + (x >> cxShift);
          const cb = data[base + ySize + cIdx] - 128;
          const cr = data[base + ySize + cWidth * cHeight + cIdx] - 128;
          const c = 1.164383 * (luma - 16);
          r = c + 1.596027 * cr;
          g = c - 0.391762 * cb - 0.812968 * cr;
          b = c + 2.017232 * cb;
        }
        const o = (y * width + x) * 3;
        rgb[o] = Math.min(255, Math.max(0, r));
        rgb[o + 1] = Math.min(255, Math.max(0, g));
        rgb[o + 2] = Math.min(255, Math.max(0, b));
      }
    }
    return rgb;
  }

  return { width, height, fps, colourspace, frameCount: offsets.length, frameRGB };
}

/** Bilinear resize of interleaved RGB [0,255] to size x size in [0,1]. */
export function resizeToInput(
  rgb: Float32Array,
  width: number,
  height: number,
  size: number
): Float32Array {
  const out = new Float32Array(size * size * 3);
  const xScale = width / size;
  const yScale = height / size;
  for (let oy = 0; oy < size; oy++) {
    const sy = Math.min(height - 1, (oy + 0.5) * yScale - 0.5);
    const y0 = Math.max(0, Math.floor(sy));
    const y1 = Math.min(height - 1, y0 + 1);
    const fy = sy - y0;
    for (let ox = 0; ox < size; ox++) {
      const sx = Math.min(width - 1, (ox + 0.5) * xScale - 0.5);
      const x0 = Math.max(0, Math.floor(sx));
      const x1 = Math.min(width - 1, x0 + 1);
      const fx = sx - x0;
      for (let ch = 0; ch < 3; ch++) {
        const p00 = rgb[(y0 * width + x0) * 3 + ch];
        const p01 = rgb[(y0 * width + x1) * 3 + ch];
        const p10 = rgb[(y1 * width + x0) * 3 + ch];
        const p11 = rgb[(y1 * width + x1) * 3 + ch];
        const top = p00 + (p01 - p00) * fx;
        const bottom = p10 + (p11 - p10) * fx;
        out[(oy * size + ox) * 3 + ch] = (top + (bottom - top) * fy) / 255;
      }
    }
  }
  return out;
}
