/** Decoder for the service's canonical binary PPM (P6, maxval 255) tiles. */

export interface DecodedImage {
  width: number;
  height: number;
  rgba: Uint8ClampedArray<ArrayBuffer>;
}

/** Decode P6 bytes to RGBA.
 *
 * The service emits rows bottom-up in the mathematical orientation (row 0 at
 * the lowest imaginary part); pass flipY=true to get canvas orientation
 * (row 0 at the top = highest imaginary part).
 */
export function decodePPM(buf: ArrayBuffer, flipY = false): DecodedImage {
  const bytes = new Uint8Array(buf);
  if (bytes[0] !== 0x50 || bytes[1] !== 0x36) {
    throw new Error("not a P6 PPM");
  }
  // header: three whitespace-separated tokens after the magic (w, h, maxval)
  let pos = 2;
  const tokens: number[] = [];
  while (tokens.length < 3) {
    while (pos < bytes.length && isSpace(bytes[pos])) pos++;
    if (bytes[pos] === 0x23) {
      // comment line
      while (pos < bytes.length && bytes[pos] !== 0x0a) pos++;
      continue;
    }
    let start = pos;
    while (pos < bytes.length && !isSpace(bytes[pos])) pos++;
    tokens.push(Number(ascii(bytes, start, pos)));
  }
  pos++; // single whitespace after maxval
  const [width, height, maxval] = tokens;
  if (!(width > 0 && height > 0) || maxval !== 255) {
    throw new Error(`unsupported PPM header ${width}x${height} maxval=${maxval}`);
  }
  if (bytes.length - pos < width * height * 3) {
    throw new Error("truncated PPM pixel data");
  }
  const rgba = new Uint8ClampedArray(new ArrayBuffer(width * height * 4));
  for (let row = 0; row < height; row++) {
    const srcRow = flipY ? height - 1 - row : row;
    let src = pos + srcRow * width * 3;
    let dst = row * width * 4;
    for (let i = 0; i < width; i++) {
      rgba[dst] = bytes[src];
      rgba[dst + 1] = bytes[src + 1];
      rgba[dst + 2] = bytes[src + 2];
      rgba[dst + 3] = 255;
      src += 3;
      dst += 4;
    }
  }
  return { width, height, rgba };
}

function isSpace(b: number): boolean {
  return b === 0x20 || b === 0x09 || b === 0x0a || b === 0x0d;
}

function ascii(bytes: Uint8Array, start: number, end: number): string {
  let out = "";
  for (let k = start; k < end; k++) out += String.fromCharCode(bytes[k]);
  return out;
}
