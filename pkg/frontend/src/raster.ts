import { GLYPH_H, GLYPH_W, glyph } from "./font.js";
import type { Rgb } from "./colormap.js";

/** Plain RGB pixel buffer with the few primitives the panels need. */
export class Raster {
  readonly width: number;
  readonly height: number;
  readonly data: Uint8Array;

  constructor(width: number, height: number, background: Rgb = [255, 255, 255]) {
    this.width = width;
    this.height = height;
    this.data = new Uint8Array(width * height * 3);
    for (let i = 0; i < width * height; i++) {
      this.data[3 * i] = background[0];
      this.data[3 * i + 1] = background[1];
      this.data[3 * i + 2] = background[2];
    }
  }

  set(x: number, y: number, color: Rgb): void {
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) return;
    const i = 3 * (y * this.width + x);
    this.data[i] = color[0];
    this.data[i + 1] = color[1];
    this.data[i + 2] = color[2];
  }

  rect(x0: number, y0: number, w: number, h: number, color: Rgb): void {
    for (let y = y0; y < y0 + h; y++) {
      for (let x = x0; x < x0 + w; x++) this.set(x, y, color);
    }
  }

  frame(x0: number, y0: number, w: number, h: number, color: Rgb): void {
    for (let x = x0; x < x0 + w; x++) {
      this.set(x, y0, color);
      this.set(x, y0 + h - 1, color);
    }
    for (let y = y0; y < y0 + h; y++) {
      this.set(x0, y, color);
      this.set(x0 + w - 1, y, color);
    }
  }

  /** Bresenham segment with optional thickness. */
  line(x0: number, y0: number, x1: number, y1: number, color: Rgb, thick = 1): void {
    let [ax, ay] = [Math.round(x0), Math.round(y0)];
    const [bx, by] = [Math.round(x1), Math.round(y1)];
    const dx = Math.abs(bx - ax);
    const dy = -Math.abs(by - ay);
    const sx = ax < bx ? 1 : -1;
    const sy = ay < by ? 1 : -1;
    let err = dx + dy;
    for (;;) {
      if (thick <= 1) {
        this.set(ax, ay, color);
      } else {
        const r = Math.floor(thick / 2);
        this.rect(ax - r, ay - r, thick, thick, color);
      }
      if (ax === bx && ay === by) break;
      const e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        ax += sx;
      }
      if (e2 <= dx) {
        err += dx;
        ay += sy;
      }
    }
  }

  text(x: number, y: number, s: string, color: Rgb, scale = 1): void {
    let cx = x;
    for (const ch of s) {
      const rows = glyph(ch);
      for (let ry = 0; ry < GLYPH_H; ry++) {
        for (let rx = 0; rx < GLYPH_W; rx++) {
          if ((rows[ry] >> (GLYPH_W - 1 - rx)) & 1) {
            this.rect(cx + rx * scale, y + ry * scale, scale, scale, color);
          }
        }
      }
      cx += (GLYPH_W + 1) * scale;
    }
  }

  /** Text rotated 90 degrees counterclockwise (for y-axis labels). */
  textVertical(x: number, y: number, s: string, color: Rgb, scale = 1): void {
    let cy = y;
    for (const ch of s) {
      const rows = glyph(ch);
      for (let ry = 0; ry < GLYPH_H; ry++) {
        for (let rx = 0; rx < GLYPH_W; rx++) {
          if ((rows[ry] >> (GLYPH_W - 1 - rx)) & 1) {
            this.rect(x + ry * scale, cy - rx * scale, scale, scale, color);
          }
        }
      }
      cy -= (GLYPH_W + 1) * scale;
    }
  }
}
