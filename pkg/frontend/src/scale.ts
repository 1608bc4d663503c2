/** Linear and base-10 logarithmic axis scales with tick generation. */

export interface Scale {
  toPixel(value: number): number;
  ticks(): { value: number; label: string }[];
}

function formatTick(value: number): string {
  if (value === 0) return "0";
  const exp = Math.log10(Math.abs(value));
  if (Number.isInteger(exp) && (exp < -2 || exp > 3)) {
    return `1e${exp}`;
  }
  if (Math.abs(value) >= 1000) return value.toExponential(0).replace("+", "");
  return parseFloat(value.toPrecision(6)).toString();
}

export function linearScale(
  lo: number,
  hi: number,
  pixelLo: number,
  pixelHi: number,
): Scale {
  if (hi === lo) {
    hi = lo + 1;
  }
  const toPixel = (v: number) => pixelLo + ((v - lo) / (hi - lo)) * (pixelHi - pixelLo);
  return {
    toPixel,
    ticks() {
      const span = hi - lo;
      const step = Math.pow(10, Math.floor(Math.log10(span / 4)));
      const mult = span / step > 8 ? 2 : 1;
      const out: { value: number; label: string }[] = [];
      const start = Math.ceil(lo / (step * mult)) * step * mult;
      for (let v = start; v <= hi + 1e-12 * span; v += step * mult) {
        out.push({ value: v, label: formatTick(v) });
      }
      return out;
    },
  };
}

/**
 * Log scale over [lo, hi], both positive.  Values at or below zero are
 * clamped to the bottom of the axis so converged (zero-gap) checkpoints
 * stay on the figure without fabricating a value.
 */
export function logScale(
  lo: number,
  hi: number,
  pixelLo: number,
  pixelHi: number,
): Scale {
  if (!(lo > 0) || !(hi > 0)) {
    throw new Error(`log scale needs a positive domain, got [${lo}, ${hi}]`);
  }
  if (hi === lo) {
    hi = lo * 10;
  }
  const llo = Math.log10(lo);
  const lhi = Math.log10(hi);
  const toPixel = (v: number) => {
    const clamped = v <= lo ? llo : Math.log10(v);
    return pixelLo + ((Math.min(clamped, lhi) - llo) / (lhi - llo)) * (pixelHi - pixelLo);
  };
  return {
    toPixel,
    ticks() {
      const out: { value: number; label: string }[] = [];
      for (let e = Math.ceil(llo); e <= Math.floor(lhi + 1e-12); e++) {
        out.push({ value: Math.pow(10, e), label: `1e${e}` });
      }
      if (out.length >= 2) return out;
      // narrow range: fall back to endpoints
      return [lo, hi].map((v) => ({ value: v, label: formatTick(v) }));
    },
  };
}
