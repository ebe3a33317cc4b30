// Simulated playback over a document's timed spans. There is no audio in
// the client; "play" is a cursor sweeping the timeline while whatever lies
// under it is highlighted, and selecting a region highlights the spans it
// touches (and the other way round).

export interface TimedSpan {
  id: string;
  start: number; // seconds
  end: number;
}

/** Spans overlapping [t0, t1], the same rule the server's range query uses. */
export function spansInRegion(spans: TimedSpan[], t0: number, t1: number): string[] {
  return spans
    .filter((s) => s.start <= t1 && s.end >= t0)
    .sort((a, b) => a.start - b.start || a.end - b.end || (a.id < b.id ? -1 : 1))
    .map((s) => s.id);
}

/** The tightest region covering the given spans; null when none match. */
export function regionOfSpans(
  spans: TimedSpan[],
  ids: string[],
): { start: number; end: number } | null {
  const wanted = new Set(ids);
  const hit = spans.filter((s) => wanted.has(s.id));
  if (hit.length === 0) return null;
  return {
    start: Math.min(...hit.map((s) => s.start)),
    end: Math.max(...hit.map((s) => s.end)),
  };
}

export class TimelineCursor {
  t = 0;
  playing = false;

  constructor(private spans: TimedSpan[]) {}

  setSpans(spans: TimedSpan[]): void {
    this.spans = spans;
  }

  seek(t: number): string[] {
    this.t = Math.max(0, t);
    return this.under();
  }

  /** Advance the simulated clock; playback stops past the last span. */
  tick(dt: number): string[] {
    if (this.playing) {
      this.t += dt;
      const last = Math.max(0, ...this.spans.map((s) => s.end));
      if (this.t >= last) {
        this.t = last;
        this.playing = false;
      }
    }
    return this.under();
  }

  under(): string[] {
    return spansInRegion(this.spans, this.t, this.t);
  }
}
