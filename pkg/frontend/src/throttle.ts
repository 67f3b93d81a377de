/** Rate limiting and latest-wins guards for pointer-driven queries. */

export type Throttled<A extends unknown[]> = ((...args: A) => void) & { cancel: () => void };

/**
 * Run `fn` at most once per `intervalMs`, always with the latest arguments.
 * Leading call fires immediately; a trailing call flushes the last args.
 */
export function throttle<A extends unknown[]>(fn: (...args: A) => void, intervalMs: number): Throttled<A> {
  let last = -Infinity;
  let timer: ReturnType<typeof setTimeout> | null = null;
  let pending: A | null = null;

  const flush = () => {
    timer = null;
    if (pending) {
      const args = pending;
      pending = null;
      last = Date.now();
      fn(...args);
    }
  };

  const throttled = ((...args: A) => {
    const now = Date.now();
    if (now - last >= intervalMs && timer == null) {
      last = now;
      fn(...args);
      return;
    }
    pending = args;
    if (timer == null) {
      timer = setTimeout(flush, Math.max(0, intervalMs - (now - last)));
    }
  }) as Throttled<A>;

  throttled.cancel = () => {
    if (timer != null) {
      clearTimeout(timer);
      timer = null;
    }
    pending = null;
  };
  return throttled;
}

/** Monotone ticket counter; stale async responses lose the race. */
export class LatestWins {
  private issued = 0;
  private applied = 0;

  ticket(): number {
    return ++this.issued;
  }

  /** True when `ticket` is still the newest outstanding request. */
  accept(ticket: number): boolean {
    if (ticket < this.applied) {
      return false;
    }
    this.applied = ticket;
    return true;
  }
}
