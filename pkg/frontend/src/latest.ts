/**
 * Latest-wins request coordination.
 *
 * Each view keeps one LatestWins gate per data dependency. Starting a
 * new request aborts the previous one; if an older response still
 * arrives (the server may not honor aborts mid-flight), its ticket no
 * longer matches and the result is dropped, so the UI only ever shows
 * the response to the most recent user action.
 */

export class LatestWins {
  private ticket = 0;
  private controller: AbortController | null = null;

  /**
   * Run `task` with an abort signal. Resolves with the task's result,
   * or `undefined` when the call was superseded or aborted.
   */
  async run<T>(task: (signal: AbortSignal) => Promise<T>): Promise<T | undefined> {
    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;
    const ticket = ++this.ticket;
    try {
      const result = await task(controller.signal);
      if (ticket !== this.ticket) {
        return undefined;
      }
      this.controller = null;
      return result;
    } catch (error) {
      if (controller.signal.aborted || (error as Error)?.name === "AbortError") {
        return undefined;
      }
      if (ticket !== this.ticket) {
        return undefined; // superseded; its failure is no longer interesting
      }
      this.controller = null;
      throw error;
    }
  }

  /** True while a request started here is still the latest and unaborted. */
  get pending(): boolean {
    return this.controller !== null && !this.controller.signal.aborted;
  }

  cancel(): void {
    this.controller?.abort();
    this.controller = null;
  }
}
