// Debugger state machine: one annotated session, optionally one reverse
// session spawned from it.  Exactly one request is in flight at a time;
// every view the UI shows is the last service response, untouched.

import { SessionApi } from "./api.js";
import type { SessionView } from "./types.js";

export type Panel = "forward" | "reverse";

export interface ControllerState {
  panel: Panel;
  view: SessionView | null;
  lastIdent: number | null;
  busy: boolean;
  error: string | null;
}

export class DebuggerController {
  private forwardId: string | null = null;
  private reverseId: string | null = null;
  readonly state: ControllerState = {
    panel: "forward",
    view: null,
    lastIdent: null,
    busy: false,
    error: null,
  };

  constructor(
    private api: SessionApi,
    private onChange: (state: ControllerState) => void = () => {},
  ) {}

  private emit(): void {
    this.onChange(this.state);
  }

  private currentSession(): string {
    const id = this.state.panel === "reverse" ? this.reverseId : this.forwardId;
    if (!id) {
      throw new Error("no active session");
    }
    return id;
  }

  private async exclusive<T>(work: () => Promise<T>): Promise<T | undefined> {
    if (this.state.busy) {
      return undefined;
    }
    this.state.busy = true;
    this.state.error = null;
    this.emit();
    try {
      return await work();
    } catch (err) {
      this.state.error = err instanceof Error ? err.message : String(err);
      return undefined;
    } finally {
      this.state.busy = false;
      this.emit();
    }
  }

  private show(view: SessionView): void {
    this.state.view = view;
    this.state.lastIdent = view.transition?.ident ?? null;
  }

  async loadProgram(source: string, init: Record<string, number>): Promise<void> {
    await this.exclusive(async () => {
      const view = await this.api.createSession(source, init);
      this.forwardId = view.sessionId;
      this.reverseId = null;
      this.state.panel = "forward";
      this.show(view);
    });
  }

  async stepChoice(redexIndex: number): Promise<void> {
    await this.exclusive(async () => {
      this.show(await this.api.step(this.currentSession(), redexIndex));
    });
  }

  async stepBack(): Promise<void> {
    await this.exclusive(async () => {
      this.show(await this.api.back(this.currentSession()));
    });
  }

  /** Repeatedly take the first enabled rule until the session is terminal. */
  async runToCompletion(limit = 100_000): Promise<void> {
    await this.exclusive(async () => {
      const id = this.currentSession();
      let view = this.state.view ?? (await this.api.state(id));
      let steps = 0;
      while (!view.terminal && view.enabledRedexes.length > 0 && steps < limit) {
        view = await this.api.step(id, view.enabledRedexes[0].index);
        steps += 1;
      }
      this.show(view);
    });
  }

  /** Build the inverted program and switch to the reverse session. */
  async reverseRun(): Promise<void> {
    await this.exclusive(async () => {
      if (!this.forwardId) {
        throw new Error("no active session");
      }
      const view = await this.api.reverse(this.forwardId);
      this.reverseId = view.sessionId;
      this.state.panel = "reverse";
      this.show(view);
    });
  }

  /** Return to inspecting the (terminal) forward session. */
  async showForward(): Promise<void> {
    await this.exclusive(async () => {
      if (!this.forwardId) {
        throw new Error("no active session");
      }
      this.state.panel = "forward";
      this.show(await this.api.state(this.forwardId));
    });
  }
}
