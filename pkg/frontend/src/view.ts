// Pure projections of a SessionView into HTML strings.  Program text is
// the service's canonical rendering, so the UI and the CLI show the same
// bytes; the only client-side work is wrapping annotation suffixes in
// badge markup.

import type { DeltaView, RedexView, SessionView, StoresView } from "./types.js";

const ANNOTATION = /\((λ|[A-Za-z0-9_.:*]+),\[([0-9,]*)\]\)/g;

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Identifier stacks per annotated line of the rendered program, in
 * display order; used both for rendering and in tests to compare badges
 * against the service's table entries. */
export function extractStacks(rendered: string): { line: string; ids: number[] }[] {
  const out: { line: string; ids: number[] }[] = [];
  for (const line of rendered.split("\n")) {
    for (const match of line.matchAll(ANNOTATION)) {
      const ids = match[2] === "" ? [] : match[2].split(",").map(Number);
      out.push({ line: line.trim(), ids });
    }
  }
  return out;
}

export function programHtml(rendered: string, highlightId?: number | null): string {
  const lines = rendered.split("\n").map((line) => {
    const escaped = escapeHtml(line);
    const withBadges = escaped.replace(ANNOTATION, (_match, path, ids: string) => {
      const badges = ids === ""
        ? ""
        : ids
            .split(",")
            .map((id) => {
              const active = highlightId !== undefined && highlightId !== null
                && Number(id) === highlightId;
              return `<span class="badge${active ? " badge-active" : ""}">${id}</span>`;
            })
            .join("");
      return `<span class="annotation">(${path},[${badges}])</span>`;
    });
    return `<span class="code-line">${withBadges}</span>`;
  });
  return `<pre class="program">${lines.join("\n")}</pre>`;
}

export function storesHtml(stores: StoresView): string {
  const rows = stores.variables
    .map(
      (v) =>
        `<tr><td>${escapeHtml(v.name)}</td><td>${escapeHtml(v.scope)}</td>` +
        `<td>l${v.location}</td><td>${v.value}</td></tr>`,
    )
    .join("");
  const procs = stores.procedures.map(escapeHtml).join(", ") || "–";
  const loops = stores.loops.map(escapeHtml).join(", ") || "–";
  return (
    `<table class="stores"><thead><tr><th>variable</th><th>scope</th>` +
    `<th>location</th><th>value</th></tr></thead><tbody>${rows}</tbody></table>` +
    `<p class="envs">procedures: ${procs}<br>loops: ${loops}</p>`
  );
}

export function deltaHtml(delta: DeltaView): string {
  const parts: string[] = [];
  for (const [name, stack] of Object.entries(delta.variables)) {
    parts.push(stackRow(name, stack.map(([id, v]) => `${id}:${v}`)));
  }
  parts.push(stackRow("B", delta.B.map(([id, v]) => `${id}:${v ? "T" : "F"}`)));
  parts.push(stackRow("W", delta.W.map(([id, v]) => `${id}:${v ? "T" : "F"}`)));
  parts.push(stackRow("WI", delta.WI.map(([id]) => `${id}:info`)));
  parts.push(stackRow("Pr", delta.Pr.map(([id]) => `${id}:info`)));
  return `<table class="delta"><tbody>${parts.join("")}</tbody></table>`;
}

function stackRow(name: string, entries: string[]): string {
  const cells = entries.map((e) => `<span class="aux">${escapeHtml(e)}</span>`).join("");
  return `<tr><th>${escapeHtml(name)}</th><td>${cells || "∅"}</td></tr>`;
}

export function redexListHtml(redexes: RedexView[], busy: boolean): string {
  if (redexes.length === 0) {
    return `<p class="terminal-note">no enabled rules: execution is terminal</p>`;
  }
  return redexes
    .map(
      (r) =>
        `<button class="redex${r.identifierStep ? " m-rule" : ""}" ` +
        `data-index="${r.index}"${busy ? " disabled" : ""}>` +
        `${escapeHtml(r.label)}</button>`,
    )
    .join("");
}

export function statusHtml(view: SessionView): string {
  const bits = [
    `mode: <b>${view.mode}</b>`,
    `step: <b>${view.stepIndex}</b>`,
    `next id: <b>${view.counters.nextId}</b>`,
    `previous id: <b>${view.counters.prevId}</b>`,
  ];
  if (view.terminal) {
    bits.push(`<span class="pill terminal">terminal</span>`);
  }
  if (view.restored !== undefined) {
    bits.push(
      view.restored
        ? `<span class="pill restored">restored: true</span>`
        : `<span class="pill not-restored">restored: false</span>`,
    );
  }
  return bits.join(" · ");
}

export function diagnosticHtml(message: string): string {
  return `<p class="diagnostic">${escapeHtml(message)}</p>`;
}
