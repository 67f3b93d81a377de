import { HttpTransport } from "./api.js";
import { PlanEditor } from "./editor.js";
import { EditorSession } from "./session.js";

async function boot(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const transport = new HttpTransport(params.get("server") ?? "");
  const requested = Number(params.get("project") ?? "1");

  const root = document.getElementById("editor")!;
  const canvas = document.getElementById("plan") as HTMLCanvasElement;
  const tablePanel = document.getElementById("table-panel")!;
  const status = document.getElementById("status")!;

  // hooks need the editor, the session needs the hooks: wire lazily
  let editor: PlanEditor | null = null;
  const session = new EditorSession(requested, transport, {
    planChanged: (svg) => editor?.hooks().planChanged(svg),
    tableChanged: (t) => editor?.hooks().tableChanged(t),
    readoutChanged: (r) => editor?.hooks().readoutChanged(r),
    reliefChanged: (l) => editor?.hooks().reliefChanged(l),
    conflict: (rev) => editor?.hooks().conflict(rev),
    error: (msg) => editor?.hooks().error(msg),
  });
  editor = new PlanEditor(root, session, canvas, tablePanel, status);
  await session.load();
}

void boot();
