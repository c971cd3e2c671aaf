#!/usr/bin/env python3
"""Capture live session-service responses for the frontend tests.

Drives the worked restaurant schedule (two iterations, third condition
evaluation, the parallel r-assignment, body, final evaluation, exit) and
the subsequent semantic reversal, recording every request/response pair.
"""

import json
import sys
import threading
import urllib.request
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent.parent
sys.path.insert(0, str(ROOT / "src"))

from revlang.service import make_server  # noqa: E402

SOURCE = (ROOT / "programs" / "restaurant.rwl").read_text()
INIT = {"m": 4, "c": 0, "r": 0}


def main() -> int:
    server = make_server(port=0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    host, port = server.server_address[:2]
    base = f"http://{host}:{port}"
    exchanges = []

    def call(method, path, body=None):
        data = None if body is None else json.dumps(body).encode()
        request = urllib.request.Request(base + path, data=data, method=method,
                                         headers={"Content-Type": "application/json"})
        with urllib.request.urlopen(request) as response:
            payload = json.loads(response.read())
        exchanges.append({"request": {"method": method, "path": path,
                                      "body": body},
                          "response": {"status": response.status,
                                       "body": payload}})
        return payload

    view = call("POST", "/sessions", {"source": SOURCE, "init": INIT})
    sid = view["sessionId"]

    evals = 0
    interleaved = False
    while not view["terminal"]:
        choice = None
        if evals >= 3 and not interleaved:
            right = [r for r in view["enabledRedexes"] if r["path"][:1] == ["parR"]]
            if right:
                choice = right[0]["index"]
                interleaved = True
        if choice is None:
            left = [r for r in view["enabledRedexes"] if r["path"][:1] == ["parL"]]
            choice = (left[0] if left else view["enabledRedexes"][0])["index"]
        view = call("POST", f"/sessions/{sid}/step", {"redexIndex": choice})
        if view["transition"]["rule"] in ("W1a", "W2a"):
            evals += 1

    rev = call("POST", f"/sessions/{sid}/reverse", {})
    rev_sid = rev["reverseSessionId"]
    view = rev
    while not view["terminal"]:
        view = call("POST", f"/sessions/{rev_sid}/step", {"redexIndex": 0})

    # anonymise session ids so the fixture is stable
    blob = json.dumps(exchanges, indent=1)
    blob = blob.replace(sid, "FWD_SESSION").replace(rev_sid, "REV_SESSION")
    out = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "race_replay.json"
    out.write_text(blob)
    print(f"captured {len(exchanges)} exchanges -> {out}")
    server._stopped = True
    server.shutdown()
    return 0


if __name__ == "__main__":
    sys.exit(main())
