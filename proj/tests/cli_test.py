#!/usr/bin/env python3
"""End-to-end checks of the command-line interface: exit codes, payloads and determinism."""
import json
import subprocess
import sys
import tempfile
from pathlib import Path

CLI = sys.argv[1]
failures = []


def run(*args, stdin=None):
    p = subprocess.run([CLI, *args], input=stdin, capture_output=True, text=True)
    return p.returncode, p.stdout


def check(name, cond):
    print(("PASS " if cond else "FAIL ") + name)
    if not cond:
        failures.append(name)


with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    code, out = run("dims", "0", "--no-rank")
    check("dims 0 exit 0", code == 0)
    check("dims 0 counts", json.loads(out)["results"]["dims"] == {"T": 15, "Z": 84, "V": 378})
    check("dims determinism", run("dims", "0", "--seed", "4")[1] == run("dims", "0", "--seed", "4", "--jobs", "3")[1])

    zero = tmp / "zero.json"
    zero.write_text(json.dumps({"rep": "spinor", "components": {k: "0" for k in ("00", "01", "10", "11")}}))
    code, out = run("verify", str(zero))
    check("verify zero current", code == 0 and json.loads(out)["results"]["conserved"] is True)

    bad = tmp / "bad.json"
    bad.write_text('{"rep": "spinor", "components": {"00": "(1)*phi[0;0;0]"}}')
    code, out = run("verify", str(bad))
    check("verify non-conserved exits 1", code == 1 and "divergence" in json.loads(out)["results"])

    broken = tmp / "broken.json"
    broken.write_text('{"rep": ')
    code, out = run("verify", str(broken))
    check("malformed JSON exits 2 with location", code == 2 and "byte" in json.loads(out)["error"]["message"])
    check("unknown subcommand exits 2", run("frobnicate")[0] == 2)

    code, out = run("basis", "0")
    basis = json.loads(out)["results"]
    check("basis 0 lists 15 currents", code == 0 and basis["count"] == 15)
    entry = basis["currents"][4]
    cur = tmp / "cur.json"
    cur.write_text(json.dumps(entry["current"]))
    code, out = run("classify", str(cur))
    terms = json.loads(out)["results"]["terms"] if code == 0 else []
    check("classify recovers its own label",
          len(terms) == 1 and terms[0]["indices"]["label"] == entry["label"] and terms[0]["coeff"] == "1")

    code, out = run("convert", str(cur), "--to", "tensor")
    tens = tmp / "tens.json"
    tens.write_text(json.dumps(json.loads(out)["results"]["current"]))
    code2, out2 = run("convert", str(tens), "--to", "spinor")
    check("convert round trip", code == 0 and code2 == 0
          and json.loads(out2)["results"]["current"]["components"] == entry["current"]["components"])

    code, out = run("tensors", "T", "0")
    check("tensors T 0 all pass", code == 0 and json.loads(out)["results"]["all_pass"] is True)
    check("tensors bad kind exits 2", run("tensors", "Q", "0")[0] == 2)

sys.exit(1 if failures else 0)
