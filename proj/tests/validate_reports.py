"""Run the CLI, validate each JSON report against the shipped schema, and
check that repeated runs are byte-identical."""
import json
import os
import subprocess
import sys
import tempfile

import jsonschema

cli, schema_path = sys.argv[1], sys.argv[2]
schema = json.load(open(schema_path))
validator = jsonschema.Draft202012Validator(schema)

commands = [
    (["verify", "rep", "--rho", "2"], 0),
    (["verify", "rep", "--rho", "3"], 1),
    (["verify", "picard", "--d", "7"], 0),
    (["fp", "cosets", "--preset", "p3-N"], 0),
    (["--max-cosets", "3", "fp", "cosets", "--preset", "p3-N"], 1),
    (["fp", "subgroup", "--preset", "p3-N"], 0),
    (["complex", "build"], 0),
]
failures = 0
with tempfile.TemporaryDirectory() as tmp:
    env = dict(os.environ, CRS_OUT_DIR=tmp)
    for args, want in commands:
        runs = [subprocess.run([cli, *args], capture_output=True, env=env) for _ in range(2)]
        name = " ".join(args)
        if runs[0].returncode != want:
            print(f"{name}: exit {runs[0].returncode}, expected {want}")
            failures += 1
        if runs[0].stdout != runs[1].stdout:
            print(f"{name}: output differs between runs")
            failures += 1
        errors = list(validator.iter_errors(json.loads(runs[0].stdout)))
        for e in errors:
            print(f"{name}: {e.message}")
        failures += bool(errors)
    # rendered figures land in the override directory and are deterministic
    outs = []
    for _ in range(2):
        subprocess.run([cli, "render", "heights", "--out", "h.csv", "--svg", "h.svg"], check=True, env=env,
                       capture_output=True)
        outs.append(open(os.path.join(tmp, "h.csv"), "rb").read() + open(os.path.join(tmp, "h.svg"), "rb").read())
    if outs[0] != outs[1]:
        print("render heights: output differs between runs")
        failures += 1
print("ok" if not failures else f"{failures} failure(s)")
sys.exit(1 if failures else 0)
