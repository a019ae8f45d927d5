"""Validate periodlab JSON reports against the published schema."""

import json
import subprocess
import sys

import jsonschema

INVOCATIONS = [
    ["report", "--g", "x", "--f", "x"],
    ["report", "--g", "x + x^2", "--f", "x^2"],
    ["report", "--g", "sin(x)"],
    ["builtin", "sabatini_isochrone"],
    ["builtin", "rayleigh_example"],
]


def main() -> int:
    tool, schema_path = sys.argv[1], sys.argv[2]
    with open(schema_path, encoding="utf-8") as fh:
        schema = json.load(fh)
    validator = jsonschema.Draft202012Validator(schema)
    failures = 0
    for args in INVOCATIONS:
        proc = subprocess.run([tool, *args], capture_output=True, text=True, check=False)
        if proc.returncode not in (0, 2):
            print(f"FAIL {args}: exit {proc.returncode}: {proc.stderr.strip()}")
            failures += 1
            continue
        errors = list(validator.iter_errors(json.loads(proc.stdout)))
        for err in errors:
            print(f"FAIL {args}: {err.json_path}: {err.message}")
        failures += bool(errors)
        if not errors:
            print(f"ok   {args}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
