"""Validates the bundled scenarios, and the driver's canonical form of each, against the schema."""

import json
import pathlib
import subprocess
import sys

import jsonschema


def main():
    cscp, scenarios = sys.argv[1], pathlib.Path(sys.argv[2])
    schema = json.loads((scenarios / "scenario.schema.json").read_text())
    validator = jsonschema.Draft202012Validator(schema)
    failures = 0
    paths = sorted(p for p in scenarios.glob("*.json") if not p.name.endswith(".schema.json"))
    for path in paths:
        canon = subprocess.run([cscp, "canon", str(path)], capture_output=True, text=True, check=True).stdout
        for label, doc in (("file", json.loads(path.read_text())), ("canon", json.loads(canon))):
            for err in validator.iter_errors(doc):
                failures += 1
                print(f"{path.name} ({label}) at /{'/'.join(map(str, err.absolute_path))}: {err.message}")
    print(f"{len(paths)} scenarios, {failures} schema violations")
    sys.exit(1 if failures or not paths else 0)


if __name__ == "__main__":
    main()
