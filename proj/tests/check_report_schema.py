"""Runs the CLI on a config and validates the full report against the schema."""

import json
import subprocess
import sys

import jsonschema


def main() -> int:
    exe, config, schema_path, report_path = sys.argv[1:5]
    code = subprocess.call([exe, "--output", report_path, "--verbosity", "full", "control", config])
    if code != 0:
        print(f"control exited with {code}")
        return 1
    with open(schema_path) as fh:
        schema = json.load(fh)
    with open(report_path) as fh:
        report = json.load(fh)
    jsonschema.validate(report, schema)
    n = report["n_iter"]
    if not (len(report["t_int"]) == len(report["t_var"]) == len(report["t_opt"]) == n):
        print("timing lists do not match n_iter")
        return 1
    if len(report["y0"]) != n + 1:
        print("iterate list does not match n_iter")
        return 1
    print(f"report valid: status={report['status']} n_iter={n}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
