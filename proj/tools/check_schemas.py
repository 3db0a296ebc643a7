"""Runs the ssc tool in JSON mode and validates every report and emitted file against schemas/."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema


def main() -> int:
    tool, schemas, data = sys.argv[1], Path(sys.argv[2]), Path(sys.argv[3])
    validators = {}
    for path in schemas.glob("*.schema.json"):
        schema = json.loads(path.read_text())
        jsonschema.Draft202012Validator.check_schema(schema)
        validators[path.name.removesuffix(".schema.json")] = jsonschema.Draft202012Validator(schema)

    failures = 0

    def check(name, instance, label):
        nonlocal failures
        errors = list(validators[name].iter_errors(instance))
        status = "ok" if not errors else "FAIL"
        print(f"{status:4} {name:12} {label}")
        for e in errors[:5]:
            print(f"     {e.json_path}: {e.message}")
        failures += bool(errors)

    def run(*args):
        out = subprocess.run([tool, "--json", *args], capture_output=True, text=True)
        if out.returncode != 0:
            raise SystemExit(f"ssc {' '.join(args)} exited {out.returncode}: {out.stderr}")
        return json.loads(out.stdout)

    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        two_by_two = (str(data / "witness_2x2_left.json"), str(data / "witness_2x2_right.json"))
        rand = (str(data / "random_left.json"), str(data / "random_right.json"))
        letters = str(data / "alphabet_3x3_12.json")
        cases = [
            ("bound", ["bound", "2", "3"]),
            ("bound", ["bound", "7", "7"]),
            ("complexity", ["complexity", *two_by_two]),
            ("complexity", ["complexity", *rand]),
            ("reach", ["reach", "3", "3"]),
            ("reach", ["reach", "3", "3", "--alphabet", letters]),
            ("reach", ["reach", "3", "3", "--alphabet", letters, "--stop-after", "1",
                       "--checkpoint-dir", str(tmp / "ck")]),
            ("certify", ["certify", "3", "4", "--base", "3x3", "--output", str(tmp / "cert.json")]),
            ("certify", ["certify", "3", "4", "--no-reductions", "--no-search", "--base", "2x2"]),
            ("verify", ["verify", str(tmp / "cert.json")]),
            ("distinguish", ["distinguish", "3", "3"]),
            ("distinguish", ["distinguish", "4", "5"]),
            ("search", ["search", "2", "2", "4", "--output", str(tmp / "w.json")]),
            ("search", ["search", "2", "2", "4", "--bound-only", "--distinguish-finals"]),
            ("search", ["search", "2", "2", "1", "--min-alphabet", "5"]),
            ("search", ["search", "2", "2", "4", "--count-right"]),
            ("okhotin", ["okhotin", "5"]),
            ("direct", ["direct", "3", "3"]),
            ("alphabet", ["alphabet", "2", "2", "--output", str(tmp / "greedy.json")]),
            ("alphabet", ["alphabet", "3", "3", "--check", letters]),
        ]
        for name, args in cases:
            report = run(*args)
            if report.get("command") != name:
                print(f"FAIL {name:12} command field is {report.get('command')!r}")
                failures += 1
            check(name, report, " ".join(args[1:]))

        check("certificate", json.loads((tmp / "cert.json").read_text()), "certificate file")
        check("witnesses", json.loads((tmp / "w.json").read_text()), "witness file")
        check("letters", json.loads((tmp / "greedy.json").read_text()), "greedy letter file")
        check("letters", json.loads(Path(letters).read_text()), "shipped letter file")
        for dfa in sorted(data.glob("*_left.json")) + sorted(data.glob("*_right.json")):
            check("dfa", json.loads(dfa.read_text()), dfa.name)

    print(f"{failures} schema failure(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
