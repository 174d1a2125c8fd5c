"""Validate a JSON report against a schema; exit 1 on violation."""
import json
import sys

import jsonschema


def main() -> int:
    schema_path, report_path = sys.argv[1], sys.argv[2]
    with open(schema_path, encoding="utf-8") as f:
        schema = json.load(f)
    with open(report_path, encoding="utf-8") as f:
        report = json.load(f)
    try:
        jsonschema.Draft202012Validator(schema).validate(report)
    except jsonschema.ValidationError as e:
        print(f"{report_path}: {e.message} at {list(e.absolute_path)}", file=sys.stderr)
        return 1
    print(f"{report_path}: ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
