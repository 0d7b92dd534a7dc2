"""
JSON helpers. Big integers always travel as decimal strings.
"""

import json

from .errors import InvalidInputError
from .settings import SCHEMA_VERSION


def int_to_json(value):
    return str(int(value))


def int_from_json(value):
    """Accept a decimal string or a JSON integer."""
    if isinstance(value, bool):
        raise InvalidInputError(f"Expected an integer, got {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value)
        except ValueError:
            pass
    raise InvalidInputError(f"Expected an integer or decimal string, got {value!r}")


def envelope(kind, payload):
    """Wrap a payload with the schema version and document kind."""
    return {"schema_version": SCHEMA_VERSION, "kind": kind, **payload}


def dumps(document):
    # Sorted keys and fixed separators keep reruns byte-identical.
    return json.dumps(document, sort_keys=True, separators=(",", ":"))


def load_json_argument(text_or_path):
    """Parse inline JSON, or read it from a file path."""
    text = text_or_path
    if not text_or_path.lstrip().startswith(("{", "[")):
        try:
            with open(text_or_path, "r") as f:
                text = f.read()
        except OSError as e:
            raise InvalidInputError(f"Cannot read input file {text_or_path}: {e}") from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidInputError(f"Invalid JSON input: {e}") from e
