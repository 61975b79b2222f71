import json
import logging
import os
import tempfile

from ..errors import FormatError

logger = logging.getLogger(__name__)


def write_json_atomic(path, payload):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", suffix=".json", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=1)
        os.replace(tmp, path)
    except Exception:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise
    logger.debug("wrote %s", path)


def read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as e:
        raise FormatError(f"file not found: {path}", path=str(path)) from e
    except json.JSONDecodeError as e:
        raise FormatError(f"invalid JSON in {path}: {e}", path=str(path)) from e
