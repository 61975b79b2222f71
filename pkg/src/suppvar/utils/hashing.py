import json

import mmh3


def canonical_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def content_hash(*payloads) -> str:
    """128-bit murmur hash of the canonical JSON of the payloads, as hex."""
    text = "\x1e".join(canonical_json(p) for p in payloads)
    return format(mmh3.hash128(text, signed=False), "032x")
