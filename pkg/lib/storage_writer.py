import os
import gzip
import json
import logging
from io import BytesIO


def _compress_json(data):
    """Compresses a JSON-serializable object into a gzipped byte string.

    The gzip header timestamp is pinned and keys are sorted, so equal inputs give equal bytes.
    """
    out = BytesIO()
    with gzip.GzipFile(fileobj=out, mode='wb', mtime=0) as f:
        f.write(json.dumps(data, sort_keys=True, allow_nan=True).encode('utf-8'))
    return out.getvalue()


def _decompress_json(raw):
    with gzip.GzipFile(fileobj=BytesIO(raw), mode='rb') as f:
        return json.loads(f.read().decode('utf-8'))


def _ensure_parent(full_path):
    parent = os.path.dirname(full_path)
    if parent:
        os.makedirs(parent, exist_ok=True)


def write_json_gz(full_path, data):
    """Writes a gzipped JSON document to the local filesystem."""
    _ensure_parent(full_path)
    with open(full_path, 'wb') as f:
        f.write(_compress_json(data))
    logging.info(f"[Local] Wrote {full_path}")
    return full_path


def read_json_gz(full_path):
    """Reads a gzipped JSON document. Decoding errors propagate to the caller."""
    with open(full_path, 'rb') as f:
        raw = f.read()
    return _decompress_json(raw)


def write_json(full_path, data):
    """Writes a plain, pretty-printed JSON document."""
    _ensure_parent(full_path)
    with open(full_path, 'w', encoding='utf-8') as f:
        json.dump(data, f, indent=2, sort_keys=True)
        f.write("\n")
    logging.info(f"[Local] Wrote {full_path}")
    return full_path


def write_text(full_path, text):
    """Writes a UTF-8 text report."""
    _ensure_parent(full_path)
    with open(full_path, 'w', encoding='utf-8') as f:
        f.write(text)
        if not text.endswith("\n"):
            f.write("\n")
    logging.info(f"[Local] Wrote {full_path}")
    return full_path


def write_frame_csv(full_path, frame):
    """Writes a DataFrame as CSV without the index, using '.' decimals and LF line endings."""
    _ensure_parent(full_path)
    frame.to_csv(full_path, index=False, lineterminator="\n")
    logging.info(f"[Local] Wrote {full_path} ({len(frame)} rows)")
    return full_path
