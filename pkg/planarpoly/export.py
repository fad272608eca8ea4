"""
JSON and CSV writers.

Every document carries a provenance header (command, full run config, seed,
schema version, sha256 of the body). The body is deterministic; the
timestamp lives in the header only.
"""
import csv
import dataclasses
import hashlib
import json
import logging
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
import pydantic

from . import __version__
from .conf import settings
from .exceptions import ValidationError
from .schema import SCHEMA_VERSION, ResultDocument

logger = logging.getLogger(__name__)


def plain(value):
    """JSON-ready copy: complex -> [re, im], arrays -> lists, non-finite floats -> strings."""
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: plain(getattr(value, f.name)) for f in dataclasses.fields(value)
                if f.repr}
    if isinstance(value, dict):
        return {str(key): plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(item) for item in value]
    if isinstance(value, np.ndarray):
        return [plain(item) for item in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [plain(float(value.real)), plain(float(value.imag))]
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isfinite(value):
            return value
        return 'nan' if math.isnan(value) else ('inf' if value > 0 else '-inf')
    if isinstance(value, Path):
        return str(value)
    if value is None or isinstance(value, str):
        return value
    return str(value)


def canonical_json(body):
    return json.dumps(body, sort_keys=True, separators=(',', ':'), allow_nan=False)


def content_hash(body):
    return hashlib.sha256(canonical_json(body).encode('utf-8')).hexdigest()


def build_document(command, config, body):
    """{"header": provenance, "body": body}; ``config`` is a RunConfig."""
    body = plain(body)
    header = {
        'schema_version': SCHEMA_VERSION,
        'command': command,
        'config': plain(config.as_dict()),
        'seed': config.seed,
        'content_hash': content_hash(body),
        'created_at': datetime.now(timezone.utc).isoformat(),
        'version': __version__,
    }
    return {'header': header, 'body': body}


def validate_document(document):
    try:
        ResultDocument.model_validate(document)
    except pydantic.ValidationError as exc:
        first = exc.errors()[0]
        raise ValidationError('document does not match the result schema',
                              field='.'.join(map(str, first['loc'])), reason=first['msg']) from exc
    return document


def json_schema():
    return ResultDocument.model_json_schema()


def resolve_output(path):
    """'-' or None means stdout; relative paths land in OUTPUT_DIR."""
    if path in (None, '-'):
        return None
    path = Path(path)
    if not path.is_absolute():
        path = Path(settings.OUTPUT_DIR) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _open(path):
    target = resolve_output(path)
    if target is None:
        return sys.stdout, False
    return open(target, 'w', newline=''), True


def write_json(document, path=None):
    validate_document(document)
    stream, close = _open(path)
    try:
        json.dump(document, stream, indent=2, sort_keys=True, allow_nan=False)
        stream.write('\n')
    finally:
        if close:
            stream.close()
    logger.info('wrote %s (%s)', path or 'stdout', document['header']['content_hash'][:12])


def _cell(value):
    if isinstance(value, (float, np.floating)):
        return format(float(value), settings.section('OUTPUT', 'FLOAT_FORMAT'))
    if isinstance(value, (complex, np.complexfloating)):
        raise TypeError('split complex values into two columns before writing CSV')
    return value


def write_csv(document, columns, rows, path=None):
    """Provenance as '#'-lines, then the column row, then the data rows."""
    header = document['header']
    stream, close = _open(path)
    try:
        for key in ('schema_version', 'command', 'seed', 'content_hash', 'created_at'):
            stream.write(f'# {key}: {header[key]}\n')
        stream.write(f'# config: {canonical_json(header["config"])}\n')
        writer = csv.writer(stream)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(value) for value in row])
    finally:
        if close:
            stream.close()
    logger.info('wrote %d rows to %s', len(rows), path or 'stdout')
