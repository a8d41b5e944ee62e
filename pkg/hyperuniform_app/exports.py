"""
Output files: JSON documents with sorted keys, CSV tables and checksums.
"""
import csv
import hashlib
import json
import logging
import sys
from contextlib import contextmanager
from pathlib import Path

from rest_framework.utils.encoders import JSONEncoder

from .conf import get_setting

logger = logging.getLogger(__name__)


def default_output_path(command, system, fmt):
    slug = ''.join(ch if ch.isalnum() or ch in '-.' else '-' for ch in (system or command)).strip('-')
    return Path(get_setting('OUTPUT_DIR')) / f"{command}-{slug}.{fmt}"


@contextmanager
def open_output(path):
    """Text handle for a path, or stdout for '-'."""
    if str(path) == '-':
        yield sys.stdout
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', newline='', encoding='utf-8') as handle:
        yield handle


def dump_json(data, handle):
    json.dump(data, handle, cls=JSONEncoder, sort_keys=True, indent=2)
    handle.write('\n')


def write_rows(handle, header, rows):
    """CSV with reals at 17 significant digits."""
    writer = csv.writer(handle, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([f"{value:.17g}" if isinstance(value, float) else value for value in row])


def sha256_of(path):
    if str(path) == '-':
        return ''
    digest = hashlib.sha256()
    with Path(path).open('rb') as handle:
        for block in iter(lambda: handle.read(65536), b''):
            digest.update(block)
    return digest.hexdigest()
