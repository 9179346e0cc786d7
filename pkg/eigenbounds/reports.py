#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Writers that serialize the rows of a run, together with its configuration,
to CSV or JSON. Both formats are deterministic: the same rows and
configuration always produce the same bytes.
"""

from contextlib import contextmanager
import csv
import json
import math
import sys
from typing import Any, Dict, Iterator, List, Sequence, TextIO

import numpy as np

#: The version of the JSON document layout.
SCHEMA_VERSION = 1


def _plain(value: Any) -> Any:
    """Converts numpy scalars and arrays to their Python counterparts."""
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    return value


def _json_float(value: Any) -> Any:
    """JSON has no infinities; they are written as strings."""
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if isinstance(value, complex):
        return {'re': _json_float(value.real), 'im': _json_float(value.imag)}
    if isinstance(value, list):
        return [_json_float(v) for v in value]
    if isinstance(value, dict):
        return {k: _json_float(v) for k, v in value.items()}
    return value


class Writer:
    """Base class for all writers."""
    def header(self, config: Dict[str, Any]) -> str:
        """The text preceding the rows, if any."""
        return ''

    def write(self, rows: Sequence[Dict[str, Any]], config: Dict[str, Any],
              stream: TextIO):
        """Writes _rows_ (and _config_) to _stream_."""
        raise NotImplementedError('write() must be implemented')


class CsvWriter(Writer):
    """
    CSV with a ``# `` comment line holding the configuration as JSON, then a
    header row. Floats are written with 17 significant digits; complex values
    are split into ``_re`` and ``_im`` columns.
    """
    def header(self, config: Dict[str, Any]) -> str:
        config = _json_float(_plain(config))
        return '# ' + json.dumps(config, sort_keys=True) + '\n'

    @staticmethod
    def _flatten(row: Dict[str, Any]) -> Dict[str, Any]:
        flat = {}
        for key, value in _plain(row).items():
            if isinstance(value, complex):
                flat[f'{key}_re'] = value.real
                flat[f'{key}_im'] = value.imag
            else:
                flat[key] = value
        return flat

    @staticmethod
    def _format(value: Any) -> str:
        if isinstance(value, bool):
            return str(value).lower()
        if isinstance(value, float):
            return format(value, '.17g')
        if value is None:
            return ''
        return str(value)

    def write(self, rows: Sequence[Dict[str, Any]], config: Dict[str, Any],
              stream: TextIO):
        stream.write(self.header(config))
        rows = [self._flatten(row) for row in rows]
        columns: List[str] = []
        for row in rows:
            columns.extend(key for key in row if key not in columns)
        writer = csv.writer(stream, lineterminator='\n')
        writer.writerow(columns)
        for row in rows:
            writer.writerow([self._format(row.get(column)) for column in columns])


class JsonWriter(Writer):
    """A single JSON object with ``schema_version``, ``config`` and ``rows``."""
    def write(self, rows: Sequence[Dict[str, Any]], config: Dict[str, Any],
              stream: TextIO):
        document = {'schema_version': SCHEMA_VERSION,
                    'config': _json_float(_plain(config)),
                    'rows': [_json_float(_plain(row)) for row in rows]}
        json.dump(document, stream, sort_keys=True, indent=2)
        stream.write('\n')


@contextmanager
def open_output(path: str) -> Iterator[TextIO]:
    """Opens _path_ for writing; ``-`` means the standard output."""
    if path == '-':
        yield sys.stdout
        sys.stdout.flush()
    else:
        with open(path, 'wt', encoding='utf-8', newline='\n') as outf:
            yield outf
