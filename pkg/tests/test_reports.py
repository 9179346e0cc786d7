#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Tests for :mod:`eigenbounds.reports`."""

import io
import json

import numpy as np

from eigenbounds.reports import CsvWriter, JsonWriter, open_output
from eigenbounds.utils import get_subclasses_of

CONFIG = {'command': 'kernel', 'mu': [0.5, 1.5], 'q': 4.0}


def write(writer, rows, config=CONFIG):
    stream = io.StringIO()
    writer.write(rows, config, stream)
    return stream.getvalue()


def test_registry():
    writers = get_subclasses_of('Writer', 'eigenbounds.reports')
    assert writers == {'csv': CsvWriter, 'json': JsonWriter}


def test_csv_header_and_columns():
    text = write(CsvWriter(), [{'mu': 0.5, 'value': 0.1},
                               {'mu': 1.5, 'value': 0.2, 'error': 1e-9}])
    lines = text.split('\n')
    assert lines[0] == '# ' + json.dumps(CONFIG, sort_keys=True)
    assert lines[1] == 'mu,value,error'
    assert lines[2] == '0.5,0.10000000000000001,'
    assert lines[3] == '1.5,0.20000000000000001,1.0000000000000001e-09'
    assert text.endswith('\n') and '\r' not in text


def test_csv_values():
    rows = [{'H': 1 + 2j, 'l': np.int64(3), 'ok': True, 'x': np.float64(0.25),
             'inf': float('inf')}]
    lines = write(CsvWriter(), rows).splitlines()
    assert lines[1] == 'H_re,H_im,l,ok,x,inf'
    assert lines[2] == '1,2,3,true,0.25,inf'


def test_csv_float_round_trip():
    value = 0.1 + 0.2
    line = write(CsvWriter(), [{'x': value}]).splitlines()[2]
    assert float(line) == value


def test_json_document():
    rows = [{'l': np.int64(0), 'sigma': np.float64(0.5), 'M': 1j,
             'big': float('inf')}]
    document = json.loads(write(JsonWriter(), rows))
    assert document['schema_version'] == 1
    assert document['config'] == CONFIG
    assert document['rows'] == [{'l': 0, 'sigma': 0.5,
                                 'M': {'re': 0.0, 'im': 1.0}, 'big': 'inf'}]


def test_deterministic_output():
    rows = [{'b': 2.0, 'a': 1.0 / 3}]
    for writer in (CsvWriter(), JsonWriter()):
        assert write(writer, rows) == write(writer, rows)


def test_open_output(tmp_path, capsys):
    path = tmp_path / 'out.csv'
    with open_output(str(path)) as outf:
        CsvWriter().write([{'x': 1.0}], {}, outf)
    assert path.read_text().splitlines() == ['# {}', 'x', '1']
    with open_output('-') as outf:
        outf.write('stdout\n')
    assert capsys.readouterr().out == 'stdout\n'
