"""
Shared pytest setup - extended (long-running) test gating
"""

import os

import pytest


def pytest_addoption(parser):
    parser.addoption('--extended', action='store_true', default=False,
                     help='Run long searches and large Cayley checks')


def pytest_configure(config):
    config.addinivalue_line('markers', 'extended: long-running test, enabled with --extended')


def pytest_collection_modifyitems(config, items):
    enabled = config.getoption('--extended') or \
        os.environ.get('SATURATION_EXTENDED', 'False').lower() == 'true'
    if enabled:
        return
    skip = pytest.mark.skip(reason='needs --extended or SATURATION_EXTENDED=true')
    for item in items:
        if 'extended' in item.keywords:
            item.add_marker(skip)
