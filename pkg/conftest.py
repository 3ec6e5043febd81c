import sys
from os import path

import pytest

sys.path.insert(0, path.dirname(path.realpath(__file__)))


def pytest_addoption(parser):
    parser.addoption('--longrun', action='store_true', default=False,
                     help='run the long property suites')


def pytest_configure(config):
    config.addinivalue_line('markers', 'longrun: long property suite, needs --longrun')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--longrun'):
        return
    skip = pytest.mark.skip(reason='Only run when --longrun is given')
    for item in items:
        if 'longrun' in item.keywords:
            item.add_marker(skip)
