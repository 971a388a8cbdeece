import functools

import pytest

from khdetect import kh, khr
from khdetect.library import LIBRARY

SMALL = [n for n, d in LIBRARY.items() if len(d.crossings) <= 9]
LINKS = [n for n, d in LIBRARY.items() if len(d.components) > 1]
SMALL_LINKS = [n for n in LINKS if n in SMALL]


@functools.lru_cache(maxsize=None)
def kh_of(name, coeff="Z"):
    return kh(LIBRARY[name], coeff)


@functools.lru_cache(maxsize=None)
def khr_of(name, component=None, coeff="Z"):
    return khr(LIBRARY[name], component, coeff)


@pytest.fixture
def library():
    return LIBRARY
