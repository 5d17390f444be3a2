# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled byte scanning kernels.

Semantics must match imartifacts._scan.pykernels exactly; the test suite
compares both backends on random buffers.
"""

from libc.string cimport memchr, memcmp


def find_all(bytes data, bytes pattern, Py_ssize_t start=0, Py_ssize_t end=-1):
    """Return the offsets of every occurrence of pattern in data[start:end]."""
    cdef Py_ssize_t n = len(data)
    cdef Py_ssize_t m = len(pattern)
    if m == 0:
        raise ValueError("pattern must be non-empty")
    if end < 0:
        end = n
    if end > n:
        end = n
    if start < 0:
        start = 0
    hits = []
    if start >= end or m > end - start:
        return hits
    cdef const unsigned char* buf = data
    cdef const unsigned char* pat = pattern
    cdef unsigned char first = pat[0]
    cdef Py_ssize_t pos = start
    cdef Py_ssize_t limit = end - m
    cdef const unsigned char* found
    while pos <= limit:
        found = <const unsigned char*> memchr(buf + pos, first, limit - pos + 1)
        if found == NULL:
            break
        pos = found - buf
        if m == 1 or memcmp(found + 1, pat + 1, m - 1) == 0:
            hits.append(pos)
        pos += 1
    return hits


def find_multi(bytes data, list patterns, Py_ssize_t start=0, Py_ssize_t end=-1):
    """Find every occurrence of every pattern as sorted (offset, index) pairs."""
    hits = []
    cdef Py_ssize_t index
    for index in range(len(patterns)):
        for offset in find_all(data, patterns[index], start, end):
            hits.append((offset, index))
    hits.sort()
    return hits
