# cython: language_level=3
"""Compiled twin of nearfeas._kernels_py.

The arithmetic stays on exact Python-level rationals (mpq or Fraction); the
win comes from compiled loop control and list indexing, which dominate the
interpreter cost of the pure version.
"""


def pivot_update(list rows, Py_ssize_t pr, Py_ssize_t pc):
    cdef list prow = <list>rows[pr]
    cdef Py_ssize_t n = len(prow)
    cdef Py_ssize_t i, j, nrows
    cdef list row
    piv = prow[pc]
    if piv != 1:
        for j in range(n):
            if prow[j]:
                prow[j] = prow[j] / piv
    nrows = len(rows)
    for i in range(nrows):
        if i == pr:
            continue
        row = <list>rows[i]
        f = row[pc]
        if f:
            for j in range(n):
                pj = prow[j]
                if pj:
                    row[j] = row[j] - f * pj
    prow[pc] = piv / piv


def bareiss_rank(list m):
    cdef Py_ssize_t nrows = len(m)
    cdef Py_ssize_t ncols = len(<list>m[0]) if nrows else 0
    cdef Py_ssize_t rank = 0
    cdef Py_ssize_t row = 0
    cdef Py_ssize_t col, i, j, piv
    cdef list rr, ri
    prev = 1
    for col in range(ncols):
        piv = -1
        for i in range(row, nrows):
            if (<list>m[i])[col] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != row:
            m[row], m[piv] = m[piv], m[row]
        rr = <list>m[row]
        p = rr[col]
        for i in range(row + 1, nrows):
            ri = <list>m[i]
            f = ri[col]
            if f:
                for j in range(col + 1, ncols):
                    ri[j] = (p * ri[j] - f * rr[j]) // prev
                ri[col] = 0
            elif prev != 1 or p != 1:
                for j in range(col + 1, ncols):
                    ri[j] = (p * ri[j]) // prev
        prev = p
        row += 1
        rank += 1
        if row == nrows:
            break
    return rank


def dot(a, b, zero):
    cdef Py_ssize_t i, n = len(a)
    acc = zero
    for i in range(n):
        ai = a[i]
        if ai:
            bi = b[i]
            if bi:
                acc = acc + ai * bi
    return acc


def vec_axpy(list out, c, col):
    cdef Py_ssize_t i, n = len(out)
    if not c:
        return
    for i in range(n):
        ci = col[i]
        if ci:
            out[i] = out[i] + c * ci
