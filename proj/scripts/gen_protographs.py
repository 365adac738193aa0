#!/usr/bin/env python3
"""Regenerates the placeholder protographs in protographs/.

The shipped base matrices are synthetic: they reproduce the structural
parameters of published low-rate multi-edge-type codes (edge-type count,
rate, the dominance of degree-1 variable nodes) without copying any
published base matrix. Swap in a production protograph by writing it in the
same text format.
"""

import os

HERE = os.path.join(os.path.dirname(__file__), "..", "protographs")


def emit(name, rows, cols, cells, punctured=None, comment=None):
    """cells: dict (row, col) -> list of labels, one per parallel slot."""
    e = len({lab for labs in cells.values() for lab in labs})
    base = [[0] * cols for _ in range(rows)]
    for (r, c), labs in cells.items():
        base[r][c] = len(labs)
    assigns = []
    for (r, c) in sorted(cells):
        for s, lab in enumerate(cells[(r, c)]):
            assigns.append(f"({r},{c},{s})={lab}")
    punct = punctured or [0] * cols
    lines = []
    if comment:
        lines.append(f"# {comment}")
    lines.append(f"{rows} {cols} {e}")
    for row in base:
        lines.append(" ".join(map(str, row)))
    lines.append(" ".join(assigns))
    lines.append(" ".join(map(str, punct)))
    path = os.path.join(HERE, name)
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")
    print(f"{name}: rows={rows} cols={cols} e={e} slots={sum(len(v) for v in cells.values())}")


def banded(rows, bands):
    """rows -> label from a list of (count, label) bands."""
    out = {}
    r = 0
    for count, lab in bands:
        for _ in range(count):
            out[r] = lab
            r += 1
    assert r == rows
    return out


def r001():
    # rate 0.01, e = 11, 98/99 checks touch a degree-1 VN
    rows, cols = 99, 100
    cells = {}
    col0 = banded(rows, [(20, 1), (20, 2), (20, 3), (20, 4), (19, 5)])
    for r in range(rows):
        cells[(r, 0)] = [col0[r], col0[r]]
    col1 = banded(80, [(20, 6), (20, 7), (20, 8), (20, 9)])
    for r in range(80):
        cells[(r, 1)] = [col1[r], col1[r]]
    for r in range(80, 99):
        cells[(r, 1)] = [10]
    for i in range(98):  # leaves
        cells[(i, 2 + i)] = [11]
    emit("met_r001_e11.txt", rows, cols, cells,
         comment="synthetic rate-0.01 MET protograph, 11 edge types")


def r01():
    # rate 0.1, e = 8
    rows, cols = 18, 20
    cells = {}
    for col, bands in [(0, [(9, 1), (9, 2)]), (1, [(9, 3), (9, 4)]),
                       (2, [(9, 5), (9, 6)])]:
        lab = banded(rows, bands)
        for r in range(rows):
            cells[(r, col)] = [lab[r]]
    for r in range(rows):
        cells[(r, 3)] = [7]
    for i in range(16):  # leaves
        cells[(i, 4 + i)] = [8]
    emit("met_r01_e8.txt", rows, cols, cells,
         comment="synthetic rate-0.1 MET protograph, 8 edge types")


def r002_desk():
    # rate 0.02 desk-scale code, e = 6
    rows, cols = 49, 50
    cells = {}
    col0 = banded(rows, [(25, 1), (24, 2)])
    for r in range(rows):
        cells[(r, 0)] = [col0[r], col0[r]]
    col1 = banded(40, [(20, 3), (20, 4)])
    for r in range(40):
        cells[(r, 1)] = [col1[r], col1[r]]
    for r in range(40, 49):
        cells[(r, 1)] = [5]
    for i in range(48):  # leaves
        cells[(i, 2 + i)] = [6]
    emit("met_r002_desk.txt", rows, cols, cells,
         comment="synthetic rate-0.02 MET protograph for desk-scale runs")


def toy():
    # tiny demo matching the documented format
    cells = {(0, 0): [1], (0, 1): [2], (0, 2): [3], (1, 1): [4], (1, 2): [5, 5]}
    emit("toy_2x3_e5.txt", 2, 3, cells, comment="toy protograph, 5 edge types")


if __name__ == "__main__":
    os.makedirs(HERE, exist_ok=True)
    r001()
    r01()
    r002_desk()
    toy()
