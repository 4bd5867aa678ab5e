"""Embedding matrix file formats.

Text: first line ``<n> <d>``, then one ``<node-id> <f1> ... <fd>`` line per
node, printed with enough digits to round-trip float32 exactly.  Binary: an
8-byte header of n and d as little-endian uint32, followed by the n*d values
as little-endian float32 in row-major node-id order.
"""

import numpy as np

from .errors import FormatError


def write_text(matrix: np.ndarray, path) -> None:
    matrix = np.asarray(matrix, np.float32)
    n, d = matrix.shape
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{n} {d}\n")
        for i in range(n):
            fh.write(str(i))
            for x in matrix[i]:
                fh.write(f" {x:.9g}")
            fh.write("\n")


def read_text(path) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise FormatError(f"{path}: expected '<n> <d>' header")
        n, d = int(header[0]), int(header[1])
        matrix = np.empty((n, d), np.float32)
        seen = np.zeros(n, bool)
        for lineno, line in enumerate(fh, 2):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != d + 1:
                raise FormatError(f"{path}:{lineno}: expected node id plus {d} values")
            i = int(parts[0])
            if not 0 <= i < n:
                raise FormatError(f"{path}:{lineno}: node id {i} out of range")
            matrix[i] = np.array(parts[1:], np.float32)
            seen[i] = True
    if not seen.all():
        raise FormatError(f"{path}: missing rows for {int((~seen).sum())} node(s)")
    return matrix


def write_binary(matrix: np.ndarray, path) -> None:
    matrix = np.ascontiguousarray(matrix, np.float32)
    n, d = matrix.shape
    with open(path, "wb") as fh:
        fh.write(np.array([n, d], "<u4").tobytes())
        fh.write(matrix.astype("<f4", copy=False).tobytes())


def read_binary(path) -> np.ndarray:
    with open(path, "rb") as fh:
        header = np.frombuffer(fh.read(8), "<u4")
        if len(header) != 2:
            raise FormatError(f"{path}: truncated header")
        n, d = int(header[0]), int(header[1])
        data = np.frombuffer(fh.read(), "<f4")
    if data.size != n * d:
        raise FormatError(f"{path}: expected {n * d} values, found {data.size}")
    return data.reshape(n, d).astype(np.float32)


def write(matrix: np.ndarray, path, binary: bool = False) -> None:
    (write_binary if binary else write_text)(matrix, path)


def read(path, binary: bool = False) -> np.ndarray:
    return (read_binary if binary else read_text)(path)
