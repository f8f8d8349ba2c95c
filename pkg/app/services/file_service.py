#!/usr/bin/env python
# -*- coding: utf-8 -*-

import os
import json
import logging
import warnings
from typing import Any, Dict, List, Optional, Union

import numpy as np
import numpy.typing as npt

from app.middleware.exception import DimensionMismatchError, InvalidSpecError, exception_message
from app.middleware.logger import setup_logger
from app.services.linalg import SensingMatrix
from app.services.signals import SparseSignal

# Initialize logging
setup_logger()

# Round-trip precision for float64
FLOAT_FORMAT = "%.17g"


def ensure_directory_exists(directory_path: str) -> None:
    """
    Ensure a directory exists, creating it if necessary

    Args:
        directory_path: Path to the directory
    """
    if not directory_path:
        return
    try:
        os.makedirs(directory_path, exist_ok=True)
        logging.debug(f"[file_service] Ensured directory exists: {directory_path}")
    except Exception as e:
        error_msg = f"Failed to create directory {directory_path}: {exception_message(e)}"
        logging.error(f"[file_service] {error_msg}")
        raise IOError(error_msg)


def write_text(path: str, content: str) -> str:
    """
    Write text to disk, creating parent directories

    Returns:
        The path written

    Raises:
        IOError: If writing fails
    """
    try:
        ensure_directory_exists(os.path.dirname(path))
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(content)
        logging.info(f"[file_service] Wrote {path}")
        return path
    except Exception as e:
        error_msg = f"Error writing {path}: {exception_message(e)}"
        logging.error(f"[file_service] {error_msg}")
        raise IOError(error_msg)


def _check_exists(path: str) -> None:
    if not os.path.exists(path):
        error_msg = f"File not found: {path}"
        logging.error(f"[file_service] {error_msg}")
        raise IOError(error_msg)


def _loadtxt(path: str, **kwargs) -> np.ndarray:
    """Comma-separated numeric table; malformed content raises InvalidSpecError"""
    _check_exists(path)
    try:
        with warnings.catch_warnings():
            # empty tables are caught by the callers' shape checks
            warnings.simplefilter("ignore", UserWarning)
            return np.loadtxt(path, delimiter=",", **kwargs)
    except ValueError as e:
        raise InvalidSpecError(f"{path}: {e}")


def _read_header(path: str, names: str) -> List[int]:
    header = _loadtxt(path, max_rows=1, ndmin=1)
    if header.size != len(names.split(",")) or not np.array_equal(header, np.round(header)):
        raise InvalidSpecError(f"{path}: expected a '{names}' header line")
    return [int(v) for v in header]


def _savetxt(path: str, rows: np.ndarray, header: str, fmt: Union[str, List[str]]) -> str:
    try:
        ensure_directory_exists(os.path.dirname(path))
        np.savetxt(path, rows, fmt=fmt, delimiter=",", header=header, comments="")
        logging.info(f"[file_service] Wrote {path}")
        return path
    except Exception as e:
        error_msg = f"Error writing {path}: {exception_message(e)}"
        logging.error(f"[file_service] {error_msg}")
        raise IOError(error_msg)


def save_matrix(A: Union[SensingMatrix, np.ndarray], path: str) -> str:
    """'m,n' header then one comma-separated row per line"""
    entries = A.entries if isinstance(A, SensingMatrix) else np.asarray(A, dtype=float)
    return _savetxt(path, entries, f"{entries.shape[0]},{entries.shape[1]}", FLOAT_FORMAT)


def load_matrix(path: str, normalize: bool = False) -> SensingMatrix:
    """
    Load a matrix CSV

    Args:
        path: File in the 'm,n' header format
        normalize: Rescale columns to unit norm instead of rejecting them

    Returns:
        SensingMatrix

    Raises:
        InvalidSpecError: If the header or the row shapes are malformed
        IOError: If the file cannot be read
    """
    m, n = _read_header(path, "m,n")
    entries = _loadtxt(path, skiprows=1, ndmin=2)
    if entries.shape != (m, n):
        raise InvalidSpecError(f"{path}: header declares {m}x{n}, found {entries.shape[0]}x{entries.shape[1]}")

    logging.info(f"[file_service] Matrix loaded: {path} ({m}x{n})")
    return SensingMatrix.from_raw(entries) if normalize else SensingMatrix(entries)


def save_signal(x: SparseSignal, path: str) -> str:
    """'n,K' header then one 'index,value' line per nonzero"""
    rows = np.column_stack([x.support, x.values])
    return _savetxt(path, rows, f"{x.n},{x.K}", ["%d", FLOAT_FORMAT])


def load_signal(path: str) -> SparseSignal:
    """
    Load a signal CSV

    Raises:
        InvalidSpecError: If the header or the entries are malformed
        IOError: If the file cannot be read
    """
    n, K = _read_header(path, "n,K")
    entries = _loadtxt(path, skiprows=1, ndmin=2)
    if K == 0 and entries.size == 0:
        entries = entries.reshape(0, 2)
    if entries.shape != (K, 2):
        raise InvalidSpecError(f"{path}: header declares {K} 'index,value' lines, found shape {entries.shape}")
    indices = entries[:, 0]
    if not np.array_equal(indices, np.round(indices)):
        raise InvalidSpecError(f"{path}: indices must be integers")

    logging.info(f"[file_service] Signal loaded: {path} (n={n}, K={K})")
    return SparseSignal(n=n, support=indices.astype(np.intp), values=entries[:, 1])


def save_vector(v: npt.ArrayLike, path: str) -> str:
    """Length header then one value per line"""
    v = np.ravel(np.asarray(v, dtype=float))
    return _savetxt(path, v, str(v.size), FLOAT_FORMAT)


def load_vector(path: str, length: Optional[int] = None) -> np.ndarray:
    """
    Load a measurement vector written by save_vector

    Raises:
        DimensionMismatchError: If ``length`` is given and differs
    """
    (size,) = _read_header(path, "m")
    v = _loadtxt(path, skiprows=1, ndmin=1)
    if v.ndim != 1 or v.size != size:
        raise InvalidSpecError(f"{path}: header declares {size} values, found shape {v.shape}")
    if length is not None and v.size != length:
        raise DimensionMismatchError(f"{path}: vector has length {v.size}, expected {length}")
    return v


def save_json(data: Any, path: str) -> str:
    """
    Save a JSON result document

    Raises:
        IOError: If saving fails
    """
    return write_text(path, json.dumps(data, indent=2) + "\n")


def load_json(path: str) -> Dict[str, Any]:
    """
    Load a JSON document from disk

    Raises:
        IOError: If loading fails
    """
    try:
        if not os.path.exists(path):
            raise FileNotFoundError(f"File not found: {path}")

        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)

        logging.info(f"[file_service] JSON loaded: {path}")
        return data

    except Exception as e:
        error_msg = f"Error loading {path}: {exception_message(e)}"
        logging.error(f"[file_service] {error_msg}")
        raise IOError(error_msg)
