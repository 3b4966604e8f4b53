"""Input validation helpers used across the public API."""

import math
import numbers

import numpy as np

from .exceptions import DomainError


def check_count(value, name, *, minimum=0, error=DomainError):
    """Return ``value`` as a Python int, rejecting non-integers and values below ``minimum``."""
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        if isinstance(value, numbers.Real) and float(value).is_integer():
            value = int(value)
        else:
            raise error(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if value < minimum:
        raise error(f"{name} must be >= {minimum}, got {value}")
    return value


def check_real(value, name, *, minimum=None, strict=False, error=DomainError):
    """Return ``value`` as a finite float, optionally bounded below."""
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise error(f"{name} must be a real number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise error(f"{name} must be finite, got {value}")
    if minimum is not None:
        if strict and value <= minimum:
            raise error(f"{name} must be > {minimum}, got {value}")
        if not strict and value < minimum:
            raise error(f"{name} must be >= {minimum}, got {value}")
    return value


def check_probability(value, name, *, error=DomainError):
    value = check_real(value, name, minimum=0.0, error=error)
    if value > 1.0:
        raise error(f"{name} must be <= 1, got {value}")
    return value


def check_square_matrix(matrix, name="matrix", *, error=DomainError):
    arr = np.asarray(matrix, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise error(f"{name} must be a non-empty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise error(f"{name} contains non-finite entries")
    return arr


def check_vector(vector, n, name="vector", *, error=DomainError):
    arr = np.asarray(vector, dtype=float)
    if arr.ndim != 1 or arr.shape[0] != n:
        raise error(f"{name} must have length {n}, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise error(f"{name} contains non-finite entries")
    if np.any(arr < 0):
        raise error(f"{name} entries must be nonnegative")
    return arr
