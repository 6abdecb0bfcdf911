"""
Validation
Parsing and checking of command-line values before any work starts
"""

import re
from typing import Tuple

from services.cayley_service import CayleyError, CayleySpec, FamilyKind

GENERATORS_PATTERN = re.compile(r'^\s*\d+(\s*,\s*\d+)*\s*$')


class ValidationError(Exception):
    """Command-line value failed validation"""
    pass


def parse_generators(text: str) -> Tuple[int, ...]:
    """Parse a comma-separated generator list such as '1,5,6'."""
    if not text or not GENERATORS_PATTERN.match(text):
        raise ValidationError(f"Generators must be comma-separated positive integers, got {text!r}")
    gens = tuple(int(x) for x in text.split(','))
    if len(set(gens)) != len(gens):
        raise ValidationError(f"Generators must be distinct, got {text!r}")
    return tuple(sorted(gens))


def validate_cayley_spec(n: int, gens: Tuple[int, ...]) -> CayleySpec:
    if any(not 1 <= g <= n // 2 for g in gens):
        raise ValidationError(f"Generators must lie in 1..{n // 2}, got {','.join(map(str, gens))}")
    try:
        return CayleySpec(n, gens)
    except CayleyError as e:
        raise ValidationError(str(e))


def validate_search_order(n: int, r: int, max_order: int):
    if r < 3:
        raise ValidationError(f"r must be at least 3, got {r}")
    if n < r:
        raise ValidationError(f"n must be at least r, got n = {n}, r = {r}")
    if n > max_order:
        raise ValidationError(f"n must be at most {max_order}, got {n}")


def validate_range(start: int, stop: int, label: str = 'range') -> range:
    """Inclusive range start..stop."""
    if start < 1 or stop < start:
        raise ValidationError(f"Invalid {label} {start}..{stop}")
    return range(start, stop + 1)


def parse_family_kind(text: str) -> FamilyKind:
    try:
        return FamilyKind(text.strip().lower())
    except ValueError:
        raise ValidationError(f"Family kind must be 'two' or 'three', got {text!r}")
