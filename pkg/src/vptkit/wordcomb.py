"""Word combinatorics on finite and eventually periodic words.

Words are plain strings.  An eventually periodic infinite word ``x p p p ...``
is represented by :class:`OmegaWord`.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional


def borders(x: str) -> list[int]:
    """Failure function: ``b[i]`` is the longest proper border of ``x[:i]``."""
    b = [0] * (len(x) + 1)
    b[0] = -1
    k = -1
    for i, ch in enumerate(x):
        while k >= 0 and x[k] != ch:
            k = b[k]
        k += 1
        b[i + 1] = k
    b[0] = 0
    return b


def primitive_root(x: str) -> tuple[str, int]:
    """Return ``(root, e)`` with ``root`` primitive and ``root * e == x``."""
    if not x:
        raise ValueError("the empty word has no primitive root")
    n = len(x)
    period = n - borders(x)[n]
    if n % period == 0:
        return x[:period], n // period
    return x, 1


def is_primitive(x: str) -> bool:
    return bool(x) and primitive_root(x)[1] == 1


def in_star(x: str, z: str) -> bool:
    """``x`` is a (possibly empty) power of ``z``."""
    if not z:
        return not x
    q, r = divmod(len(x), len(z))
    return r == 0 and z * q == x


def commute(x: str, y: str) -> Optional[str]:
    """A word ``z`` with ``x, y`` both in ``z*``, or ``None`` if ``xy != yx``."""
    if x + y != y + x:
        return None
    if x:
        return primitive_root(x)[0]
    if y:
        return primitive_root(y)[0]
    return ""


def conjugacy_witness(x: str, y: str) -> Optional[tuple[str, str]]:
    """Split ``(t1, t2)`` with ``x == t1 + t2`` and ``y == t2 + t1``."""
    if len(x) != len(y):
        return None
    i = (x + x).find(y)
    if i < 0:
        return None
    return x[:i], x[i:]


def is_factor_of_power(f: str, x: str) -> bool:
    """``f`` occurs in some power of the nonempty word ``x``."""
    return f in x * (len(f) // len(x) + 2)


def overlap_roots(x: str, y: str, shared: str) -> Optional[tuple[str, str]]:
    """Witness that long common factors of powers force conjugate roots.

    When ``shared`` (a common factor of powers of ``x`` and of ``y``) is at
    least ``|x| + |y| - gcd(|x|, |y|)`` long, return the least ``(t1, t2)``
    with ``t1 t2`` primitive, ``x`` in ``(t1 t2)+`` and ``y`` in
    ``(t2 t1)+``.  Shorter overlaps carry no claim and give ``None``.
    """
    if not x or not y:
        raise ValueError("overlap_roots needs nonempty words")
    if len(shared) < len(x) + len(y) - gcd(len(x), len(y)):
        return None
    if not (is_factor_of_power(shared, x) and is_factor_of_power(shared, y)):
        raise ValueError("shared is not a common factor of powers of x and y")
    rx, ry = primitive_root(x)[0], primitive_root(y)[0]
    split = conjugacy_witness(rx, ry)
    if split is None:  # pragma: no cover - excluded by Fine and Wilf
        raise AssertionError(f"roots {rx!r}, {ry!r} of overlapping powers are not conjugate")
    return split


@dataclass(frozen=True)
class OmegaWord:
    prefix: str
    period: str

    def __post_init__(self):
        if not self.period:
            raise ValueError("period must be nonempty")

    def take(self, n: int) -> str:
        if n <= len(self.prefix):
            return self.prefix[:n]
        rest = n - len(self.prefix)
        reps = -(-rest // len(self.period))
        return self.prefix + (self.period * reps)[:rest]


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def omega_eq(a: OmegaWord, b: OmegaWord) -> bool:
    n = max(len(a.prefix), len(b.prefix)) + _lcm(len(a.period), len(b.period))
    return a.take(n) == b.take(n)


def omega_align(x: str, p: str, y: str) -> Optional[tuple[int, int]]:
    """Least ``(alpha, beta)`` with ``x p^alpha == y p^beta``.

    Returns ``None`` if ``x p^w != y p^w`` or if the length difference is not
    a multiple of ``|p|`` (possible only for imprimitive ``p``).
    """
    if not omega_eq(OmegaWord(x, p), OmegaWord(y, p)):
        return None
    diff = len(x) - len(y)
    if diff % len(p):
        return None
    if diff >= 0:
        return 0, diff // len(p)
    return -diff // len(p), 0


Parts = tuple[str, str, str, str, str]


def hk_side(parts: Parts, i: int) -> str:
    p0, p1, pm, pb1, pb0 = parts
    return p0 + p1 * i + pm + pb1 * i + pb0


def hk_equation(parts_v: Parts, parts_w: Parts, i: int) -> bool:
    """Evaluate ``v0 v1^i vm vb1^i vb0 == w0 w1^i wm wb1^i wb0``."""
    return hk_side(parts_v, i) == hk_side(parts_w, i)
