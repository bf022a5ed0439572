"""Deployment sizing: subscribed users from concurrent capacity."""

from __future__ import annotations

from fractions import Fraction


def size_deployment(n: int, r: str | float | Fraction) -> int:
    """Subscribed-user capacity M = N / R, floored to whole users.

    N is the measured concurrent capacity, R the fraction of subscribers
    online at once. R is parsed exactly (pass "0.2" or Fraction(1, 5));
    a float is converted via its decimal literal so 0.2 means exactly 1/5.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if isinstance(r, Fraction):
        ratio = r
    elif isinstance(r, str):
        ratio = Fraction(r)
    else:
        ratio = Fraction(str(r))
    if not 0 < ratio <= 1:
        raise ValueError(f"r must be in (0, 1], got {ratio}")
    return int(Fraction(n) / ratio)
