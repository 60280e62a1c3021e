"""Small helpers around exact rationals.

All geometry in this package is done with ``fractions.Fraction``; floats only
appear when a logarithm is finally taken for a dimension estimate.
"""

from fractions import Fraction
import math

Frac = Fraction

ZERO = Frac(0)
ONE = Frac(1)

# Fraction construction bypass: building via __new__ plus direct slot writes
# skips the constructor's type dispatch, which dominates in hot loops.  The
# slot names are stable CPython internals; fall back gracefully if absent.
try:  # pragma: no cover - environment probe
    _probe = Fraction.__new__(Fraction)
    _probe._numerator = 1
    _probe._denominator = 1
    _HAVE_SLOT_ACCESS = True
except AttributeError:  # pragma: no cover
    _HAVE_SLOT_ACCESS = False


if _HAVE_SLOT_ACCESS:

    def fast_frac(n: int, d: int) -> Frac:
        """Fraction(n, d) for ints with d > 0, with cheap construction."""
        g = math.gcd(n, d)
        if g > 1:
            n //= g
            d //= g
        f = Fraction.__new__(Fraction)
        f._numerator = n
        f._denominator = d
        return f

else:  # pragma: no cover

    def fast_frac(n: int, d: int) -> Frac:
        return Fraction(n, d)


def frac(value) -> Frac:
    """Coerce ints, Fractions and 'num/den' strings to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Frac(value)
    if isinstance(value, str):
        return Frac(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def frac_str(value: Frac) -> str:
    """Render a Fraction as 'num/den' ('num' when integral)."""
    value = Frac(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def flog(value: Frac) -> float:
    """log of a positive rational, numerator/denominator split so huge values
    never overflow the int->float conversion."""
    if value <= 0:
        raise ValueError("flog needs a positive rational")
    return math.log(value.numerator) - math.log(value.denominator)


def frac_repr(value: Frac) -> str:
    """Readable form: exact num/den when small, a base-10 magnitude tag when
    the exact digits would be unreasonably long."""
    if value == 0:
        return "0"
    if value.numerator.bit_length() <= 256 and value.denominator.bit_length() <= 256:
        return frac_str(value)
    l10 = (math.log10(abs(value.numerator)) - math.log10(value.denominator))
    sign = "-" if value < 0 else ""
    return f"{sign}~10^{l10:.3f}"


def approx_pow(base: Frac, exponent: Frac, max_den: int = 10**9) -> Frac:
    """Best rational stand-in for base**exponent.

    Exact when the exponent is integral or when base has an exact rational
    root of the required order; otherwise the integer part of the power is
    taken exactly and the fractional remainder is approximated by a
    continued fraction with denominator capped at ``max_den``.  Always
    positive, never underflows.  Deterministic.
    """
    base = Frac(base)
    exponent = Frac(exponent)
    if base <= 0:
        raise ValueError("base must be positive")
    if exponent.denominator == 1:
        return base ** exponent.numerator
    root = _exact_root(base, exponent.denominator)
    if root is not None:
        return root ** exponent.numerator
    whole = exponent.numerator // exponent.denominator
    rest = exponent - whole  # in [0, 1)
    frac_value = math.exp(flog(base) * float(rest))
    approx = Frac(frac_value).limit_denominator(max_den)
    if approx <= 0:  # pragma: no cover - rest in [0,1) keeps this positive
        approx = Frac(1, max_den)
    return base**whole * approx


def _exact_root(value: Frac, order: int):
    num = _iroot(value.numerator, order)
    den = _iroot(value.denominator, order)
    if num is None or den is None:
        return None
    return Frac(num, den)


def _iroot(n: int, k: int):
    if n < 0:
        return None
    r = round(n ** (1.0 / k))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**k == n:
            return cand
    return None
