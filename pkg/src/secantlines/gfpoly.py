"""Dense trivariate forms over a prime field, with deterministic seeded sampling.

Coefficient vectors are indexed by the graded-lex order on monomials of fixed
degree in x0, x1, x2. All arithmetic is exact modular arithmetic on Python ints;
the prime defaults to 1,000,003 and is capped below 2**31 so downstream int64
matrix elimination can never overflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterator, Sequence

DEFAULT_PRIME = 1_000_003
MAX_MODULUS = 2**31 - 1
# Generous cap for product degrees; every computation in this package stays far
# below it, and unbounded degrees would only produce uselessly huge dense vectors.
MAX_PRODUCT_DEGREE = 64

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    # SplitMix64 finalizer
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


class SeedStream:
    """SplitMix64 stream: the same seed always yields the same 64-bit sequence."""

    __slots__ = ("state",)

    def __init__(self, seed: int) -> None:
        self.state = seed & _MASK64

    def next_uint64(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK64
        return _mix64(self.state)

    def field_element(self, modulus: int) -> int:
        """Uniform element of [0, modulus) via rejection sampling (no modulo bias)."""
        limit = (1 << 64) - ((1 << 64) % modulus)
        while True:
            value = self.next_uint64()
            if value < limit:
                return value % modulus


def derive_seed(seed: int, *tags: int) -> int:
    """Stable child seed for a tagged substream (factor index, trial index, ...).

    Folding distinct tag tuples into the same parent seed yields statistically
    independent streams; the derivation is pure 64-bit mixing, so it is
    reproducible across platforms and sessions.
    """
    state = seed & _MASK64
    for tag in tags:
        state = _mix64((state + _GOLDEN * (tag + 1)) & _MASK64)
    return state


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every n < 3.3e24."""
    if n < 2:
        return False
    for small in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % small == 0:
            return n == small
    d, two_exp = n - 1, 0
    while d % 2 == 0:
        d //= 2
        two_exp += 1
    for base in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(base, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(two_exp - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeField:
    """Prime field GF(modulus); elements are ints in [0, modulus)."""

    modulus: int = DEFAULT_PRIME

    def __post_init__(self) -> None:
        if not 2 <= self.modulus <= MAX_MODULUS:
            raise ValueError(
                f"modulus must be in [2, {MAX_MODULUS}], got {self.modulus}"
            )
        if not is_prime(self.modulus):
            raise ValueError(f"modulus {self.modulus} is not prime")

    def inverse(self, a: int) -> int:
        a %= self.modulus
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return pow(a, self.modulus - 2, self.modulus)


def num_monomials(degree: int) -> int:
    """Number of degree-d monomials in three variables: C(d+2, 2)."""
    return comb(degree + 2, 2)


class MonomialIndex:
    """Bijection between exponent triples (a, b, c) with a + b + c = degree and
    positions [0, C(degree+2,2)), in graded-lex order: a descending, then b
    descending (so x0^d is position 0 and x2^d is the last)."""

    __slots__ = ("degree", "_exponents")

    def __init__(self, degree: int) -> None:
        if degree < 0:
            raise ValueError(f"degree must be >= 0, got {degree}")
        self.degree = degree
        self._exponents = tuple(
            (a, b, degree - a - b)
            for a in range(degree, -1, -1)
            for b in range(degree - a, -1, -1)
        )

    def __len__(self) -> int:
        return len(self._exponents)

    def __iter__(self) -> Iterator[tuple[int, int, int]]:
        return iter(self._exponents)

    def exponents(self, i: int) -> tuple[int, int, int]:
        return self._exponents[i]

    def index(self, a: int, b: int, c: int) -> int:
        if a < 0 or b < 0 or c < 0 or a + b + c != self.degree:
            raise ValueError(f"({a},{b},{c}) is not a degree-{self.degree} exponent")
        # All monomials with a larger x0-exponent come first; within fixed a the
        # offset is c. Closed form: C(degree - a + 1, 2) + c.
        t = self.degree - a
        return t * (t + 1) // 2 + c


@lru_cache(maxsize=None)
def monomial_index(degree: int) -> MonomialIndex:
    return MonomialIndex(degree)


@dataclass(frozen=True)
class Form:
    """Dense homogeneous polynomial of fixed degree in x0, x1, x2 over a prime field.

    coeffs[i] is the coefficient of the i-th monomial in MonomialIndex(degree)
    order; the all-zero vector is a valid form at every degree.
    """

    field: PrimeField
    degree: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.degree < 0:
            raise ValueError(f"degree must be >= 0, got {self.degree}")
        expected = num_monomials(self.degree)
        if len(self.coeffs) != expected:
            raise ValueError(
                f"degree {self.degree} needs {expected} coefficients, got {len(self.coeffs)}"
            )
        p = self.field.modulus
        if not isinstance(self.coeffs, tuple) or any(
            c < 0 or c >= p for c in self.coeffs
        ):
            object.__setattr__(self, "coeffs", tuple(c % p for c in self.coeffs))

    @classmethod
    def zero(cls, field: PrimeField, degree: int) -> "Form":
        return cls(field, degree, (0,) * num_monomials(degree))

    @classmethod
    def one(cls, field: PrimeField) -> "Form":
        return cls(field, 0, (1,))

    @classmethod
    def monomial(cls, field: PrimeField, a: int, b: int, c: int, coeff: int = 1) -> "Form":
        degree = a + b + c
        coeffs = [0] * num_monomials(degree)
        coeffs[monomial_index(degree).index(a, b, c)] = coeff % field.modulus
        return cls(field, degree, tuple(coeffs))

    def coefficient(self, a: int, b: int, c: int) -> int:
        return self.coeffs[monomial_index(self.degree).index(a, b, c)]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __mul__(self, other: "Form") -> "Form":
        return multiply(self, other)


def random_form(field: PrimeField, degree: int, seed: int) -> Form:
    """Form with every coefficient drawn independently and uniformly from the field.

    Deterministic: the same (modulus, degree, seed) always produces the same form.
    """
    if degree < 1:
        raise ValueError(f"random forms need degree >= 1, got {degree}")
    stream = SeedStream(seed)
    return Form(
        field,
        degree,
        tuple(stream.field_element(field.modulus) for _ in range(num_monomials(degree))),
    )


def multiply(f: Form, g: Form) -> Form:
    """Exact product by schoolbook convolution on the dense coefficient vectors."""
    if f.field != g.field:
        raise ValueError("cannot multiply forms over different fields")
    degree = f.degree + g.degree
    if degree > MAX_PRODUCT_DEGREE:
        raise OverflowError(
            f"product degree {degree} exceeds the configured cap {MAX_PRODUCT_DEGREE}"
        )
    p = f.field.modulus
    out = [0] * num_monomials(degree)
    f_exponents = monomial_index(f.degree)._exponents
    g_exponents = monomial_index(g.degree)._exponents
    for i, ci in enumerate(f.coeffs):
        if not ci:
            continue
        a1, _, c1 = f_exponents[i]
        for j, cj in enumerate(g.coeffs):
            if not cj:
                continue
            a2, _, c2 = g_exponents[j]
            t = degree - a1 - a2
            k = t * (t + 1) // 2 + c1 + c2
            out[k] = (out[k] + ci * cj) % p
    return Form(f.field, degree, tuple(out))


def cofactor_products(factors: Sequence[Form]) -> list[Form]:
    """For factors F1..Fr return the r products each omitting one factor.

    Output i is prod_{j != i} Fj, of degree d - d_i. Built from prefix and
    suffix products, so only O(r) full multiplications are performed.
    """
    r = len(factors)
    if r < 2:
        raise ValueError(f"need at least two factors, got {r}")
    field = factors[0].field
    if any(f.field != field for f in factors):
        raise ValueError("all factors must live over the same field")
    one = Form.one(field)
    prefix = [one]  # prefix[i] = F1 * ... * Fi
    for f in factors[:-1]:
        prefix.append(multiply(prefix[-1], f))
    suffix = [one]  # after reversal, suffix[i] = F_{i+2} * ... * Fr
    for f in reversed(factors[1:]):
        suffix.append(multiply(f, suffix[-1]))
    suffix.reverse()
    return [multiply(prefix[i], suffix[i]) for i in range(r)]


def monomial_multiples(f: Form, target_degree: int) -> list[Form]:
    """All products m * f for m a monomial of degree target_degree - f.degree.

    Returned in graded-lex order of m; empty when the target degree is below the
    degree of f (such a generator contributes nothing to that graded piece).
    """
    if target_degree < f.degree:
        return []
    src = monomial_index(f.degree)._exponents
    n_out = num_monomials(target_degree)
    out = []
    for ma, _, mc in monomial_index(target_degree - f.degree):
        row = [0] * n_out
        for i, coeff in enumerate(f.coeffs):
            if coeff:
                a, _, c = src[i]
                t = target_degree - a - ma
                row[t * (t + 1) // 2 + c + mc] = coeff
        out.append(Form(f.field, target_degree, tuple(row)))
    return out
