"""Built-in monoid instances: rational integers and quadratic fields.

The rational-integer instance has the primes as atoms.  A quadratic field
Q(sqrt(d)) has the prime ideals of its maximal order as atoms, produced by
splitting each rational prime p according to the Kronecker symbol of the
field discriminant: +1 gives two ideals of norm p, -1 one ideal of norm
p**2, and 0 (p ramified) one ideal of norm p.

The module also carries the invariants feeding the residue of the zeta
function at s = 1: class numbers of imaginary fields by counting reduced
binary quadratic forms, regulators of real fields from the fundamental
unit, and the round trip that recovers the class number from ideal counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import numpy as np

from .monoid import ZERO, DensityMeta, Element, MonoidInstance


class InconclusiveEstimateError(ValueError):
    """A numeric estimate did not land close enough to an integer."""


@dataclass(frozen=True)
class QuadraticFieldDescriptor:
    d: int                      # squarefree, not 0 or 1
    discriminant: int           # d if d = 1 mod 4, else 4d
    signature: tuple[int, int]  # (r1, r2)

    @property
    def degree(self) -> int:
        return 2


@dataclass(frozen=True)
class FieldInvariants:
    """Inputs of the residue formula 2**r1 * (2*pi)**r2 * R * h / (W * sqrt(D))."""

    r1: int
    r2: int
    regulator: float
    h: int | None               # None until estimated, for real quadratic fields
    roots_of_unity: int
    abs_disc: int

    def __post_init__(self):
        if self.roots_of_unity not in (2, 4, 6):
            raise ValueError(f"bad root-of-unity count {self.roots_of_unity}")
        if self.h is not None and self.h < 1:
            raise ValueError(f"class number must be >= 1, got {self.h}")
        if not self.regulator > 0:
            raise ValueError("regulator must be positive")


@dataclass(frozen=True)
class SplittingRecord:
    p: int
    kind: str                           # "split" | "inert" | "ramified"
    atoms: tuple[tuple[int, str], ...]  # (norm, label)


def sieve_primes(n: int) -> list[int]:
    """Primes <= n, ascending."""
    if n < 2:
        return []
    mask = np.ones(n + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, isqrt(n) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.flatnonzero(mask).tolist()


def rational_integers() -> MonoidInstance:
    """The positive integers under multiplication; atoms are the primes."""

    def source(lo, hi):
        for p in sieve_primes(hi):
            if p > lo:
                yield (p, f"p{p}")

    return MonoidInstance("Z", source, DensityMeta(c=1.0, alpha=0.0), parse_int=True)


def factor_integer(inst: MonoidInstance, n: int) -> Element:
    """Element of the rational-integer instance with norm n (n >= 1)."""
    if not inst.parses_integers:
        raise ValueError("integer factorization needs the rational-integer instance")
    n = int(n)
    if n < 1:
        raise ValueError(f"positive integer required, got {n}")
    if n == 1:
        return ZERO
    inst.extend(isqrt(n) + 1)
    exps: dict[int, int] = {}
    rem = n
    for atom in inst.atoms:
        q = atom.norm
        if q * q > rem:
            break
        while rem % q == 0:
            exps[atom.id] = exps.get(atom.id, 0) + 1
            rem //= q
    if rem > 1:
        inst.extend(rem)
        atom = inst.atom_by_label(f"p{rem}")
        exps[atom.id] = exps.get(atom.id, 0) + 1
    return Element.of(exps)


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n), total over all integer pairs."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    sign = 1
    if n < 0:
        n = -n
        if a < 0:
            sign = -1
    twos = 0
    while n % 2 == 0:
        n //= 2
        twos += 1
    if twos:
        if a % 2 == 0:
            return 0
        if twos % 2 and a % 8 in (3, 5):
            sign = -sign
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                sign = -sign
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            sign = -sign
        a %= n
    return sign if n == 1 else 0


def split_prime(disc: int, p: int) -> SplittingRecord:
    """Behavior of the rational prime p in the field of discriminant disc."""
    s = kronecker(disc, p)
    if s == 0:
        return SplittingRecord(p, "ramified", ((p, f"p{p}r"),))
    if s == 1:
        return SplittingRecord(p, "split", ((p, f"p{p}a"), (p, f"p{p}b")))
    return SplittingRecord(p, "inert", ((p * p, f"p{p}"),))


def _is_squarefree(n: int) -> bool:
    if n % 4 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % (f * f) == 0:
            return False
        f += 2
    return True


def quadratic_field(d: int) -> MonoidInstance:
    """Ideal monoid of the maximal order of Q(sqrt(d)), d squarefree."""
    d = int(d)
    if d in (0, 1):
        raise ValueError("d must not be 0 or 1")
    if not _is_squarefree(abs(d)):
        raise ValueError(f"d must be squarefree, got {d}")
    disc = d if d % 4 == 1 else 4 * d
    desc = QuadraticFieldDescriptor(d, disc, (2, 0) if d > 0 else (0, 2))

    def source(lo, hi):
        for p in sieve_primes(hi):
            for norm, label in split_prime(disc, p).atoms:
                if lo < norm <= hi:
                    yield (norm, label)

    if d < 0:
        roots = 6 if disc == -3 else 4 if disc == -4 else 2
        inv = FieldInvariants(0, 1, 1.0, class_number_imaginary(disc), roots, -disc)
        c = residue_constant(inv)
    else:
        inv = FieldInvariants(2, 0, regulator_real(disc), None, 2, disc)
        c = None  # requires the class number, which we only estimate

    inst = MonoidInstance(f"Q(sqrt({d}))", source, DensityMeta(c=c, alpha=0.5))
    inst.invariants = inv
    inst.descriptor = desc
    return inst


def class_number_imaginary(disc: int) -> int:
    """Class number of an imaginary quadratic field by counting reduced forms.

    Counts (a, b, c) with b*b - 4*a*c = disc, |b| <= a <= c, and b >= 0
    whenever |b| = a or a = c.
    """
    if disc >= 0 or disc % 4 not in (0, 1):
        raise ValueError(f"need a negative discriminant = 0 or 1 mod 4, got {disc}")
    h = 0
    a = 1
    while 3 * a * a <= -disc:
        for b in range(-a, a + 1):
            if (b - disc) % 2:
                continue
            num = b * b - disc
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if b < 0 and (-b == a or a == c):
                continue
            h += 1
        a += 1
    return h


def _icbrt(n: int) -> int:
    """Floor of the cube root, exact for big integers."""
    if n < 2:
        return n
    x = 1 << ((n.bit_length() + 2) // 3)
    while True:
        y = (2 * x + n // (x * x)) // 3
        if y >= x:
            return x
        x = y


def fundamental_unit(d: int) -> tuple[int, int, int, int]:
    """Fundamental unit (u + v*sqrt(d)) / denom of the maximal order, d > 1
    squarefree.

    Returns (u, v, denom, eta) with u*u - d*v*v == eta * denom**2 and
    eta in {1, -1}.  The continued fraction of sqrt(d) yields the smallest
    (p, q) with p*p - d*q*q = +-1; for d = 1 mod 4 a unit half that size may
    exist, in which case (p, q) is its cube and u solves u**3 - 3*eta*u = 2*p.
    """
    if d <= 1:
        raise ValueError("d must be > 1")
    a0 = isqrt(d)
    if a0 * a0 == d:
        raise ValueError("d must not be a square")
    P, Q, a = 0, 1, a0
    p_prev, p = 1, a0
    q_prev, q = 0, 1
    while True:
        t = p * p - d * q * q
        if t in (1, -1):
            break
        P = a * Q - P
        Q = (d - P * P) // Q
        a = (a0 + P) // Q
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
    if d % 4 == 1:
        eta = t  # eta**3 == t for eta in {1, -1}
        u0 = _icbrt(2 * p)
        for u in range(max(1, u0 - 2), u0 + 3):
            if u**3 - 3 * eta * u != 2 * p:
                continue
            vv, r = divmod(u * u - 4 * eta, d)
            if r == 0 and vv > 0:
                v = isqrt(vv)
                if v * v == vv and (u - v) % 2 == 0:
                    return (u, v, 2, eta)
    return (p, q, 1, t)


def _log_surd(u: int, v: int, d: int, denom: int) -> float:
    # log((u + v*sqrt(d)) / denom), robust when u and v overflow float range
    return math.log(v) + math.log(float(Fraction(u, v)) + math.sqrt(d)) - math.log(denom)


def regulator_real(disc: int) -> float:
    """Regulator log(epsilon) of the real quadratic field of discriminant disc."""
    if disc <= 0:
        raise ValueError("need a positive discriminant")
    d = disc if disc % 4 == 1 else disc // 4
    u, v, denom, _ = fundamental_unit(d)
    return _log_surd(u, v, d, denom)


def residue_constant(inv: FieldInvariants) -> float:
    """Residue of the field zeta function at s = 1 from the invariants."""
    if inv.h is None:
        raise ValueError("class number not populated")
    return (
        2**inv.r1
        * (2 * math.pi) ** inv.r2
        * inv.regulator
        * inv.h
        / (inv.roots_of_unity * math.sqrt(inv.abs_disc))
    )


def class_number_from_counting(inst: MonoidInstance, x) -> tuple[float, int]:
    """Estimate the class number by inverting the residue formula against
    count_up_to(x)/x.  Returns (estimate, rounded); raises
    InconclusiveEstimateError when the estimate is not within 0.4 of a
    positive integer.
    """
    inv = inst.invariants
    if inv is None:
        raise ValueError(f"{inst.name} carries no field invariants")
    ratio = inst.count_up_to(x) / float(x)
    est = (
        ratio
        * inv.roots_of_unity
        * math.sqrt(inv.abs_disc)
        / (2**inv.r1 * (2 * math.pi) ** inv.r2 * inv.regulator)
    )
    h = round(est)
    if h < 1 or abs(est - h) > 0.4:
        raise InconclusiveEstimateError(
            f"class-number estimate {est:.4f} is not near a positive integer"
        )
    return est, h
