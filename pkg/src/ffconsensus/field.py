"""Prime field context and scalar arithmetic."""

from dataclasses import dataclass

from .errors import NoInverse, NotPrime


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The prime field GF(p)."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise NotPrime(f"modulus {self.p!r} is not prime")

    def reduce(self, a: int) -> int:
        return a % self.p

    def inv(self, a: int) -> int:
        return field_inv(a, self)

    def elements(self) -> range:
        return range(self.p)

    def __repr__(self):
        return f"GF({self.p})"


def GF(p: int) -> FieldSpec:
    return FieldSpec(p)


def field_inv(a: int, field: FieldSpec) -> int:
    """Multiplicative inverse of ``a`` modulo ``field.p`` by extended Euclid."""
    p = field.p
    a %= p
    if a == 0:
        raise NoInverse(f"0 has no inverse in GF({p})")
    old_r, r = a, p
    old_s, s = 1, 0
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
    # old_r == gcd(a, p) == 1 for prime p
    return old_s % p
