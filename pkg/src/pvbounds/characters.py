"""Dirichlet characters modulo q: unit groups, enumeration, Gauss sums.

A character is stored through an integer exponent table: chi(a) = e(t_a / N)
with e(u) = exp(2*pi*i*u), where N is the exponent of the unit group mod q.
Structural predicates (multiplicativity, parity, order, conductor) are then
exact integer arithmetic; complex value tables are materialized on demand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

__all__ = [
    "UnitGroupStructure",
    "DirichletCharacter",
    "GaussSum",
    "unit_group",
    "enumerate_characters",
    "character_from_label",
    "conductor",
    "gauss_sum",
    "twist_identity_check",
    "delta_q_check",
    "roots_of_unity",
]


# ---------------------------------------------------------------------------
# Elementary number theory helpers (desk scale: trial division is plenty).


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization of n >= 1 as a list of (prime, multiplicity)."""
    if n < 1:
        raise ValueError(f"factorize requires n >= 1, got {n}")
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    return out


def euler_phi(n: int) -> int:
    phi = 1
    for p, e in factorize(n):
        phi *= (p - 1) * p ** (e - 1)
    return phi


def divisors(n: int) -> list[int]:
    """All positive divisors of n, ascending."""
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def _multiplicative_order(g: int, modulus: int, group_order: int) -> int:
    """Order of g in (Z/modulus)^*, given a multiple of it (group_order)."""
    order = group_order
    for p, _ in factorize(group_order):
        while order % p == 0 and pow(g, order // p, modulus) == 1:
            order //= p
    return order


def _smallest_generator(pk: int, phi: int) -> int:
    """Smallest residue generating the cyclic group (Z/pk)^*.

    Brute force over residues in increasing order; pk is an odd prime
    power or 4, so the group is cyclic and a generator exists.
    """
    for g in range(2, pk):
        if math.gcd(g, pk) != 1:
            continue
        if _multiplicative_order(g, pk, phi) == phi:
            return g
    raise ArithmeticError(f"no generator found mod {pk}")


def _crt_lift(residue: int, pk: int, q: int) -> int:
    """The unit mod q that is residue mod pk and 1 mod q // pk."""
    m = q // pk
    if m == 1:
        return residue % q
    # x = 1 + m*t with m*t = (residue - 1) mod pk
    t = ((residue - 1) * pow(m, -1, pk)) % pk
    return (1 + m * t) % q


# ---------------------------------------------------------------------------
# Unit group structure.


@dataclass(frozen=True)
class UnitGroupStructure:
    """Generators of (Z/q)^* as a product of cyclic groups.

    generators[i] has multiplicative order orders[i] mod q, and every unit
    is a unique product of generator powers within those orders.
    """

    modulus: int
    generators: tuple[int, ...]
    orders: tuple[int, ...]

    @property
    def phi(self) -> int:
        n = 1
        for o in self.orders:
            n *= o
        return n

    @property
    def exponent(self) -> int:
        """lcm of the cyclic component orders (1 for the trivial group)."""
        return math.lcm(*self.orders) if self.orders else 1


def unit_group(q: int) -> UnitGroupStructure:
    """CRT decomposition of (Z/q)^* into cyclic components.

    Odd prime powers (and 4) contribute one cyclic factor generated by the
    smallest generator; 2^k with k >= 3 contributes Z/2 x Z/2^(k-2),
    generated by -1 and 5. Generators are lifted to units mod q.
    """
    if q < 1:
        raise ValueError(f"modulus must be positive, got {q}")
    gens: list[int] = []
    orders: list[int] = []
    for p, e in factorize(q):
        pk = p**e
        if p == 2:
            if e == 1:
                continue  # (Z/2)^* is trivial
            if e == 2:
                gens.append(_crt_lift(3, 4, q))
                orders.append(2)
            else:
                gens.append(_crt_lift(pk - 1, pk, q))
                orders.append(2)
                gens.append(_crt_lift(5, pk, q))
                orders.append(2 ** (e - 2))
        else:
            phi = (p - 1) * p ** (e - 1)
            g = _smallest_generator(pk, phi)
            gens.append(_crt_lift(g, pk, q))
            orders.append(phi)
    return UnitGroupStructure(modulus=q, generators=tuple(gens), orders=tuple(orders))


# ---------------------------------------------------------------------------
# Roots of unity with exact quarter points.


@lru_cache(maxsize=256)
def roots_of_unity(n: int) -> np.ndarray:
    """e(k/n) for k = 0..n-1, quarter points exact, conjugate-symmetric.

    roots[n-k] is bitwise conj(roots[k]), so a conjugate character's value
    table is the exact complex conjugate of the original's; the quarter
    snapping keeps real characters exactly real, so collinearity of their
    prefix walks is detected without a tolerance.
    """
    w = np.empty(n, dtype=np.complex128)
    half = n // 2
    k = np.arange(half + 1)
    w[: half + 1] = np.exp(2j * np.pi * k / n)
    w[0] = 1.0
    if n % 2 == 0:
        w[half] = -1.0
    if n % 4 == 0:
        w[n // 4] = 1j
    if half + 1 < n:
        w[half + 1 :] = np.conj(w[1 : n - half][::-1])
    w.setflags(write=False)
    return w


# ---------------------------------------------------------------------------
# Character family: shared per-modulus tables.


class _CharacterFamily:
    """Per-modulus data used to build every character mod q at once.

    units[i] enumerates (Z/q)^* as products of generator powers; dlog[i]
    is the exponent vector of units[i]. A character with label vector
    (e_1, ..., e_r) maps units[i] to e(t_i / N) with
    t_i = sum_j e_j * dlog[i][j] * (N / order_j) mod N.
    """

    def __init__(self, q: int):
        self.q = q
        self.group = unit_group(q)
        orders = self.group.orders
        self.n_root = self.group.exponent
        phi = self.group.phi
        if orders:
            dlog = np.stack(
                np.unravel_index(np.arange(phi), orders), axis=1
            ).astype(np.int64)
        else:
            dlog = np.zeros((phi, 0), dtype=np.int64)
        # enumeration order matches unravel_index: first generator slowest
        units = [1 % q]
        for g, o in zip(self.group.generators, self.group.orders):
            powers = [1]
            for _ in range(o - 1):
                powers.append(powers[-1] * g % q)
            units = [u * pg % q for u in units for pg in powers]
        self.units = np.asarray(units, dtype=np.int64)
        self.dlog = dlog
        self.scale = np.array(
            [self.n_root // o for o in orders], dtype=np.int64
        )
        self.units.setflags(write=False)
        self.dlog.setflags(write=False)
        # position of -1 mod q in the unit enumeration (== 1 for q <= 2)
        self.minus_one_pos = int(np.nonzero(self.units == (q - 1) % q)[0][0])
        self._divisor_masks = [
            (d, np.nonzero(self.units % d == 1 % d)[0]) for d in divisors(q)
        ]

    def exponent_table(self, label: tuple[int, ...]) -> np.ndarray:
        coeff = np.asarray(label, dtype=np.int64) * self.scale
        return (self.dlog @ coeff) % self.n_root if len(label) else np.zeros(
            len(self.units), dtype=np.int64
        )

    def all_exponent_tables(self) -> np.ndarray:
        """(phi x phi) matrix: column j = exponent table of the j-th label.

        Accumulated through float64 matmul (BLAS): every product is below
        2^53 at desk scale, so the result is exact.
        """
        if self.dlog.shape[1] == 0:
            return np.zeros((len(self.units), 1), dtype=np.int32)
        weights = (self.dlog * self.scale[None, :]).T  # labels enumerate like dlog
        prod = self.dlog.astype(np.float64) @ weights.astype(np.float64)
        np.mod(prod, self.n_root, out=prod)
        return prod.astype(np.int32)

    def conductor_of(self, exps: np.ndarray) -> int:
        for d, idx in self._divisor_masks:
            if not np.any(exps[idx]):
                return d
        return self.q  # unreachable: d == q always passes

    def conductors_of(self, table: np.ndarray) -> np.ndarray:
        n_chars = table.shape[1]
        out = np.zeros(n_chars, dtype=np.int64)
        todo = np.ones(n_chars, dtype=bool)
        for d, idx in self._divisor_masks:
            if not todo.any():
                break
            hit = todo & ~np.any(table[idx, :], axis=0)
            out[hit] = d
            todo &= ~hit
        return out


@lru_cache(maxsize=64)
def _family(q: int) -> _CharacterFamily:
    return _CharacterFamily(q)


# ---------------------------------------------------------------------------
# Characters.


class DirichletCharacter:
    """A Dirichlet character mod q in exact exponent form.

    label is the exponent vector on the unit-group generators; the value at
    the i-th enumerated unit is e(unit_exponents[i] / root_order). Instances
    are immutable and safe to share across workers.
    """

    __slots__ = (
        "modulus",
        "label",
        "conductor",
        "parity",
        "order",
        "root_order",
        "unit_residues",
        "unit_exponents",
    )

    def __init__(
        self,
        modulus: int,
        label: tuple[int, ...],
        conductor: int,
        parity: str,
        order: int,
        root_order: int,
        unit_residues: np.ndarray,
        unit_exponents: np.ndarray,
    ):
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "conductor", conductor)
        object.__setattr__(self, "parity", parity)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "root_order", root_order)
        object.__setattr__(self, "unit_residues", unit_residues)
        object.__setattr__(self, "unit_exponents", unit_exponents)

    def __setattr__(self, name, value):
        raise AttributeError("DirichletCharacter is immutable")

    def __repr__(self):
        return (
            f"DirichletCharacter(q={self.modulus}, label={self.label}, "
            f"conductor={self.conductor}, parity={self.parity!r}, "
            f"order={self.order})"
        )

    def __eq__(self, other):
        return (
            isinstance(other, DirichletCharacter)
            and self.modulus == other.modulus
            and self.label == other.label
        )

    def __hash__(self):
        return hash((self.modulus, self.label))

    @property
    def is_principal(self) -> bool:
        return all(e == 0 for e in self.label)

    @property
    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    def values(self) -> np.ndarray:
        """Complex value table of length q (zero off the units)."""
        vals = np.zeros(self.modulus, dtype=np.complex128)
        vals[self.unit_residues] = roots_of_unity(self.root_order)[
            self.unit_exponents
        ]
        return vals

    def value(self, a: int) -> complex:
        a = a % self.modulus
        pos = np.nonzero(self.unit_residues == a)[0]
        if len(pos) == 0:
            return 0j
        return complex(
            roots_of_unity(self.root_order)[self.unit_exponents[pos[0]]]
        )

    def to_json_dict(self) -> dict:
        """JSON form; the value table is always recomputed from the label."""
        return {
            "q": self.modulus,
            "label": list(self.label),
            "conductor": self.conductor,
            "parity": self.parity,
            "order": self.order,
        }


def _build_character(
    fam: _CharacterFamily,
    label: tuple[int, ...],
    exps: np.ndarray,
    cond: int,
    order: int | None = None,
) -> DirichletCharacter:
    n = fam.n_root
    parity = "even" if exps[fam.minus_one_pos] == 0 else "odd"
    if order is None:
        order = n // int(np.gcd.reduce(np.concatenate([exps, [n]])))
    exps = np.ascontiguousarray(exps)
    exps.setflags(write=False)
    return DirichletCharacter(
        modulus=fam.q,
        label=label,
        conductor=cond,
        parity=parity,
        order=order,
        root_order=n,
        unit_residues=fam.units,
        unit_exponents=exps,
    )


def enumerate_characters(q: int) -> list[DirichletCharacter]:
    """All phi(q) characters mod q, in lexicographic label order."""
    fam = _family(q)
    orders = fam.group.orders
    labels = list(product(*(range(o) for o in orders)))
    table = fam.all_exponent_tables()
    conds = fam.conductors_of(table)
    n = fam.n_root
    char_orders = n // np.gcd(np.gcd.reduce(table, axis=0), n)
    return [
        _build_character(
            fam, labels[j], table[:, j], int(conds[j]), int(char_orders[j])
        )
        for j in range(len(labels))
    ]


def character_from_label(q: int, label) -> DirichletCharacter:
    """Reconstruct a character from its generator-exponent label."""
    fam = _family(q)
    orders = fam.group.orders
    label = tuple(int(e) for e in label)
    if len(label) != len(orders) or any(
        not (0 <= e < o) for e, o in zip(label, orders)
    ):
        raise ValueError(
            f"label {label} invalid for mod {q}: component orders are {orders}"
        )
    exps = fam.exponent_table(label)
    return _build_character(fam, label, exps, fam.conductor_of(exps))


def conductor(chi: DirichletCharacter) -> int:
    """Smallest d | q with chi(a) = 1 for every unit a with a = 1 mod d.

    Definitional test over all divisors; the character is primitive exactly
    when the result equals its modulus.
    """
    for d in divisors(chi.modulus):
        mask = chi.unit_residues % d == 1 % d
        if not np.any(chi.unit_exponents[mask]):
            return d
    return chi.modulus


# ---------------------------------------------------------------------------
# Gauss sums and the classical twisted-sum identity.


@dataclass(frozen=True)
class GaussSum:
    """tau(chi) with its modulus (sqrt(q) for primitive chi)."""

    value: complex
    magnitude: float


def gauss_sum(chi: DirichletCharacter) -> GaussSum:
    """tau(chi) = sum_a chi(a) e(a/q) by direct summation over the units."""
    q = chi.modulus
    vals = roots_of_unity(chi.root_order)[chi.unit_exponents]
    phases = roots_of_unity(q)[chi.unit_residues % q]
    tau = complex(np.dot(vals, phases))
    return GaussSum(value=tau, magnitude=abs(tau))


def twist_identity_check(chi: DirichletCharacter, m: int) -> float:
    """Discrepancy in the twisted Gauss-sum identity at the integer m.

    For primitive even chi this is |conj(chi(m)) tau(chi) - S_cos| with
    S_cos = sum_a chi(a) cos(2 pi a m / q); odd characters use the sine sum
    times i. Raises for non-primitive chi, where the identity can fail.
    """
    if not chi.is_primitive:
        raise ValueError("twist identity only holds for primitive characters")
    q = chi.modulus
    vals = roots_of_unity(chi.root_order)[chi.unit_exponents]
    phases = roots_of_unity(q)[(chi.unit_residues * (m % q)) % q]
    lhs = np.conj(chi.value(m)) * gauss_sum(chi).value
    if chi.parity == "even":
        rhs = np.dot(vals, phases.real)
    else:
        rhs = 1j * np.dot(vals, phases.imag)
    return float(abs(lhs - rhs))


def delta_q_check(q: int, a: int) -> int:
    """Round of (1/q) sum_{x=1}^{q} e(ax/q): 1 iff a = 0 mod q, else 0."""
    if q < 1:
        raise ValueError(f"modulus must be positive, got {q}")
    x = np.arange(1, q + 1)
    s = roots_of_unity(q)[(a * x) % q].sum() / q
    return int(round(s.real))
