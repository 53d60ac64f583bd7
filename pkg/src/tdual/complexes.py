"""Ordered Delta-complexes, rank-1 local systems, and twisted cochains.

A complex is stored as vertex tuples per dimension; face maps are derived
by deleting one vertex from the tuple and looking the result up among the
registered simplices of one lower dimension.  For this to be unambiguous,
distinct simplices of every dimension below the top must have distinct
vertex tuples.  The catalog builders produce models satisfying this.

Local systems are +-1 signs on edges subject to the multiplicative cocycle
condition on every triangle; they encode integer coefficients twisted by a
homomorphism pi_1 -> {+-1}.  The twisted coboundary attaches the transport
sign of the leading edge to the 0th face term; the cup product transports
the second factor along the front path.  Both conventions are exercised by
exact identities (delta^2 = 0, Leibniz) in the test suite.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional, Sequence

from .exactalg import (
    FGAbelianGroup,
    GroupData,
    IntMatrix,
    NoSolution,
    homology_at,
    homology_at_mod,
    homology_rank_at,
    solve_integer,
)


class InvalidLocalSystem(Exception):
    """Edge signs violate the cocycle condition on some triangle."""


class BaseMismatch(Exception):
    """Operands live over different complexes or local systems."""


class NotACocycle(Exception):
    """A cochain expected to be closed is not."""


RING_Z = "Z"
RING_Q = "Q"


# ---------------------------------------------------------------------------
# Complexes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DeltaComplex:
    """Ordered Delta-complex; ``simplices[k-1]`` lists the k-simplices as
    (k+1)-tuples of vertex ids (repetitions allowed)."""

    vertex_count: int
    simplices: tuple[tuple[tuple[int, ...], ...], ...] = ()

    def __post_init__(self) -> None:
        for d, level in enumerate(self.simplices, start=1):
            for tup in level:
                if len(tup) != d + 1:
                    raise ValueError(f"simplex {tup} has wrong arity for dimension {d}")
                if any(v < 0 or v >= self.vertex_count for v in tup):
                    raise ValueError(f"vertex id out of range in {tup}")
        self._face_tables  # force validation of face lookups

    @property
    def dimension(self) -> int:
        return len(self.simplices)

    def count(self, dim: int) -> int:
        if dim < 0 or dim > self.dimension:
            return 0
        if dim == 0:
            return self.vertex_count
        return len(self.simplices[dim - 1])

    def simplex(self, dim: int, index: int) -> tuple[int, ...]:
        if dim == 0:
            return (index,)
        return self.simplices[dim - 1][index]

    @property
    def _index_tables(self) -> tuple[dict, ...]:
        tables = self.__dict__.get("_index_cache")
        if tables is None:
            tables = []
            for d in range(1, self.dimension + 1):
                table: dict[tuple[int, ...], int] = {}
                for i, tup in enumerate(self.simplices[d - 1]):
                    if d < self.dimension and tup in table:
                        raise ValueError(
                            f"ambiguous face lookup: duplicate {d}-simplex tuple {tup}")
                    if tup not in table:
                        table[tup] = i
                tables.append(table)
            tables = tuple(tables)
            self.__dict__["_index_cache"] = tables
        return tables

    @property
    def _face_tables(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        """faces[d-1][i] = indices of the d+1 faces of the i-th d-simplex."""
        tables = self.__dict__.get("_face_cache")
        if tables is None:
            idx = self._index_tables
            out = []
            for d in range(1, self.dimension + 1):
                level = []
                for tup in self.simplices[d - 1]:
                    faces = []
                    for i in range(d + 1):
                        sub = tup[:i] + tup[i + 1:]
                        if d == 1:
                            faces.append(sub[0])
                        else:
                            j = idx[d - 2].get(sub)
                            if j is None:
                                raise ValueError(
                                    f"face {sub} of {tup} is not a registered {d-1}-simplex")
                            faces.append(j)
                    level.append(tuple(faces))
                out.append(tuple(level))
            tables = tuple(out)
            self.__dict__["_face_cache"] = tables
        return tables

    def faces(self, dim: int, index: int) -> tuple[int, ...]:
        return self._face_tables[dim - 1][index]

    def face(self, dim: int, index: int, i: int) -> int:
        return self._face_tables[dim - 1][index][i]

    def subface(self, dim: int, index: int, start: int, end: int) -> int:
        """Index of the face spanning tuple positions start..end inclusive."""
        cur_dim, cur = dim, index
        while cur_dim > end - start:
            if cur_dim > end:
                cur = self.face(cur_dim, cur, cur_dim)  # drop last vertex
                cur_dim -= 1
            else:
                cur = self.face(cur_dim, cur, 0)  # drop first vertex
                cur_dim -= 1
                start -= 1
                end -= 1
        return cur

    def edge_index(self, tail: int, head: int) -> int:
        idx = self._index_tables[0].get((tail, head))
        if idx is None:
            raise KeyError(f"no edge ({tail}, {head})")
        return idx

    def euler_characteristic(self) -> int:
        chi = self.vertex_count
        for d in range(1, self.dimension + 1):
            chi += (-1) ** d * self.count(d)
        return chi

    # -- serialization ------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "vertices": self.vertex_count,
            "simplices": {str(d): [list(t) for t in self.simplices[d - 1]]
                          for d in range(1, self.dimension + 1)},
        }

    @staticmethod
    def from_json_dict(obj: dict) -> "DeltaComplex":
        dims = sorted(int(k) for k in obj.get("simplices", {}))
        if dims and dims != list(range(1, dims[-1] + 1)):
            raise ValueError("simplex dimensions must be contiguous from 1")
        levels = tuple(tuple(tuple(int(v) for v in t) for t in obj["simplices"][str(d)])
                       for d in dims)
        return DeltaComplex(int(obj["vertices"]), levels)

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @staticmethod
    def from_json(s: str) -> "DeltaComplex":
        return DeltaComplex.from_json_dict(json.loads(s))


def validate_complex(x: DeltaComplex) -> bool:
    """Construction already validates; kept as an explicit entry point."""
    x._face_tables
    return True


# ---------------------------------------------------------------------------
# Local systems
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LocalSystem:
    """Rank-1 integer local system: a +-1 sign per edge with trivial
    holonomy around every triangle."""

    base: DeltaComplex
    edge_signs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.edge_signs) != self.base.count(1):
            raise InvalidLocalSystem("one sign per edge required")
        if any(s not in (1, -1) for s in self.edge_signs):
            raise InvalidLocalSystem("signs must be +-1")
        for i in range(self.base.count(2)):
            f = self.base.faces(2, i)
            if self.edge_signs[f[2]] * self.edge_signs[f[0]] * self.edge_signs[f[1]] != 1:
                raise InvalidLocalSystem(f"cocycle condition fails on triangle {i}")

    def sign(self, edge: int) -> int:
        return self.edge_signs[edge]

    @property
    def is_trivial_cocycle(self) -> bool:
        return all(s == 1 for s in self.edge_signs)

    def to_json_dict(self) -> dict:
        return {"edge_signs": list(self.edge_signs)}

    @staticmethod
    def from_json_dict(base: DeltaComplex, obj: dict) -> "LocalSystem":
        return LocalSystem(base, tuple(int(s) for s in obj["edge_signs"]))


System = Optional[LocalSystem]


def trivial_system(base: DeltaComplex) -> LocalSystem:
    return LocalSystem(base, (1,) * base.count(1))


def tensor(a: System, b: System) -> System:
    if a is None:
        return b
    if b is None:
        return a
    if a.base is not b.base and a.base != b.base:
        raise BaseMismatch("local systems live over different complexes")
    signs = tuple(x * y for x, y in zip(a.edge_signs, b.edge_signs))
    if all(s == 1 for s in signs):
        return None
    return LocalSystem(a.base, signs)


def _sign(system: System, edge: int) -> int:
    return 1 if system is None else system.edge_signs[edge]


def system_key(system: System) -> tuple[int, ...]:
    return () if system is None else system.edge_signs


def is_same_z2_class(a: System, b: System) -> bool:
    """Whether two sign systems differ by the coboundary of a +-1 vertex
    function, i.e. define the same class in H^1(X, Z/2)."""
    base = a.base if a is not None else (b.base if b is not None else None)
    if base is None:
        return True
    diff = [(0 if _sign(a, e) == _sign(b, e) else 1) for e in range(base.count(1))]
    rows = []
    for e in range(base.count(1)):
        t, h = base.simplex(1, e)
        row = [0] * base.vertex_count
        row[t] += 1
        row[h] += 1
        rows.append(row)
    m = IntMatrix.from_rows(rows, cols=base.vertex_count)
    from .exactalg import solve_mod
    try:
        solve_mod(m, diff, 2)
        return True
    except NoSolution:
        return False


# ---------------------------------------------------------------------------
# Coboundary matrices and cochains
# ---------------------------------------------------------------------------

@lru_cache(maxsize=4096)
def _coboundary_cached(x: DeltaComplex, k: int, signs: tuple[int, ...]) -> IntMatrix:
    n_from = x.count(k)
    n_to = x.count(k + 1)
    rows = [[0] * n_from for _ in range(n_to)]
    for r in range(n_to):
        fs = x.faces(k + 1, r)
        lead = x.subface(k + 1, r, 0, 1)
        s0 = signs[lead] if signs else 1
        rows[r][fs[0]] += s0
        for i in range(1, k + 2):
            rows[r][fs[i]] += -1 if i % 2 else 1
    return IntMatrix.from_rows(rows, cols=n_from)


def coboundary_matrix(x: DeltaComplex, k: int, system: System = None) -> IntMatrix:
    """Matrix of the twisted coboundary C^k(X, L) -> C^{k+1}(X, L)."""
    if k < 0:
        return IntMatrix.zeros(x.count(k + 1), 0)
    return _coboundary_cached(x, k, system_key(system))


def boundary_matrix(x: DeltaComplex, k: int, system: System = None) -> IntMatrix:
    """Transported boundary C_k -> C_{k-1}: transpose of the coboundary."""
    if k <= 0:
        return IntMatrix.zeros(0, x.count(0) if k == 0 else 0)
    return coboundary_matrix(x, k - 1, system).transpose()


@dataclass(frozen=True)
class TwistedCochain:
    """A k-cochain with values in Z (or Z/m) twisted by a local system."""

    base: DeltaComplex
    degree: int
    values: tuple[int, ...]
    system: System = None
    modulus: Optional[int] = None  # None: integer coefficients

    def __post_init__(self) -> None:
        if len(self.values) != self.base.count(self.degree):
            raise ValueError("value count must match simplex count")
        if self.system is not None and self.system.base != self.base:
            raise BaseMismatch("cochain system lives over a different complex")

    def map_values(self, f) -> "TwistedCochain":
        return TwistedCochain(self.base, self.degree, tuple(f(v) for v in self.values),
                              self.system, self.modulus)

    def __add__(self, other: "TwistedCochain") -> "TwistedCochain":
        self._check_compatible(other)
        vals = tuple(a + b for a, b in zip(self.values, other.values))
        if self.modulus:
            vals = tuple(v % self.modulus for v in vals)
        return TwistedCochain(self.base, self.degree, vals, self.system, self.modulus)

    def __sub__(self, other: "TwistedCochain") -> "TwistedCochain":
        return self + other.scale(-1)

    def scale(self, c: int) -> "TwistedCochain":
        vals = tuple(c * v for v in self.values)
        if self.modulus:
            vals = tuple(v % self.modulus for v in vals)
        return TwistedCochain(self.base, self.degree, vals, self.system, self.modulus)

    def is_zero(self) -> bool:
        if self.modulus:
            return all(v % self.modulus == 0 for v in self.values)
        return all(v == 0 for v in self.values)

    def _check_compatible(self, other: "TwistedCochain") -> None:
        if self.base != other.base or self.degree != other.degree:
            raise BaseMismatch("cochains are not compatible")
        if self.modulus != other.modulus:
            raise BaseMismatch("coefficient rings differ")
        if system_key(self.system) != system_key(other.system):
            raise BaseMismatch("local systems differ")


def zero_cochain(x: DeltaComplex, k: int, system: System = None,
                 modulus: Optional[int] = None) -> TwistedCochain:
    return TwistedCochain(x, k, (0,) * x.count(k), system, modulus)


def coboundary(c: TwistedCochain) -> TwistedCochain:
    m = coboundary_matrix(c.base, c.degree, c.system)
    vals = m.mul_vec(c.values)
    if c.modulus:
        vals = tuple(v % c.modulus for v in vals)
    return TwistedCochain(c.base, c.degree + 1, vals, c.system, c.modulus)


def is_cocycle(c: TwistedCochain) -> bool:
    return coboundary(c).is_zero()


def cup(a: TwistedCochain, b: TwistedCochain) -> TwistedCochain:
    """Alexander-Whitney product with local-system transport.

    The value on a (p+q)-simplex is a(front p-face) * w * b(back q-face),
    where w is the product of the transport signs of b's system along the
    first p edges of the simplex.
    """
    if a.base != b.base:
        raise BaseMismatch("cup factors live over different complexes")
    if a.modulus != b.modulus:
        raise BaseMismatch("cup factors have different coefficients")
    x = a.base
    p, q = a.degree, b.degree
    k = p + q
    out_system = tensor(a.system, b.system)
    if k > x.dimension:
        return TwistedCochain(x, k, (), out_system, a.modulus)
    vals = []
    bsys = system_key(b.system)
    for s in range(x.count(k)):
        front = x.subface(k, s, 0, p)
        back = x.subface(k, s, p, k)
        w = 1
        if bsys:
            for j in range(p):
                w *= bsys[x.subface(k, s, j, j + 1)]
        v = a.values[front] * w * b.values[back]
        vals.append(v % a.modulus if a.modulus else v)
    return TwistedCochain(x, k, tuple(vals), out_system, a.modulus)


def cup_matrix_left(a: TwistedCochain, q: int, right_system: System) -> IntMatrix:
    """Matrix of b -> a cup b on q-cochains twisted by ``right_system``."""
    x = a.base
    p = a.degree
    k = p + q
    if q < 0:
        return IntMatrix.zeros(x.count(k), 0)
    n_from = x.count(q)
    n_to = x.count(k)
    rows = [[0] * n_from for _ in range(n_to)]
    if n_to and k <= x.dimension:
        bsys = system_key(right_system)
        for s in range(n_to):
            front = x.subface(k, s, 0, p)
            av = a.values[front]
            if av == 0:
                continue
            back = x.subface(k, s, p, k)
            w = 1
            if bsys:
                for j in range(p):
                    w *= bsys[x.subface(k, s, j, j + 1)]
            rows[s][back] += av * w
    return IntMatrix.from_rows(rows, cols=n_from)


def bockstein(c: TwistedCochain, lift_negative: bool = False) -> TwistedCochain:
    """Integral Bockstein of a mod-2 cocycle: lift to {0,1} (or {0,-1})
    integer values, take the untwisted coboundary, halve."""
    if c.modulus != 2:
        raise ValueError("bockstein expects a mod-2 cochain")
    if not coboundary(c).is_zero():
        raise NotACocycle("bockstein input must be a mod-2 cocycle")
    lift_val = -1 if lift_negative else 1
    lift = TwistedCochain(c.base, c.degree,
                          tuple(lift_val if v % 2 else 0 for v in c.values), None, None)
    d = coboundary(lift)
    if any(v % 2 for v in d.values):
        raise NotACocycle("coboundary of the lift is not even")
    return d.map_values(lambda v: v // 2)


# ---------------------------------------------------------------------------
# Cohomology / homology of a complex
# ---------------------------------------------------------------------------

def cohomology(x: DeltaComplex, system: System = None, ring=RING_Z) -> list[GroupData]:
    """H^0..H^D with generator cocycles and class_of maps.

    ``ring`` is "Z", "Q", or an integer modulus m for Z/m coefficients.
    """
    if system is not None and system.base != x:
        raise InvalidLocalSystem("system lives over a different complex")
    out = []
    for k in range(x.dimension + 1):
        d_in = coboundary_matrix(x, k - 1, system) if k else IntMatrix.zeros(x.count(0), 0)
        d_out = coboundary_matrix(x, k, system)
        if ring == RING_Z:
            out.append(homology_at(d_in, d_out))
        elif ring == RING_Q:
            out.append(GroupData(FGAbelianGroup(homology_rank_at(d_in, d_out)), ()))
        else:
            out.append(homology_at_mod(d_in, d_out, int(ring)))
    return out


def homology(x: DeltaComplex, system: System = None, ring=RING_Z) -> list[GroupData]:
    """H_0..H_D of the transported chain complex (transposed coboundaries)."""
    if system is not None and system.base != x:
        raise InvalidLocalSystem("system lives over a different complex")
    out = []
    for k in range(x.dimension + 1):
        d_out = boundary_matrix(x, k, system)
        d_in = boundary_matrix(x, k + 1, system) if k < x.dimension \
            else IntMatrix.zeros(x.count(k), 0)
        if ring == RING_Z:
            out.append(homology_at(d_in, d_out))
        elif ring == RING_Q:
            out.append(GroupData(FGAbelianGroup(homology_rank_at(d_in, d_out)), ()))
        else:
            out.append(homology_at_mod(d_in, d_out, int(ring)))
    return out


@dataclass(frozen=True)
class DualityReport:
    dimension: int
    entries: tuple[tuple[int, str, FGAbelianGroup, FGAbelianGroup, bool], ...]

    @property
    def ok(self) -> bool:
        return all(e[4] for e in self.entries)

    def __str__(self) -> str:
        lines = []
        for i, name, lhs, rhs, ok in self.entries:
            status = "ok" if ok else "FAIL"
            lines.append(f"H^{i}({name}) = {lhs}  vs  H_{self.dimension - i} = {rhs}  [{status}]")
        return "\n".join(lines)


def poincare_duality_check(x: DeltaComplex, orientation: System,
                           systems: Sequence[tuple[str, System]] = (("Z", None),),
                           cohomology_fn: Optional[Callable] = None,
                           homology_fn: Optional[Callable] = None) -> DualityReport:
    """Check H^i(X, L) = H_{n-i}(X, L (x) orn) as abstract groups.

    The default (co)homology callables work on the complex itself; the
    bundle module passes total-model versions to check 3-dimensional total
    spaces with the same code.
    """
    n = x.dimension
    co = cohomology_fn or (lambda ls: [g.group for g in cohomology(x, ls)])
    ho = homology_fn or (lambda ls: [g.group for g in homology(x, ls)])
    entries = []
    for name, ls in systems:
        lhs = co(ls)
        rhs = ho(tensor(ls, orientation))
        for i in range(n + 1):
            entries.append((i, name, lhs[i], rhs[n - i], lhs[i] == rhs[n - i]))
    return DualityReport(n, tuple(entries))


def is_coboundary(c: TwistedCochain) -> bool:
    """Whether c = delta(u) for some (k-1)-cochain u over the same system."""
    m = coboundary_matrix(c.base, c.degree - 1, c.system)
    try:
        if c.modulus:
            from .exactalg import solve_mod
            solve_mod(m, c.values, c.modulus)
        else:
            solve_integer(m, c.values)
        return True
    except NoSolution:
        return False
