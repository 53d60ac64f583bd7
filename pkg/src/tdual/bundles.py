"""Circle bundles as classification data and their total-space cochain model.

A bundle over a base complex M is the pair (xi, e): a sign local system
xi (the orientation class of the fibers) and a xi-twisted 2-cocycle e (a
representative of the twisted Euler class).  The total space E is modeled
by the twisted mapping cone

    C^k(E, zeta) = C^k(M, zeta) (+) C^{k-1}(M, zeta (x) xi)

with differential d(a, b) = (da + (-1)^k e ^ b, db).  The sign is the
unique alternating choice killing d^2 given |e| = 2 and de = 0.  Pullback
is the inclusion of the first summand, push-forward the projection onto
the second; the Gysin sequence of the bundle is the long exact sequence of
this cone.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from .complexes import (
    BaseMismatch,
    DeltaComplex,
    DualityReport,
    LocalSystem,
    NotACocycle,
    System,
    TwistedCochain,
    coboundary,
    coboundary_matrix,
    cup,
    cup_matrix_left,
    is_same_z2_class,
    poincare_duality_check,
    system_key,
    tensor,
    trivial_system,
)
from .exactalg import (
    FGAbelianGroup,
    GroupData,
    IntMatrix,
    NoSolution,
    block_matrix,
    homology_at,
    homology_at_mod,
    homology_rank_at,
    solve_integer,
    solve_mod,
)


class InvalidDescriptor(Exception):
    """The Euler cochain is not a twisted cocycle."""


@dataclass(frozen=True)
class BundleDescriptor:
    """A circle bundle (xi, e) over ``base``."""

    base: DeltaComplex
    xi: LocalSystem
    euler: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.xi.base != self.base:
            raise InvalidDescriptor("xi lives over a different complex")
        if len(self.euler) != self.base.count(2):
            raise InvalidDescriptor("euler cochain has wrong length")
        if not coboundary(self.euler_cochain()).is_zero():
            raise InvalidDescriptor("euler cochain is not closed")

    def euler_cochain(self) -> TwistedCochain:
        return TwistedCochain(self.base, 2, self.euler, self.xi)

    def to_json_dict(self) -> dict:
        return {
            "base": self.base.to_json_dict(),
            "xi": self.xi.to_json_dict(),
            "euler": {"values": list(self.euler)},
        }

    @staticmethod
    def from_json_dict(obj: dict) -> "BundleDescriptor":
        base = DeltaComplex.from_json_dict(obj["base"])
        xi = LocalSystem.from_json_dict(base, obj["xi"])
        return BundleDescriptor(base, xi, tuple(int(v) for v in obj["euler"]["values"]))

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


@dataclass(frozen=True)
class TotalCochain:
    """A k-cochain on the total-space model: base part plus fiber part."""

    bundle: BundleDescriptor
    degree: int
    alpha: tuple[int, ...]   # C^k(M, zeta)
    beta: tuple[int, ...]    # C^{k-1}(M, zeta (x) xi)
    zeta: System = None

    def __post_init__(self) -> None:
        m = self.bundle.base
        if len(self.alpha) != m.count(self.degree) or len(self.beta) != m.count(self.degree - 1):
            raise ValueError("component lengths do not match the base complex")

    def vector(self) -> tuple[int, ...]:
        return self.alpha + self.beta

    def __add__(self, other: "TotalCochain") -> "TotalCochain":
        if (self.bundle, self.degree, system_key(self.zeta)) != \
           (other.bundle, other.degree, system_key(other.zeta)):
            raise BaseMismatch("incompatible total cochains")
        return TotalCochain(self.bundle, self.degree,
                            tuple(a + b for a, b in zip(self.alpha, other.alpha)),
                            tuple(a + b for a, b in zip(self.beta, other.beta)), self.zeta)

    def __sub__(self, other: "TotalCochain") -> "TotalCochain":
        return self + other.scale(-1)

    def scale(self, c: int) -> "TotalCochain":
        return TotalCochain(self.bundle, self.degree,
                            tuple(c * v for v in self.alpha),
                            tuple(c * v for v in self.beta), self.zeta)

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.alpha) and all(v == 0 for v in self.beta)


class TotalComplex:
    """The mapping-cone model of the total space with coefficients zeta."""

    def __init__(self, bundle: BundleDescriptor, zeta: System = None):
        if zeta is not None and zeta.base != bundle.base:
            raise BaseMismatch("zeta lives over a different complex")
        self.bundle = bundle
        self.base = bundle.base
        self.zeta = zeta
        self.zeta_xi = tensor(zeta, bundle.xi)

    @property
    def dimension(self) -> int:
        return self.base.dimension + 1

    def count(self, k: int) -> int:
        return self.base.count(k) + self.base.count(k - 1)

    def delta_matrix(self, k: int) -> IntMatrix:
        return _total_delta(self.bundle, system_key(self.zeta), k)

    def zero(self, k: int) -> TotalCochain:
        m = self.base
        return TotalCochain(self.bundle, k, (0,) * m.count(k), (0,) * m.count(k - 1), self.zeta)

    def cochain(self, k: int, alpha: Sequence[int], beta: Sequence[int]) -> TotalCochain:
        return TotalCochain(self.bundle, k, tuple(alpha), tuple(beta), self.zeta)

    def from_vector(self, k: int, v: Sequence[int]) -> TotalCochain:
        nk = self.base.count(k)
        return self.cochain(k, tuple(v[:nk]), tuple(v[nk:]))

    def coboundary(self, x: TotalCochain) -> TotalCochain:
        if x.bundle != self.bundle or system_key(x.zeta) != system_key(self.zeta):
            raise BaseMismatch("cochain does not live on this model")
        v = self.delta_matrix(x.degree).mul_vec(x.vector())
        return self.from_vector(x.degree + 1, v)

    def is_cocycle(self, x: TotalCochain) -> bool:
        return self.coboundary(x).is_zero()

    def cohomology(self, ring="Z") -> list[GroupData]:
        return _total_cohomology_cached(self.bundle, system_key(self.zeta), ring)

    def homology(self, ring="Z") -> list[GroupData]:
        return _total_homology_cached(self.bundle, system_key(self.zeta), ring)

    def class_of(self, x: TotalCochain) -> tuple[int, ...]:
        return self.cohomology()[x.degree].coordinates(x.vector())

    def group(self, k: int) -> FGAbelianGroup:
        return self.cohomology()[k].group


@lru_cache(maxsize=4096)
def _total_delta(bundle: BundleDescriptor, zkey: tuple, k: int) -> IntMatrix:
    base = bundle.base
    zeta = LocalSystem(base, zkey) if zkey else None
    zeta_xi = tensor(zeta, bundle.xi)
    e = bundle.euler_cochain()
    d_top = coboundary_matrix(base, k, zeta)
    d_bot = coboundary_matrix(base, k - 1, zeta_xi)
    cup_e = cup_matrix_left(e, k - 1, zeta_xi)
    sign = 1 if k % 2 == 0 else -1
    return block_matrix([[d_top, cup_e.scale(sign)],
                         [IntMatrix.zeros(d_bot.rows, d_top.cols), d_bot]])


@lru_cache(maxsize=1024)
def _total_cohomology_cached(bundle: BundleDescriptor, zkey: tuple, ring) -> tuple[GroupData, ...]:
    model = TotalComplex(bundle, LocalSystem(bundle.base, zkey) if zkey else None)
    out = []
    for k in range(model.dimension + 1):
        d_in = model.delta_matrix(k - 1) if k else IntMatrix.zeros(model.count(0), 0)
        d_out = model.delta_matrix(k)
        if ring == "Z":
            out.append(homology_at(d_in, d_out))
        elif ring == "Q":
            out.append(GroupData(FGAbelianGroup(homology_rank_at(d_in, d_out)), ()))
        else:
            out.append(homology_at_mod(d_in, d_out, int(ring)))
    return tuple(out)


@lru_cache(maxsize=1024)
def _total_homology_cached(bundle: BundleDescriptor, zkey: tuple, ring) -> tuple[GroupData, ...]:
    model = TotalComplex(bundle, LocalSystem(bundle.base, zkey) if zkey else None)
    out = []
    for k in range(model.dimension + 1):
        d_out = model.delta_matrix(k - 1).transpose() if k else \
            IntMatrix.zeros(0, model.count(0))
        d_in = model.delta_matrix(k).transpose() if k < model.dimension else \
            IntMatrix.zeros(model.count(k), 0)
        if ring == "Z":
            out.append(homology_at(d_in, d_out))
        elif ring == "Q":
            out.append(GroupData(FGAbelianGroup(homology_rank_at(d_in, d_out)), ()))
        else:
            out.append(homology_at_mod(d_in, d_out, int(ring)))
    return tuple(out)


def total_cohomology(bundle: BundleDescriptor, zeta: System = None, ring="Z") -> list[FGAbelianGroup]:
    """H^k of the total space with coefficients twisted by the base system
    zeta; reproduces the Kunneth answer for the trivial bundle."""
    return [g.group for g in TotalComplex(bundle, zeta).cohomology(ring)]


def total_homology(bundle: BundleDescriptor, zeta: System = None, ring="Z") -> list[FGAbelianGroup]:
    return [g.group for g in TotalComplex(bundle, zeta).homology(ring)]


# ---------------------------------------------------------------------------
# Structure maps
# ---------------------------------------------------------------------------

def pullback(bundle: BundleDescriptor, a: TwistedCochain) -> TotalCochain:
    """pi^*: inclusion of a base cochain as the first component."""
    if a.base != bundle.base:
        raise BaseMismatch("cochain lives over a different base")
    m = bundle.base
    return TotalCochain(bundle, a.degree, a.values, (0,) * m.count(a.degree - 1), a.system)


def pushforward(x: TotalCochain) -> TwistedCochain:
    """pi_*: the fiber component, a base (k-1)-cochain over zeta (x) xi."""
    model = TotalComplex(x.bundle, x.zeta)
    return TwistedCochain(x.bundle.base, x.degree - 1, x.beta, model.zeta_xi)


def pullback_cup(a: TwistedCochain, x: TotalCochain) -> TotalCochain:
    """pi^*(a) cup x in the total model: (a ^ alpha, a ^ beta)."""
    if a.base != x.bundle.base:
        raise BaseMismatch("cup factors live over different bases")
    model = TotalComplex(x.bundle, x.zeta)
    alpha = TwistedCochain(a.base, x.degree, x.alpha, x.zeta)
    beta = TwistedCochain(a.base, x.degree - 1, x.beta, model.zeta_xi)
    ca = cup(a, alpha)
    cb = cup(a, beta)
    return TotalCochain(x.bundle, a.degree + x.degree, ca.values, cb.values,
                        tensor(a.system, x.zeta))


def gauge_action(x: TotalCochain, alpha: TwistedCochain) -> TotalCochain:
    """The bundle automorphism attached to a xi-twisted 1-cocycle alpha:
    x |-> x + pi^*(alpha ^ pi_* x)."""
    bundle = x.bundle
    if alpha.base != bundle.base or alpha.degree != 1:
        raise BaseMismatch("gauge parameter must be a 1-cochain on the base")
    if system_key(alpha.system) != system_key(bundle.xi):
        raise BaseMismatch("gauge parameter must be xi-twisted")
    model = TotalComplex(bundle, x.zeta)
    if not model.is_cocycle(x):
        raise NotACocycle("gauge_action expects a closed total cochain")
    if not coboundary(alpha).is_zero():
        raise NotACocycle("gauge parameter must be closed")
    shift = cup(alpha, pushforward(x))
    return TotalCochain(bundle, x.degree,
                        tuple(a + s for a, s in zip(x.alpha, shift.values)),
                        x.beta, x.zeta)


def same_bundle(d1: BundleDescriptor, d2: BundleDescriptor) -> bool:
    """Classification test: equal orientation classes and Euler classes
    equal up to sign (the GL(1, Z) action)."""
    if d1.base != d2.base:
        raise BaseMismatch("bundles live over different bases")
    if not is_same_z2_class(d1.xi, d2.xi):
        return False
    e2 = align_xi_cochain(d2.euler_cochain(), d1.xi)
    h2 = _base_h2(d1.base, system_key(d1.xi))
    c1 = h2.coordinates(d1.euler)
    c2 = h2.coordinates(e2.values)
    if c1 == c2:
        return True
    neg = h2.coordinates(tuple(-v for v in e2.values))
    return c1 == neg


@lru_cache(maxsize=1024)
def _base_h2(base: DeltaComplex, xikey: tuple) -> GroupData:
    from .complexes import cohomology
    if base.dimension < 2:
        return GroupData(FGAbelianGroup(0), (), lambda cycle: ())
    return cohomology(base, LocalSystem(base, xikey) if xikey else None)[2]


def align_xi_cochain(c: TwistedCochain, target_xi: LocalSystem) -> TwistedCochain:
    """Re-express a cochain twisted by one sign system as a cochain twisted
    by a cohomologous one, multiplying values by the rescaling vertex
    function along each simplex's first vertex."""
    src = c.system
    if system_key(src) == system_key(target_xi):
        return TwistedCochain(c.base, c.degree, c.values, target_xi, c.modulus)
    base = c.base
    diff = [0 if (1 if src is None else src.edge_signs[e]) ==
            target_xi.edge_signs[e] else 1 for e in range(base.count(1))]
    rows = []
    for e in range(base.count(1)):
        t, h = base.simplex(1, e)
        row = [0] * base.vertex_count
        row[t] += 1
        row[h] += 1
        rows.append(row)
    try:
        u = solve_mod(IntMatrix.from_rows(rows, cols=base.vertex_count), diff, 2)
    except NoSolution as exc:
        raise BaseMismatch("sign systems are not cohomologous") from exc
    signs = [-1 if v % 2 else 1 for v in u]
    vals = tuple(signs[base.simplex(c.degree, i)[0]] * v for i, v in enumerate(c.values))
    return TwistedCochain(base, c.degree, vals, target_xi, c.modulus)


# ---------------------------------------------------------------------------
# Consistency checks
# ---------------------------------------------------------------------------

def orientation_zeta(bundle: BundleDescriptor, base_orientation: System) -> System:
    """Orientation system of the 3-dimensional total space: the vertical
    class times the base orientation, pulled back."""
    return tensor(base_orientation, bundle.xi)


def total_duality_report(bundle: BundleDescriptor, base_orientation: System,
                         systems: Sequence[tuple[str, System]] = (("Z", None),)) -> DualityReport:
    """Poincare duality on the total model: H^i(E, L) vs H_{n-i}(E, L (x) orn)."""
    orn = orientation_zeta(bundle, base_orientation)
    n = bundle.base.dimension + 1
    entries = []
    for name, ls in systems:
        lhs = total_cohomology(bundle, ls)
        rhs = total_homology(bundle, tensor(ls, orn))
        for i in range(n + 1):
            entries.append((i, name, lhs[i], rhs[n - i], lhs[i] == rhs[n - i]))
    return DualityReport(n, tuple(entries))


def gysin_exactness_report(bundle: BundleDescriptor, zeta: System = None) -> list[tuple[str, bool]]:
    """Degreewise exactness of the assembled Gysin sequence

        ... -> H^i(M, zeta) -> H^i(E) -> H^{i-1}(M, zeta xi) -> H^{i+1}(M, zeta) -> ...

    using the computed groups and the maps induced by pullback,
    push-forward and cup with the Euler cocycle."""
    from .complexes import cohomology as base_cohomology

    base = bundle.base
    model = TotalComplex(bundle, zeta)
    zeta_xi = model.zeta_xi
    hm = base_cohomology(base, zeta)
    hmx = base_cohomology(base, zeta_xi)
    he = model.cohomology()
    e = bundle.euler_cochain()
    n = base.dimension

    def pull_map(k):
        return lambda rep: pullback(bundle, TwistedCochain(base, k, tuple(rep), zeta)).vector()

    def push_map(k):
        return lambda rep: model.from_vector(k, rep).beta

    def cup_map(k):
        return lambda rep: cup(e, TwistedCochain(base, k, tuple(rep), zeta_xi)).values

    # one long sequence of (label, GroupData|None, map to the next node)
    nodes: list[tuple[str, Optional[GroupData], object]] = []
    for i in range(n + 3):
        nodes.append((f"H^{i}(M)", hm[i] if i <= n else None, pull_map(i)))
        nodes.append((f"H^{i}(E)", he[i] if i <= n + 1 else None, push_map(i)))
        nodes.append((f"H^{i-1}(M,xi)", hmx[i - 1] if 0 <= i - 1 <= n else None, cup_map(i - 1)))
    checks = []
    for j in range(1, len(nodes) - 1):
        name, mid, g_apply = nodes[j]
        if mid is None:
            continue
        _, prev, f_apply = nodes[j - 1]
        _, nxt, _ = nodes[j + 1]
        ok = _exact_at(prev, mid, nxt, f_apply, g_apply)
        checks.append((name, ok))
    return checks


def _exact_at(src: Optional[GroupData], mid: GroupData, dst: Optional[GroupData],
              f_apply, g_apply) -> bool:
    """im(f: src -> mid) equals ker(g: mid -> dst) inside mid."""
    n_mid = mid.group.free_rank + len(mid.group.torsion)
    moduli = [0] * mid.group.free_rank + list(mid.group.torsion)

    def mid_coords(rep) -> list[int]:
        return list(mid.coordinates(rep))

    image = []
    if src is not None:
        for rep in src.representatives:
            image.append(mid_coords(f_apply(rep)))
    # relations of mid (torsion)
    rel = []
    for i, m in enumerate(moduli):
        if m:
            rel.append([m if j == i else 0 for j in range(n_mid)])

    # kernel of g in mid coordinates
    if dst is None:
        kernel_cols = [[1 if i == j else 0 for i in range(n_mid)] for j in range(n_mid)]
    else:
        g_cols = []
        for i in range(n_mid):
            rep = mid.representatives[i]
            g_cols.append(list(dst.coordinates(g_apply(rep))))
        n_dst = dst.group.free_rank + len(dst.group.torsion)
        dst_moduli = [0] * dst.group.free_rank + list(dst.group.torsion)
        rows = [[g_cols[j][r] for j in range(n_mid)] for r in range(n_dst)]
        # augment with the destination torsion moduli
        aug_cols = []
        for r, m in enumerate(dst_moduli):
            if m:
                aug_cols.append([m if rr == r else 0 for rr in range(n_dst)])
        full = [[rows[r][j] for j in range(n_mid)] + [col[r] for col in aug_cols]
                for r in range(n_dst)]
        mat = IntMatrix.from_rows(full, cols=n_mid + len(aug_cols)) if full else \
            IntMatrix.zeros(0, n_mid + len(aug_cols))
        from .exactalg import kernel_basis
        kernel_cols = [list(v[:n_mid]) for v in kernel_basis(mat)]

    lat_a = image + rel
    lat_b = kernel_cols + rel
    return _lattice_contained(lat_a, lat_b, n_mid) and _lattice_contained(lat_b, lat_a, n_mid)


def _lattice_contained(gens_a: list, gens_b: list, n: int) -> bool:
    if not gens_a:
        return True
    if not gens_b:
        return all(all(v == 0 for v in g) for g in gens_a)
    bmat = IntMatrix.from_rows([[g[i] for g in gens_b] for i in range(n)], cols=len(gens_b))
    for g in gens_a:
        try:
            solve_integer(bmat, g)
        except NoSolution:
            return False
    return True
