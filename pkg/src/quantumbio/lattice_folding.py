"""Polypeptide backbones folded on the diamond lattice.

Geometry
--------
Coordinates are in units where a bond vector is ``(+-1, +-1, +-1)``, so a
bond has length ``sqrt(3)``. Sublattice A sites sit on the FCC points (all
coordinates even, coordinate sum divisible by 4); a B site is its cell's A
point shifted by ``(1, 1, 1)``. Bonds leaving an A site are the four
``(+-1, +-1, +-1)`` with an even number of minus signs; bonds leaving a B
site are their negatives.

Chains
------
A chain starts from a fixed three-site seed, which is one peptide unit. Each
further unit adds two bonds. The first bond is chosen by the ``phi`` torsion
and the second by ``psi``. Each torsion picks one of the three
non-backtracking continuations. On the lattice these are exactly the
staggered dihedrals -60, +60 and 180 degrees, and the index order follows
that list. A ``CIS`` unit swaps the continuation set for its first bond to
the eclipsed one (dihedrals 0, +-120). This is the local switch to the
hexagonal stacking, and the chain leaves the integer lattice from there on.
Self-avoidance is then checked on coordinates rounded to ``1e-6``.
"""

from __future__ import annotations

import enum
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

STAR_ANGLES = (-60.0, 60.0, 180.0)
ECLIPSED_OFFSET = 180.0
TETRAHEDRAL_ANGLE = math.degrees(math.acos(-1.0 / 3.0))
DEFAULT_CAP = 12
KEY_DIGITS = 6

Vec = tuple[float, float, float]

A_BONDS: tuple[Vec, ...] = ((1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1))
B_BONDS: tuple[Vec, ...] = tuple((-x, -y, -z) for x, y, z in A_BONDS)

SEED_POSITIONS: tuple[Vec, ...] = ((0, 0, 0), (1, 1, 1), (0, 2, 2))


class Sublattice(str, enum.Enum):
    A = "A"
    B = "B"


class Omega(str, enum.Enum):
    TRANS = "trans"
    CIS = "cis"


class CollisionError(ValueError):
    def __init__(self, site: Vec, index: int):
        super().__init__(f"chain revisits site {site} (new site index {index})")
        self.site = site
        self.index = index


class EnumerationCapError(RuntimeError):
    pass


class OffLatticeError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class DiamondSite:
    cell: tuple[int, int, int]
    sublattice: Sublattice = Sublattice.A

    def __post_init__(self) -> None:
        cell = tuple(int(c) for c in self.cell)
        if len(cell) != 3 or any(c % 2 for c in cell) or sum(cell) % 4:
            raise ValueError(f"{self.cell} is not an FCC cell point")
        object.__setattr__(self, "cell", cell)
        object.__setattr__(self, "sublattice", Sublattice(self.sublattice))

    @property
    def position(self) -> tuple[int, int, int]:
        if self.sublattice is Sublattice.A:
            return self.cell
        x, y, z = self.cell
        return (x + 1, y + 1, z + 1)

    @property
    def bonds(self) -> tuple[Vec, ...]:
        return A_BONDS if self.sublattice is Sublattice.A else B_BONDS

    @classmethod
    def at(cls, position: Sequence[float]) -> "DiamondSite":
        """Site at an integer lattice position."""
        rounded = tuple(int(round(c)) for c in position)
        if any(abs(c - r) > 1e-9 for c, r in zip(position, rounded)):
            raise OffLatticeError(f"{tuple(position)} is not a diamond lattice position")
        x, y, z = rounded
        for sub, cell in ((Sublattice.A, (x, y, z)), (Sublattice.B, (x - 1, y - 1, z - 1))):
            if not any(c % 2 for c in cell) and sum(cell) % 4 == 0:
                return cls(cell, sub)
        raise OffLatticeError(f"{tuple(position)} is not a diamond lattice position")


def neighbours(site: DiamondSite) -> tuple[DiamondSite, ...]:
    """The four nearest neighbours, all on the other sublattice."""
    x, y, z = site.position
    return tuple(DiamondSite.at((x + dx, y + dy, z + dz)) for dx, dy, dz in site.bonds)


@dataclass(frozen=True, order=True)
class TorsionChoice:
    phi_index: int
    psi_index: int
    omega: Omega = Omega.TRANS

    def __post_init__(self) -> None:
        for name in ("phi_index", "psi_index"):
            if getattr(self, name) not in (0, 1, 2):
                raise ValueError(f"{name} must be 0, 1 or 2")
        object.__setattr__(self, "omega", Omega(self.omega))

    @property
    def phi(self) -> float:
        return STAR_ANGLES[self.phi_index]

    @property
    def psi(self) -> float:
        return STAR_ANGLES[self.psi_index]

    def label(self) -> str:
        tag = "c" if self.omega is Omega.CIS else ""
        return f"{self.phi_index}{self.psi_index}{tag}"


def all_choices(allow_cis: bool = False) -> tuple[TorsionChoice, ...]:
    """Per-unit choices in lexicographic order (trans before cis at equal indices)."""
    omegas = (Omega.TRANS, Omega.CIS) if allow_cis else (Omega.TRANS,)
    return tuple(
        TorsionChoice(i, j, w) for i, j, w in itertools.product(range(3), range(3), omegas)
    )


# -- vector helpers on plain tuples (enumeration is tuple-bound for speed) --

def _add(a: Vec, b: Vec) -> Vec:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def _sub(a: Vec, b: Vec) -> Vec:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _neg(a: Vec) -> Vec:
    return (-a[0], -a[1], -a[2])


def _key(p: Vec) -> Vec:
    # +0.0 folds -0.0 into the same key
    return tuple(round(c, KEY_DIGITS) + 0.0 for c in p)


def _close(a: Vec, b: Vec) -> bool:
    return all(abs(x - y) < 1e-9 for x, y in zip(a, b))


def dihedral(p0, p1, p2, p3) -> float:
    """Signed dihedral angle in degrees, in (-180, 180]."""
    b1 = np.subtract(p1, p0)
    b2 = np.subtract(p2, p1)
    b3 = np.subtract(p3, p2)
    n1 = np.cross(b1, b2)
    n2 = np.cross(b2, b3)
    x = float(n1 @ n2)
    y = float(np.cross(n1, n2) @ b2) / float(np.linalg.norm(b2))
    angle = math.degrees(math.atan2(y, x))
    return 180.0 if angle <= -180.0 + 1e-9 else angle


def _circ(a: float, b: float) -> float:
    d = abs(a - b) % 360.0
    return min(d, 360.0 - d)


def _snap_tuple(values) -> Vec:
    # integer-valued components stay exact, so trans-only chains never drift
    out = []
    for v in values:
        r = round(v)
        out.append(float(r) if abs(v - r) < 1e-12 else float(v))
    return tuple(out)


@lru_cache(maxsize=None)
def _ordered_continuations(prev_bond: Vec, bond: Vec, tet: tuple[Vec, ...], eclipsed: bool) -> tuple[Vec, ...]:
    """Next-bond candidates from ``tet`` ordered by torsion index.

    ``tet`` is the tetrahedron at the chain end and contains ``-bond``.
    Candidate ``k`` has dihedral ``STAR_ANGLES[k]``, or that angle plus 180
    degrees for an eclipsed set.
    """
    back = _neg(bond)
    cands = [d for d in tet if not _close(d, back)]
    if len(cands) != 3:
        raise AssertionError("end tetrahedron does not contain the incoming bond")
    p0 = (0.0, 0.0, 0.0)
    p1 = prev_bond
    p2 = _add(p1, bond)
    offset = ECLIPSED_OFFSET if eclipsed else 0.0
    ordered = []
    for angle in STAR_ANGLES:
        want = angle + offset
        match = [c for c in cands if _circ(dihedral(p0, p1, p2, _add(p2, c)), want) < 1e-6]
        if len(match) != 1:
            raise AssertionError(f"no unique continuation at dihedral {want}")
        ordered.append(match[0])
    return tuple(ordered)


def _eclipse(bond: Vec, tet: tuple[Vec, ...]) -> tuple[Vec, ...]:
    """Mirror the three forward bonds of ``tet`` through the plane normal to ``bond``."""
    back = _neg(bond)
    out = [back]
    for c in tet:
        if _close(c, back):
            continue
        # reflection of the staggered partner: (2/3) b - c for |b|^2 = 3
        out.append(_snap_tuple(2.0 / 3.0 * b - x for b, x in zip(bond, c)))
    return tuple(out)


@dataclass(frozen=True)
class ChainConformation:
    """A backbone: seed unit plus one ``TorsionChoice`` per further unit.

    ``positions`` holds every backbone site in lattice units; a chain of
    ``n`` units has ``2n + 1`` sites. ``end_tetrahedron`` is the set of bond
    directions at the last site (bookkeeping for further extension).
    """

    choices: tuple[TorsionChoice, ...] = ()
    positions: tuple[Vec, ...] = ()
    end_tetrahedron: tuple[Vec, ...] = field(default=(), repr=False, compare=False)

    @property
    def length_units(self) -> int:
        return 0 if not self.positions else 1 + len(self.choices)

    @property
    def is_empty(self) -> bool:
        return not self.positions

    @property
    def sites(self) -> tuple[DiamondSite, ...]:
        """Positions as lattice sites; raises ``OffLatticeError`` after a cis switch."""
        return tuple(DiamondSite.at(p) for p in self.positions)


def seed_chain() -> ChainConformation:
    pos = tuple(tuple(float(c) for c in p) for p in SEED_POSITIONS)
    # last seed site is on sublattice A
    return ChainConformation((), pos, tuple(tuple(float(c) for c in d) for d in A_BONDS))


def empty_chain() -> ChainConformation:
    return ChainConformation()


def _unit_steps(
    prev_bond: Vec, bond: Vec, tet: tuple[Vec, ...], choice: TorsionChoice
) -> tuple[Vec, Vec, tuple[Vec, ...]]:
    """The phi and psi bond vectors for one unit and the resulting end tetrahedron."""
    eclipsed = choice.omega is Omega.CIS
    if eclipsed:
        tet = _eclipse(bond, tet)
    phi_bond = _ordered_continuations(prev_bond, bond, tet, eclipsed)[choice.phi_index]
    tet = tuple(_neg(d) for d in tet)
    psi_bond = _ordered_continuations(bond, phi_bond, tet, False)[choice.psi_index]
    tet = tuple(_neg(d) for d in tet)
    return phi_bond, psi_bond, tet


def extend_chain(conf: ChainConformation, choice: TorsionChoice) -> ChainConformation:
    """Append one peptide unit.

    On an empty chain this returns the canonical seed and ``choice`` is
    ignored, since the first unit's orientation is quotiented out. Raises
    ``CollisionError`` if a new site coincides with an existing one.
    """
    if conf.is_empty:
        return seed_chain()
    pos = conf.positions
    prev_bond = _sub(pos[-2], pos[-3])
    bond = _sub(pos[-1], pos[-2])
    phi_bond, psi_bond, tet = _unit_steps(prev_bond, bond, conf.end_tetrahedron, choice)
    occupied = {_key(p) for p in pos}
    p1 = _snap_tuple(_add(pos[-1], phi_bond))
    if _key(p1) in occupied:
        raise CollisionError(p1, len(pos))
    p2 = _snap_tuple(_add(p1, psi_bond))
    if _key(p2) in occupied:
        raise CollisionError(p2, len(pos) + 1)
    return ChainConformation(conf.choices + (choice,), pos + (p1, p2), tet)


def build_chain(choices: Sequence[TorsionChoice]) -> ChainConformation:
    conf = seed_chain()
    for c in choices:
        conf = extend_chain(conf, c)
    return conf


@dataclass(frozen=True)
class Enumeration:
    count: int
    conformations: tuple[ChainConformation, ...] | None = None


def _dfs(
    positions: list[Vec],
    occupied: set[Vec],
    tet: tuple[Vec, ...],
    choices: list[TorsionChoice],
    remaining: int,
    options: tuple[TorsionChoice, ...],
    collect: list | None,
) -> int:
    if remaining == 0:
        if collect is not None:
            collect.append(ChainConformation(tuple(choices), tuple(positions), tet))
        return 1
    prev_bond = _sub(positions[-2], positions[-3])
    bond = _sub(positions[-1], positions[-2])
    total = 0
    for choice in options:
        phi_bond, psi_bond, new_tet = _unit_steps(prev_bond, bond, tet, choice)
        p1 = _snap_tuple(_add(positions[-1], phi_bond))
        k1 = _key(p1)
        if k1 in occupied:
            continue
        p2 = _snap_tuple(_add(p1, psi_bond))
        k2 = _key(p2)
        if k2 in occupied or k2 == k1:
            continue
        positions.extend((p1, p2))
        occupied.add(k1)
        occupied.add(k2)
        choices.append(choice)
        total += _dfs(positions, occupied, new_tet, choices, remaining - 1, options, collect)
        choices.pop()
        occupied.discard(k1)
        occupied.discard(k2)
        del positions[-2:]
    return total


def _subtree(args: tuple[int, bool, int, bool]) -> tuple[int, list | None]:
    n_units, allow_cis, first, collect = args
    options = all_choices(allow_cis)
    seed = seed_chain()
    try:
        start = extend_chain(seed, options[first])
    except CollisionError:
        return 0, ([] if collect else None)
    positions = list(start.positions)
    occupied = {_key(p) for p in positions}
    out: list | None = [] if collect else None
    count = _dfs(positions, occupied, start.end_tetrahedron, [options[first]], n_units - 2, options, out)
    return count, out


def enumerate_conformations(
    n_units: int,
    allow_cis: bool = False,
    *,
    collect: bool = False,
    cap: int = DEFAULT_CAP,
    threads: int = 1,
) -> Enumeration:
    """Exhaustive depth-first count of self-avoiding conformations.

    Conformations come out in lexicographic order of their choice sequences.
    With ``threads > 1`` the subtrees under the second unit's choice are
    farmed out to worker processes and reassembled in order, so the result
    is identical to the serial run.
    """
    if n_units < 1:
        raise ValueError(f"n_units must be >= 1, got {n_units}")
    if n_units > cap:
        raise EnumerationCapError(f"n_units={n_units} exceeds the enumeration cap of {cap}")
    if n_units == 1:
        seed = seed_chain()
        return Enumeration(1, (seed,) if collect else None)

    jobs = [(n_units, allow_cis, k, collect) for k in range(len(all_choices(allow_cis)))]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_subtree, jobs))
    else:
        results = [_subtree(j) for j in jobs]
    count = sum(c for c, _ in results)
    confs = tuple(itertools.chain.from_iterable(r for _, r in results)) if collect else None
    return Enumeration(count, confs)


def iter_conformations(n_units: int, allow_cis: bool = False, cap: int = DEFAULT_CAP) -> Iterator[ChainConformation]:
    yield from enumerate_conformations(n_units, allow_cis, collect=True, cap=cap).conformations


def conformation_to_coordinates(conf: ChainConformation, bond_length: float = 1.0) -> np.ndarray:
    """Cartesian coordinates, seed at the origin, every bond ``bond_length`` long."""
    if bond_length <= 0:
        raise ValueError(f"bond_length must be positive, got {bond_length!r}")
    pos = np.array(conf.positions, dtype=float).reshape(-1, 3)
    if pos.size:
        pos = pos - pos[0]
    return pos * (bond_length / math.sqrt(3.0))


@dataclass(frozen=True)
class RamachandranPoint:
    phi_deg: float
    psi_deg: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "phi_deg", wrap_angle(self.phi_deg))
        object.__setattr__(self, "psi_deg", wrap_angle(self.psi_deg))


def wrap_angle(angle: float) -> float:
    """Map an angle in degrees into (-180, 180]."""
    a = math.fmod(float(angle), 360.0)
    if a <= -180.0:
        a += 360.0
    elif a > 180.0:
        a -= 360.0
    return a


def circular_distance(a: float, b: float) -> float:
    return _circ(a, b)


def discretize_angles(pt: RamachandranPoint) -> tuple[TorsionChoice, float]:
    """Nearest star point under ``max(d_phi, d_psi)`` with periodic distances.

    Ties go to the lexicographically smallest ``(phi_index, psi_index)``.
    """
    d_phi = [_circ(pt.phi_deg, s) for s in STAR_ANGLES]
    d_psi = [_circ(pt.psi_deg, s) for s in STAR_ANGLES]
    best, best_d = (0, 0), math.inf
    for i in range(3):
        for j in range(3):
            d = max(d_phi[i], d_psi[j])
            if d < best_d:
                best, best_d = (i, j), d
    return TorsionChoice(*best), best_d


def write_coordinates_text(coords: np.ndarray) -> str:
    """One ``index x y z`` line per site."""
    return "".join(f"{i} {x!r} {y!r} {z!r}\n" for i, (x, y, z) in enumerate(coords.tolist()))


def write_xyz(coords: np.ndarray, comment: str = "") -> str:
    """XYZ block with every atom written as carbon."""
    lines = [str(len(coords)), comment.replace("\n", " ")]
    lines += [f"C {x:.10f} {y:.10f} {z:.10f}" for x, y, z in coords.tolist()]
    return "\n".join(lines) + "\n"
