"""The rank-18 geometric Picard lattice of the F3 family and its Galois cohomology.

Curve catalogue (c denotes sqrt(alpha) * sqrt(alphabar)):

* ``D1..D3``: fibres x_i = const of the three projections.
* ``lij<e><d>``: the line x_i = e sqrt(alpha), x_j = d sqrt(alphabar).
* ``Lij<e><d>``: its conjugate x_i = e sqrt(alphabar), x_j = d sqrt(alpha).
* ``Ci<e><d>``: the component x_i = e sqrt(-1)/2, x_j x_k = d c of a singular fibre.

Here alpha, alphabar = ((4k-1)/8 +- sqrt(Delta))/2 with
Delta = ((4k-5)^2 - 32)/64 are the roots of T^2 - (4k-1)/8 T + (4k+1)/32; only
their Galois behaviour enters the computation. ``Ai`` and ``Bi`` (the other
fibre names) are the same classes as ``Di``.

Matrices act on column vectors of coordinates over the basis; the column of
a generator matrix at a basis class is the expansion of its image.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from .smith import (
    AbelianGroup,
    Matrix,
    cokernel,
    determinant,
    identity,
    kernel_basis,
    matmul,
    quotient,
    smith_normal_form,
    solve,
    transpose,
)

BASIS: tuple[str, ...] = (
    "D1", "D2", "D3", "l12++", "l12+-", "l13++", "l23++", "l12-+", "l13-+", "l23--",
    "L12++", "L12+-", "L13++", "L23++", "L12-+", "L13-+", "C1+-", "C2+-",
)

GRAM_TEXT = """
 0  2  2  0  0  0  1  0  0  1  0  0  0  1  0  0  0  1
 2  0  2  0  0  1  0  0  1  0  0  0  1  0  0  1  1  0
 2  2  0  1  1  0  0  1  0  0  1  1  0  0  1  0  1  1
 0  0  1 -2  0  1  0  0  0  0  0  0  0  1  0  0  0  0
 0  0  1  0 -2  1  0  0  0  0  0  0  0  0  0  0  0  0
 0  1  0  1  1 -2  1  0  0  0  0  0  0  0  0  0  0  0
 1  0  0  0  0  1 -2  0  1  0  1  0  0  0  1  0  0  0
 0  0  1  0  0  0  0 -2  1  0  0  0  0  1  0  0  0  0
 0  1  0  0  0  0  1  1 -2  0  0  0  0  0  0  0  0  1
 1  0  0  0  0  0  0  0  0 -2  0  1  0  0  0  0  0  0
 0  0  1  0  0  0  1  0  0  0 -2  0  1  0  0  0  0  0
 0  0  1  0  0  0  0  0  0  1  0 -2  1  0  0  0  0  0
 0  1  0  0  0  0  0  0  0  0  1  1 -2  1  0  0  0  0
 1  0  0  1  0  0  0  1  0  0  0  0  1 -2  0  1  0  0
 0  0  1  0  0  0  1  0  0  0  0  0  0  0 -2  1  0  0
 0  1  0  0  0  0  0  0  0  0  0  0  0  1  1 -2  0  1
 0  1  1  0  0  0  0  0  0  0  0  0  0  0  0  0 -2  1
 1  0  1  0  0  0  0  0  1  0  0  0  0  0  0  1  1 -2
"""

# published expansions of eleven further curves over BASIS
EXPANSION_TABLE: dict[str, tuple[int, ...]] = {
    "L12--": (0, 1, -1, 0, 0, 1, 1, 0, 1, -1, 0, -1, 0, 0, 0, 0, 0, 0),
    "l12--": (2, 1, -1, -1, -1, -1, -1, -1, -1, 1, -1, 0, 0, 0, -1, 0, 0, 0),
    "L23--": (-2, 0, 0, 1, 0, 1, 1, 1, 1, -1, 1, 0, 1, 1, 1, 1, 0, 0),
    "l13--": (-1, -1, 1, 1, 1, 1, 1, 0, 0, -1, 1, 0, 0, 0, 1, 0, 0, 0),
    "L13--": (1, -1, 1, 0, 0, -1, -1, 0, -1, 1, 0, 1, 0, 0, -1, -1, 0, 0),
    "l13+-": (1, 0, 0, -1, -1, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    "L13+-": (1, 0, 0, 0, 0, 0, 0, 0, 0, 0, -1, -1, -1, 0, 0, 0, 0, 0),
    "l23+-": (0, 1, 0, 0, 0, 0, -1, 0, 0, 0, -1, 0, 0, 0, -1, 0, 0, 0),
    "L23+-": (0, 1, 0, -1, 0, 0, 0, -1, 0, 0, 0, 0, 0, -1, 0, 0, 0, 0),
    "l23-+": (0, 0, 1, 0, 0, -1, -1, 0, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    "L23-+": (0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, -1, -1, 0, -1, 0, 0),
}

# the published 16 x 16 block of sigma on the first sixteen basis classes
DISPLAYED_SIGMA_BLOCK_TEXT = """
 1  0  0  0  0  0  0  0  0  0  0  0  0  0  0  0
 0  1  0  0  0  0  0  0  0  0  0  0  0  0  0  0
 0  0  1  0  0  0  0  0  0  0  0  0  0  0  0  0
 0  0  0  0  0  0  0  1  0  0  0  0  0  0  0  0
 0  0  0  0  0  0  1  0  0  0  0  0  0  0  0  0
 1  0  0  0  0  0 -1 -1  0  0  0 -1  0  0  0  0
 0  1  0 -1  0 -1  0  0  0  0  0  0  0  0  0 -1
 0  1 -1  0  0  0  0 -1  0  1  1  0  0  1 -1  0
 1 -1  1  0  0  0  0  1 -1 -1 -1  0 -1 -1  1  0
 0  0  1  0  0  0  0  0  0  0  0 -1 -1  0  0 -1
 0  0  0  0  0  1  0  0  0  0  0  0  0  0  0  0
 2  1 -1 -1 -1 -1 -1  0 -1 -1 -1  0  0 -1  1  0
 0  0  0  0  0  0  0  0  0  0  1  0  0  0  0  0
 0  0  1  0  0  0  0  0  0 -1 -1  0  0 -1  0  0
 0  0  0  1  0  0  0  0  0  0  0  0  0  0  0  0
 0  0  0  0  0  0  0  0  0  1  0  0  0  0  0  0
"""

ALTERNATIVE_BASIS: tuple[str, ...] = (
    "D1", "l23++", "l12++", "l12+-", "l13+-", "l12--", "l12-+", "l13--", "L12++", "L12+-",
    "L13+-", "L12--", "L12-+", "L13--", "L23++", "l23+-", "C2+-", "C3+-",
)

# published generators of kernels, as label -> coefficient maps
CLAIMED_KERNELS: dict[str, list[dict[str, int]]] = {
    "ker(1+rho)": [{"C1+-": 1, "C1--": -1}, {"C2+-": 1, "C2--": -1}],
    "ker(1-rho)": [{b: 1} for b in BASIS[:16]],
    "ker(norm sigma) on rho-invariants": [
        {"D1": 1, "L12-+": -1, "L12++": -1, "L13++": -1, "L13-+": -1},
        {"D2": 1, "L12-+": -1, "L12++": -1, "l23--": -1, "L23++": -1},
        {"D3": 1, "L13++": -1, "L13-+": -1, "l23--": -1, "L23++": -1},
        {"l12++": 1, "L12-+": -1},
        {"l12+-": 1, "L12++": -1},
        {"l12-+": 1, "L12++": -1},
        {"L12+-": 1, "L12-+": -1},
        {"l13++": 1, "L13-+": -1},
        {"l13-+": 1, "L13++": -1},
        {"l23++": 1, "l23--": -1},
    ],
    "ker(1-sigma) on rho-invariants": [
        {"D1": 1},
        {"D2": 1},
        {"D3": 1},
        {"l12+-": 1, "l12++": 1, "L12+-": -1, "L12-+": 1, "l13++": 2, "L13++": -1, "L13-+": 1, "l23++": 1, "l23--": -1},
        {"l12-+": 1, "l12++": 1, "L13++": 1, "L13-+": 1, "l23++": -1, "l23--": -1, "L23++": 2},
        {"L12++": 1, "l12++": -2, "L12-+": -1, "l13++": -1, "l13-+": 1, "L13-+": -2, "l23++": 1, "l23--": 1, "L23++": -2},
    ],
}

# involutions of the three double covers on span(D1, D2, D3), columns = images
INVOLUTIONS_3X3: dict[str, Matrix] = {
    "sigma1": [[-1, 0, 0], [2, 1, 0], [2, 0, 1]],
    "sigma2": [[1, 2, 0], [0, -1, 0], [0, 2, 1]],
    "sigma3": [[1, 0, 2], [0, 1, 2], [0, 0, -1]],
}

FIBRE_FORM_3X3: Matrix = [[0, 2, 2], [2, 0, 2], [2, 2, 0]]


def _parse(text: str) -> Matrix:
    return [[int(t) for t in line.split()] for line in text.strip().splitlines()]


# ---------------------------------------------------------------------------
# curve geometry


@dataclass(frozen=True)
class Curve:
    kind: str  # "D", "L" (a line or a conjugate line) or "C"
    index: int = -1  # fibre coordinate for D and C
    fixed: tuple[tuple[int, str, int], ...] = ()  # (coordinate, symbol a|b, sign) for lines
    eps: int = 0
    delta: int = 0


def _sign(ch: str) -> int:
    return 1 if ch == "+" else -1


def _sign_char(s: int) -> str:
    return "+" if s > 0 else "-"


@lru_cache(maxsize=None)
def catalogue() -> dict[str, Curve]:
    cat: dict[str, Curve] = {}
    for i in range(3):
        cat[f"D{i + 1}"] = Curve("D", i)
    for i, j in ((0, 1), (0, 2), (1, 2)):
        for e, d in itertools.product("+-", repeat=2):
            cat[f"l{i + 1}{j + 1}{e}{d}"] = Curve("L", fixed=((i, "a", _sign(e)), (j, "b", _sign(d))))
            cat[f"L{i + 1}{j + 1}{e}{d}"] = Curve("L", fixed=((i, "b", _sign(e)), (j, "a", _sign(d))))
    for i in range(3):
        for e, d in itertools.product("+-", repeat=2):
            cat[f"C{i + 1}{e}{d}"] = Curve("C", i, eps=_sign(e), delta=_sign(d))
    return cat


ALIASES = {f"{p}{i}": f"D{i}" for p in "AB" for i in (1, 2, 3)}


def normalize_label(label: str) -> str:
    label = ALIASES.get(label, label)
    if label not in catalogue():
        raise KeyError(f"unknown divisor label {label!r}")
    return label


def geometric_pairing(a: str, b: str) -> int:
    """Intersection number of two catalogue curves from their equations."""
    a, b = normalize_label(a), normalize_label(b)
    ca, cb = catalogue()[a], catalogue()[b]
    if a == b:
        return 0 if ca.kind == "D" else -2
    order = {"C": 0, "D": 1, "L": 2}
    if order[ca.kind] > order[cb.kind]:
        ca, cb = cb, ca
    if ca.kind == "D" and cb.kind == "D":
        return 2
    if ca.kind == "D" and cb.kind == "L":
        return 0 if ca.index in {f[0] for f in cb.fixed} else 1
    if ca.kind == "C" and cb.kind == "D":
        return 0 if ca.index == cb.index else 1
    if ca.kind == "L" and cb.kind == "L":
        fa = {f[0]: f[1:] for f in ca.fixed}
        fb = {f[0]: f[1:] for f in cb.fixed}
        if set(fa) == set(fb):
            return 0
        (common,) = set(fa) & set(fb)
        return 1 if fa[common] == fb[common] else 0
    if ca.kind == "C" and cb.kind == "L":
        coords = {f[0] for f in cb.fixed}
        if ca.index in coords:
            return 0
        prod = cb.fixed[0][2] * cb.fixed[1][2]
        return 1 if prod == ca.delta else 0
    if ca.kind == "C" and cb.kind == "C":
        if ca.index == cb.index:
            return 2 if ca.eps == cb.eps else 0
        return 1 if ca.eps * ca.delta == cb.eps * cb.delta else 0
    raise AssertionError((a, b))


# ---------------------------------------------------------------------------
# Galois action on the catalogue


def galois_image(g: str, label: str) -> str:
    """Image of a curve under sigma, tau or rho.

    sigma: sqrt(alpha) -> sqrt(alphabar) -> -sqrt(alpha), i fixed (so c -> -c);
    tau: sqrt(alphabar) -> -sqrt(alphabar), sqrt(alpha) fixed (c -> -c);
    rho: complex conjugation on i, c fixed.
    """
    label = normalize_label(label)
    cv = catalogue()[label]
    if cv.kind == "D":
        return label
    if cv.kind == "L":
        new = []
        for coord, sym, s in cv.fixed:
            if g == "sigma":
                new.append((coord, "b", s) if sym == "a" else (coord, "a", -s))
            elif g == "tau":
                new.append((coord, sym, s if sym == "a" else -s))
            elif g == "rho":
                new.append((coord, sym, s))
            else:
                raise KeyError(g)
        (i, si, ei), (j, sj, ej) = new
        prefix = "l" if si == "a" else "L"
        return f"{prefix}{i + 1}{j + 1}{_sign_char(ei)}{_sign_char(ej)}"
    if g in ("sigma", "tau"):
        return f"C{cv.index + 1}{_sign_char(cv.eps)}{_sign_char(-cv.delta)}"
    if g == "rho":
        return f"C{cv.index + 1}{_sign_char(-cv.eps)}{_sign_char(cv.delta)}"
    raise KeyError(g)


# ---------------------------------------------------------------------------
# the lattice


class TranscriptionError(RuntimeError):
    pass


@dataclass(frozen=True)
class PicardLattice:
    basis: tuple[str, ...]
    gram: Matrix
    relations: dict[str, tuple[int, ...]] = field(repr=False)

    def expand(self, label: str) -> tuple[int, ...]:
        return self.relations[normalize_label(label)]

    def pair(self, u: Sequence[int], v: Sequence[int]) -> int:
        return sum(u[i] * self.gram[i][j] * v[j] for i in range(len(u)) for j in range(len(v)) if u[i] and v[j])

    def vector(self, combo: Mapping[str, int]) -> tuple[int, ...]:
        out = [0] * len(self.basis)
        for lab, c in combo.items():
            for i, x in enumerate(self.expand(lab)):
                out[i] += c * x
        return tuple(out)


def build_lattice() -> PicardLattice:
    """Transcribed Gram matrix, cross-checked against the curve geometry."""
    gram = _parse(GRAM_TEXT)
    if determinant(gram) != -48:
        raise TranscriptionError("Gram determinant is not -48")
    geo = [[geometric_pairing(a, b) for b in BASIS] for a in BASIS]
    if geo != gram:
        raise TranscriptionError("Gram matrix disagrees with the curve geometry")
    relations: dict[str, tuple[int, ...]] = {}
    for lab in catalogue():
        rhs = [[geometric_pairing(lab, b)] for b in BASIS]
        try:
            sol = solve(gram, rhs)
        except ValueError as exc:
            raise TranscriptionError(f"{lab} has no integral expansion") from exc
        relations[lab] = tuple(r[0] for r in sol)
    return PicardLattice(BASIS, gram, relations)


@lru_cache(maxsize=1)
def lattice() -> PicardLattice:
    return build_lattice()


def expand(label: str) -> tuple[int, ...]:
    return lattice().expand(label)


def signature(gram: Matrix) -> tuple[int, int]:
    ev = np.linalg.eigvalsh(np.array(gram, dtype=float))
    return int((ev > 1e-9).sum()), int((ev < -1e-9).sum())


def gram_of(labels: Sequence[str], lat: PicardLattice | None = None) -> Matrix:
    lat = lat or lattice()
    vecs = [lat.expand(x) for x in labels]
    return [[lat.pair(u, v) for v in vecs] for u in vecs]


def alternative_basis_report(lat: PicardLattice | None = None) -> dict[str, int]:
    lat = lat or lattice()
    cols = transpose([list(lat.expand(x)) for x in ALTERNATIVE_BASIS])
    return {"determinant": determinant(gram_of(ALTERNATIVE_BASIS, lat)), "index": abs(determinant(cols))}


def catalogue_consistency(lat: PicardLattice | None = None) -> list[tuple[str, str]]:
    """Pairs of catalogue curves whose lattice pairing differs from the geometry."""
    lat = lat or lattice()
    labels = list(catalogue())
    return [
        (a, b) for a in labels for b in labels if lat.pair(lat.expand(a), lat.expand(b)) != geometric_pairing(a, b)
    ]


def expansion_table_mismatches(lat: PicardLattice | None = None) -> dict[str, tuple[int, ...]]:
    lat = lat or lattice()
    return {lab: lat.expand(lab) for lab, row in EXPANSION_TABLE.items() if lat.expand(lab) != row}


def involution_isometry_check(matrices: Mapping[str, Matrix] | None = None) -> dict[str, bool]:
    """Each 3x3 matrix preserves the fibre form and squares to the identity."""
    matrices = matrices if matrices is not None else INVOLUTIONS_3X3
    out = {}
    for name, m in matrices.items():
        iso = matmul(matmul(transpose(m), FIBRE_FORM_3X3), m) == FIBRE_FORM_3X3
        out[name] = iso and matmul(m, m) == identity(3)
    return out


def is_isometry(m: Matrix, gram: Matrix) -> bool:
    return matmul(matmul(transpose(m), gram), m) == gram


# ---------------------------------------------------------------------------
# group action


GENERATORS = ("sigma", "tau", "rho")


@dataclass(frozen=True)
class GroupAction:
    """Matrices of sigma, tau, rho with sigma^4 = tau^2 = rho^2 = 1,
    tau sigma tau^-1 = sigma^-1 and rho central (a dihedral group of order 8 times Z/2)."""

    matrices: dict[str, Matrix]
    relators: tuple[tuple[tuple[str, int], ...], ...] = (
        (("sigma", 1),) * 4,
        (("tau", 1),) * 2,
        (("rho", 1),) * 2,
        (("tau", 1), ("sigma", 1), ("tau", -1), ("sigma", 1)),
        (("rho", 1), ("sigma", 1), ("rho", -1), ("sigma", -1)),
        (("rho", 1), ("tau", 1), ("rho", -1), ("tau", -1)),
    )

    @property
    def rank(self) -> int:
        return len(next(iter(self.matrices.values())))

    def inverse(self, g: str) -> Matrix:
        return solve(self.matrices[g], identity(self.rank))

    def word(self, w: Sequence[tuple[str, int]]) -> Matrix:
        out = identity(self.rank)
        for g, e in w:
            out = matmul(out, self.matrices[g] if e == 1 else self.inverse(g))
        return out

    def relations_hold(self) -> bool:
        return all(self.word(r) == identity(self.rank) for r in self.relators)

    def restrict(self, rows: slice) -> "GroupAction":
        return GroupAction({g: [row[rows] for row in m[rows]] for g, m in self.matrices.items()}, self.relators)

    def conjugate(self, p: Matrix) -> "GroupAction":
        pinv = solve(p, identity(len(p)))
        return GroupAction({g: matmul(matmul(pinv, m), p) for g, m in self.matrices.items()}, self.relators)

    def elements(self) -> dict[str, Matrix]:
        out = {}
        for a, b, c in itertools.product(range(4), range(2), range(2)):
            w = [("sigma", 1)] * a + [("tau", 1)] * b + [("rho", 1)] * c
            out[f"sigma^{a} tau^{b} rho^{c}"] = self.word(w)
        return out


def galois_action(lat: PicardLattice | None = None) -> GroupAction:
    lat = lat or lattice()
    mats = {}
    for g in GENERATORS:
        cols = [lat.expand(galois_image(g, b)) for b in lat.basis]
        mats[g] = transpose([list(c) for c in cols])
    return GroupAction(mats)


def open_part_action(lat: PicardLattice | None = None) -> GroupAction:
    """Action on the quotient by span(D1, D2, D3), i.e. on the last 15 coordinates."""
    act = galois_action(lat)
    for m in act.matrices.values():
        if any(m[i][j] for i in range(3, 18) for j in range(3)):
            raise ValueError("fibre span is not an invariant sublattice")
    return act.restrict(slice(3, 18))


@dataclass(frozen=True)
class FibreQuotient:
    rank: int
    torsion: tuple[int, ...]


def quotient_by_fibers(lat: PicardLattice | None = None, fibres: Sequence[str] = ("D1", "D2", "D3")) -> FibreQuotient:
    lat = lat or lattice()
    cols = transpose([list(lat.expand(f)) for f in fibres]) if fibres else [[] for _ in lat.basis]
    g = cokernel(cols, nrows=len(lat.basis))
    return FibreQuotient(g.free_rank, g.torsion)


# ---------------------------------------------------------------------------
# cohomology


@dataclass(frozen=True)
class CohomologyResult:
    factors: tuple[int, ...]

    @property
    def order(self) -> int:
        out = 1
        for f in self.factors:
            out *= f
        return out


def _matpow(m: Matrix, n: int) -> Matrix:
    out = identity(len(m))
    for _ in range(n):
        out = matmul(out, m)
    return out


def h1_cyclic(g: Matrix, n: int) -> CohomologyResult:
    """H^1 of the cyclic group generated by g (of order dividing n): ker(norm) / (1 - g)M."""
    size = len(g)
    if _matpow(g, n) != identity(size):
        raise ValueError(f"matrix does not have order dividing {n}")
    norm = [[0] * size for _ in range(size)]
    power = identity(size)
    for _ in range(n):
        norm = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(norm, power)]
        power = matmul(power, g)
    ker = kernel_basis(norm, size)
    if not ker or not ker[0]:
        return CohomologyResult(())
    one_minus = [[(1 if i == j else 0) - g[i][j] for j in range(size)] for i in range(size)]
    q = quotient(one_minus, ker)
    if q.free_rank:
        raise ArithmeticError("coboundaries do not have full rank in the norm kernel")
    return CohomologyResult(q.torsion)


def _fox_matrix(action: GroupAction) -> Matrix:
    n = action.rank
    idx = {g: i for i, g in enumerate(GENERATORS)}
    rows: Matrix = []
    for w in action.relators:
        blocks = [[[0] * n for _ in range(n)] for _ in GENERATORS]
        prefix = identity(n)
        for g, e in w:
            if e == 1:
                blk = blocks[idx[g]]
                for i in range(n):
                    for j in range(n):
                        blk[i][j] += prefix[i][j]
                prefix = matmul(prefix, action.matrices[g])
            else:
                prefix = matmul(prefix, action.inverse(g))
                blk = blocks[idx[g]]
                for i in range(n):
                    for j in range(n):
                        blk[i][j] -= prefix[i][j]
        for i in range(n):
            rows.append([v for b in blocks for v in b[i]])
    return rows


def h1_group(action: GroupAction) -> CohomologyResult:
    """H^1 from the presentation: cocycles are the integer solutions of the Fox
    derivative system of the relators, coboundaries the image of m -> (g - 1)m."""
    if not action.relations_hold():
        raise ValueError("group relations fail on this module")
    n = action.rank
    cocycles = kernel_basis(_fox_matrix(action), 3 * n)
    cob = []
    for g in GENERATORS:
        m = action.matrices[g]
        cob.extend([[m[i][j] - (1 if i == j else 0) for j in range(n)] for i in range(n)])
    if not cocycles or not cocycles[0]:
        return CohomologyResult(())
    q = quotient(cob, cocycles)
    if q.free_rank:
        raise ArithmeticError("H^1 of a finite group must be finite")
    return CohomologyResult(q.torsion)


def invariant_sublattice(ms: Sequence[Matrix]) -> Matrix:
    """Basis (columns) of the elements fixed by every matrix in ``ms``."""
    n = len(ms[0])
    rows = []
    for m in ms:
        rows.extend([[m[i][j] - (1 if i == j else 0) for j in range(n)] for i in range(n)])
    return kernel_basis(rows, n)


def restricted_matrix(g: Matrix, basis: Matrix) -> Matrix:
    """Matrix of g on the g-stable sublattice spanned by ``basis`` columns."""
    return solve(basis, matmul(g, basis))


def h1_sigma_on_rho_invariants(action: GroupAction) -> CohomologyResult:
    inv = invariant_sublattice([action.matrices["rho"]])
    return h1_cyclic(restricted_matrix(action.matrices["sigma"], inv), 4)


@dataclass(frozen=True)
class InflationRestriction:
    """0 -> H^1(G/H, M^H) -> H^1(G, M) -> H^1(H, M) for the subgroups used here."""

    h1_rho: CohomologyResult
    h1_sigma_on_rho_fixed: CohomologyResult
    h1_tau_on_sigma_rho_fixed: CohomologyResult
    lower_bound: int
    upper_bound: int


def inflation_restriction_bounds(action: GroupAction) -> InflationRestriction:
    """Order bounds for H^1(G, M) along rho, then sigma, then tau.

    When H^1(rho, M) = 0, inflation identifies H^1(G, M) with H^1(G/rho, M^rho),
    which sits between H^1(tau, M^{sigma, rho}) and that group times
    H^1(sigma, M^rho).
    """
    s, t, r = (action.matrices[g] for g in GENERATORS)
    h_rho = h1_cyclic(r, 2)
    h_sigma = h1_sigma_on_rho_invariants(action)
    fixed = invariant_sublattice([r, s])
    h_tau = h1_cyclic(restricted_matrix(t, fixed), 2) if fixed and fixed[0] else CohomologyResult(())
    lower = h_tau.order
    upper = h_tau.order * h_sigma.order
    if h_rho.factors:
        upper *= h_rho.order
    return InflationRestriction(h_rho, h_sigma, h_tau, lower, upper)


# ---------------------------------------------------------------------------
# half-sums and the index argument


@dataclass(frozen=True)
class HalfSumCandidate:
    labels: tuple[str, ...]
    self_intersection: int
    even: bool
    verdict: str
    rewrite: tuple[str, ...] | None = None


def _f2_nullspace(rows: list[int], n: int) -> list[int]:
    """Nullspace over F_2 of a matrix given by row bitmasks."""
    pivots: dict[int, int] = {}
    reduced: list[tuple[int, int]] = []
    for r in rows:
        for col, pr in reduced:
            if r >> col & 1:
                r ^= pr
        if r:
            col = (r & -r).bit_length() - 1
            reduced = [(c, p ^ r if p >> col & 1 else p) for c, p in reduced]
            reduced.append((col, r))
    pivots = dict(reduced)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = 1 << f
        for col, pr in pivots.items():
            if pr >> f & 1:
                v |= 1 << col
        basis.append(v)
    return basis


def half_sum_patterns(gram: Matrix) -> list[tuple[int, ...]]:
    """Nonzero 0/1 patterns a with (1/2) sum a_i E_i pairing integrally with the basis,
    i.e. the nonzero kernel of the Gram matrix mod 2."""
    n = len(gram)
    rows = [sum((gram[i][j] & 1) << j for j in range(n)) for i in range(n)]
    basis = _f2_nullspace(rows, n)
    out = []
    for coeffs in itertools.product((0, 1), repeat=len(basis)):
        v = 0
        for c, b in zip(coeffs, basis):
            if c:
                v ^= b
        if v:
            out.append(tuple(v >> i & 1 for i in range(n)))
    return sorted(out, reverse=True)


def half_sum_patterns_bruteforce(gram: Matrix) -> list[tuple[int, ...]]:
    """All 2^n patterns checked directly; independent of the F_2 elimination."""
    g = np.array(gram, dtype=np.int64) % 2
    n = len(gram)
    masks = np.arange(1, 1 << n, dtype=np.int64)
    bits = (masks[:, None] >> np.arange(n)) & 1
    ok = ~(((bits @ g.T) % 2).any(axis=1))
    return sorted((tuple(int(b) for b in row) for row in bits[ok]), reverse=True)


def _disjoint_rewrite(pattern: Sequence[int], lat: PicardLattice, size: int = 4) -> tuple[str, ...] | None:
    """Pairwise disjoint (-2)-curves whose classes sum to the pattern mod 2."""
    curves = [c for c in catalogue() if catalogue()[c].kind != "D"]
    vecs = {c: lat.expand(c) for c in curves}
    target = tuple(x % 2 for x in pattern)
    disjoint = {(a, b) for a in curves for b in curves if a != b and geometric_pairing(a, b) == 0}
    for combo in itertools.combinations(curves, size):
        if all((a, b) in disjoint for a, b in itertools.combinations(combo, 2)):
            s = tuple(sum(vecs[c][i] for c in combo) % 2 for i in range(len(target)))
            if s == target:
                return combo
    return None


def sublattice_index_check(lat: PicardLattice | None = None) -> list[HalfSumCandidate]:
    """Classify every half-sum that pairs integrally with the basis.

    A genuine class must have even square (the lattice is even). Even
    candidates that can be rewritten through four disjoint (-2)-curves are
    excluded by Nikulin's lemma, which is cited and not re-proven here.
    """
    lat = lat or lattice()
    out = []
    for a in half_sum_patterns(lat.gram):
        sq4 = lat.pair(a, a)
        if sq4 % 4:
            raise ArithmeticError("half-sum square is not an integer")
        e2 = sq4 // 4
        labels = tuple(b for b, x in zip(lat.basis, a) if x)
        if e2 % 2:
            out.append(HalfSumCandidate(labels, e2, False, "excluded: odd square in an even lattice"))
            continue
        rewrite = _disjoint_rewrite(a, lat)
        verdict = "excluded per Nikulin (four disjoint rational curves)" if rewrite else "not excluded"
        out.append(HalfSumCandidate(labels, e2, True, verdict, rewrite))
    return out


# ---------------------------------------------------------------------------
# comparison with the published data


@dataclass(frozen=True)
class SigmaBlockComparison:
    equals_reconstruction: bool
    equals_transpose: bool
    closest_group_element: str
    closest_distance: int
    displayed_order_four: bool
    displayed_is_isometry: bool
    displayed_determinant: int


def displayed_sigma_block() -> Matrix:
    return _parse(DISPLAYED_SIGMA_BLOCK_TEXT)


def compare_sigma_block(action: GroupAction | None = None, lat: PicardLattice | None = None) -> SigmaBlockComparison:
    lat = lat or lattice()
    action = action or galois_action(lat)
    shown = displayed_sigma_block()
    ours = [row[:16] for row in action.matrices["sigma"][:16]]
    best = ("", 10**9)
    for name, m in action.elements().items():
        for tr in (False, True):
            mm = [row[:16] for row in m[:16]]
            if tr:
                mm = transpose(mm)
            d = sum(1 for i in range(16) for j in range(16) if mm[i][j] != shown[i][j])
            if d < best[1]:
                best = (name + (" transposed" if tr else ""), d)
    g16 = [row[:16] for row in lat.gram[:16]]
    return SigmaBlockComparison(
        ours == shown,
        transpose(ours) == shown,
        best[0],
        best[1],
        _matpow(shown, 4) == identity(16),
        is_isometry(shown, g16),
        determinant(shown),
    )


@dataclass(frozen=True)
class KernelClaim:
    name: str
    generators_in_kernel: bool
    spans_kernel: bool
    kernel_rank: int


def _kernel_for(name: str, action: GroupAction) -> tuple[Matrix, Matrix]:
    """(kernel basis in full coordinates, ambient basis used for the comparison)."""
    s, r = action.matrices["sigma"], action.matrices["rho"]
    n = action.rank
    eye = identity(n)
    if name == "ker(1+rho)":
        m = [[eye[i][j] + r[i][j] for j in range(n)] for i in range(n)]
        return kernel_basis(m, n), eye
    if name == "ker(1-rho)":
        return invariant_sublattice([r]), eye
    fixed = invariant_sublattice([r])
    sig = restricted_matrix(s, fixed)
    k = len(sig)
    if name == "ker(norm sigma) on rho-invariants":
        norm = [[0] * k for _ in range(k)]
        p = identity(k)
        for _ in range(4):
            norm = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(norm, p)]
            p = matmul(p, sig)
        ker = kernel_basis(norm, k)
    else:
        ker = invariant_sublattice([sig])
    return matmul(fixed, ker), eye


def check_claimed_kernels(
    claims: Mapping[str, list[dict[str, int]]] | None = None, action: GroupAction | None = None
) -> list[KernelClaim]:
    lat = lattice()
    action = action or galois_action(lat)
    claims = claims if claims is not None else CLAIMED_KERNELS
    out = []
    for name, gens in claims.items():
        ker, _ = _kernel_for(name, action)
        vecs = [list(lat.vector(g)) for g in gens]
        gens_cols = transpose(vecs)
        try:
            coords = solve(ker, gens_cols)
            inside = True
        except ValueError:
            inside = False
        spans = False
        if inside:
            q = cokernel(coords, nrows=len(ker[0]))
            spans = q.free_rank == 0 and not q.torsion
        out.append(KernelClaim(name, inside, spans, len(ker[0]) if ker and ker[0] else 0))
    return out


def format_matrix(m: Matrix) -> str:
    """Plain-text dump: one row per line, space-separated integers."""
    return "\n".join(" ".join(str(v) for v in row) for row in m)
