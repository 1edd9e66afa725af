"""F4 root data, its reflection group, and the D4 lattice.

All coordinates here are half-integers. They are stored doubled, as plain
ints, so equality and hashing are exact.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

GROUP_SIZE_BOUND = 10_000


class GroupGenerationError(RuntimeError):
    """Closure blew past the safety bound; the generating roots are wrong."""


@dataclass(frozen=True, order=True)
class HalfIntVec4:
    """Exact 4-vector with half-integer entries, stored as twice its value."""

    num: tuple[int, int, int, int]

    @classmethod
    def of(cls, *values) -> "HalfIntVec4":
        if len(values) == 1 and not isinstance(values[0], (int, float, Fraction)):
            values = tuple(values[0])
        if len(values) != 4:
            raise ValueError("need exactly four components")
        doubled = []
        for v in values:
            d = Fraction(v) * 2
            if d.denominator != 1:
                raise ValueError(f"{v!r} is not a half-integer")
            doubled.append(int(d))
        return cls(tuple(doubled))

    @property
    def components(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, 2) for c in self.num)

    def dot(self, other: "HalfIntVec4") -> Fraction:
        return Fraction(sum(a * b for a, b in zip(self.num, other.num)), 4)

    def norm2(self) -> Fraction:
        return self.dot(self)

    def to_array(self) -> np.ndarray:
        return np.array(self.num, dtype=float) / 2.0

    def is_zero(self) -> bool:
        return not any(self.num)

    def __neg__(self) -> "HalfIntVec4":
        return HalfIntVec4(tuple(-c for c in self.num))

    def __add__(self, other: "HalfIntVec4") -> "HalfIntVec4":
        return HalfIntVec4(tuple(a + b for a, b in zip(self.num, other.num)))

    def __sub__(self, other: "HalfIntVec4") -> "HalfIntVec4":
        return HalfIntVec4(tuple(a - b for a, b in zip(self.num, other.num)))

    def __repr__(self) -> str:
        return "HalfIntVec4(" + ", ".join(str(c) for c in self.components) + ")"


Matrix2 = tuple[tuple[int, ...], ...]


def _matmul2(a: Matrix2, b: Matrix2) -> Matrix2:
    # (2A)(2B) = 2(2AB): every product of group matrices keeps half-integer entries
    out = []
    for i in range(4):
        row = []
        for j in range(4):
            s = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j] + a[i][3] * b[3][j]
            if s % 2:
                raise ArithmeticError("product left the half-integer matrices")
            row.append(s // 2)
        out.append(tuple(row))
    return tuple(out)


def _det(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    m = [list(r) for r in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            for k in range(c, n):
                m[r][k] -= f * m[c][k]
    return det


@dataclass(frozen=True)
class GroupElement:
    """Orthogonal 4x4 matrix with half-integer entries (stored doubled)."""

    matrix2: Matrix2
    parity: int
    word_length: int

    @property
    def matrix(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(tuple(Fraction(c, 2) for c in row) for row in self.matrix2)

    def to_array(self) -> np.ndarray:
        return np.array(self.matrix2, dtype=float) / 2.0

    def det(self) -> int:
        return int(_det(self.matrix))

    def is_orthogonal(self) -> bool:
        m = self.matrix2
        for i in range(4):
            for j in range(4):
                s = sum(m[k][i] * m[k][j] for k in range(4))
                if s != (4 if i == j else 0):
                    return False
        return True

    def apply(self, v: HalfIntVec4) -> HalfIntVec4:
        out = []
        for row in self.matrix2:
            s = sum(a * b for a, b in zip(row, v.num))
            if s % 2:
                raise ArithmeticError("image is not a half-integer vector")
            out.append(s // 2)
        return HalfIntVec4(tuple(out))

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(
            _matmul2(self.matrix2, other.matrix2),
            self.parity * other.parity,
            self.word_length + other.word_length,
        )


IDENTITY = GroupElement(
    tuple(tuple(2 if i == j else 0 for j in range(4)) for i in range(4)), 1, 0
)


def reflection_matrix(root: HalfIntVec4) -> GroupElement:
    """Reflection I - 2 a a^T / |a|^2 through the hyperplane orthogonal to ``root``."""
    if root.is_zero():
        raise ValueError("cannot reflect about the zero vector")
    a = root.num
    n2 = sum(c * c for c in a)
    rows = []
    for i in range(4):
        row = []
        for j in range(4):
            # doubled entry: 2*delta_ij - 4 a_i a_j / |a|^2  (a already doubled)
            q = Fraction(4 * a[i] * a[j], n2)
            e = (2 if i == j else 0) - q
            if e.denominator != 1:
                raise ValueError(f"reflection about {root} is not half-integral")
            row.append(int(e))
        rows.append(tuple(row))
    return GroupElement(tuple(rows), -1, 1)


@dataclass(frozen=True)
class RootSystem:
    simple_roots: tuple[HalfIntVec4, ...]
    minimal_root: HalfIntVec4

    @property
    def affine_roots(self) -> tuple[HalfIntVec4, ...]:
        """alpha_0 .. alpha_4, the five mirror normals of the simplex."""
        return (self.minimal_root,) + self.simple_roots

    @cached_property
    def all_roots(self) -> frozenset[HalfIntVec4]:
        gens = [reflection_matrix(r) for r in self.simple_roots]
        seen = set(self.simple_roots)
        frontier = list(self.simple_roots)
        while frontier:
            nxt = []
            for v in frontier:
                for s in gens:
                    w = s.apply(v)
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
        return frozenset(seen)


F4_ROOTS = RootSystem(
    simple_roots=(
        HalfIntVec4.of(0, 1, -1, 0),
        HalfIntVec4.of(0, 0, 1, -1),
        HalfIntVec4.of(0, 0, 0, 1),
        HalfIntVec4.of(Fraction(1, 2), Fraction(-1, 2), Fraction(-1, 2), Fraction(-1, 2)),
    ),
    minimal_root=HalfIntVec4.of(-1, -1, 0, 0),
)


class Group:
    """Finite reflection group held as a flat indexed table.

    ``mats2[i]`` is twice the matrix of element ``i``; ``mats`` is the float
    copy used by the numerical code.
    """

    def __init__(self, elements: Sequence[GroupElement]):
        self.elements: tuple[GroupElement, ...] = tuple(elements)
        self.index = {g.matrix2: i for i, g in enumerate(self.elements)}
        self.mats2 = np.array([g.matrix2 for g in self.elements], dtype=np.int64)
        self.mats = self.mats2.astype(float) / 2.0
        self.parity = np.array([g.parity for g in self.elements], dtype=np.int8)
        self.word_length = np.array([g.word_length for g in self.elements], dtype=np.int64)
        self.mats.setflags(write=False)
        self.mats2.setflags(write=False)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i: int) -> GroupElement:
        return self.elements[i]

    def find(self, g: GroupElement | Matrix2) -> int:
        key = g.matrix2 if isinstance(g, GroupElement) else g
        return self.index[key]

    def left_mult_table(self, gens: Sequence[GroupElement]) -> np.ndarray:
        """table[j, i] = index of gens[j] @ elements[i]."""
        table = np.empty((len(gens), len(self)), dtype=np.int64)
        for j, s in enumerate(gens):
            for i, g in enumerate(self.elements):
                table[j, i] = self.index[_matmul2(s.matrix2, g.matrix2)]
        return table

    def inverse_index(self) -> np.ndarray:
        # orthogonal: inverse is the transpose
        return np.array(
            [self.index[tuple(zip(*g.matrix2))] for g in self.elements], dtype=np.int64
        )

    def negation_index(self) -> np.ndarray:
        """For every element g, the index of -g (or -1 if absent)."""
        out = np.full(len(self), -1, dtype=np.int64)
        for i, g in enumerate(self.elements):
            neg = tuple(tuple(-c for c in row) for row in g.matrix2)
            out[i] = self.index.get(neg, -1)
        return out

    def apply_int(self, v2: Sequence[int]) -> np.ndarray:
        """Images of a doubled vector under every element, still doubled."""
        img = self.mats2 @ np.asarray(v2, dtype=np.int64)
        if np.any(img % 2):
            raise ArithmeticError("orbit left the half-integer lattice")
        return img // 2

    def match(self, m: np.ndarray, tol: float = 1e-10) -> int | None:
        """Index of the element whose matrix equals ``m`` within ``tol``, if any."""
        err = np.abs(self.mats - np.asarray(m, dtype=float)).max(axis=(1, 2))
        i = int(np.argmin(err))
        return i if err[i] <= tol else None

    def to_json(self) -> list[dict]:
        return [
            {"matrix2": [list(r) for r in g.matrix2], "parity": g.parity, "word_length": g.word_length}
            for g in self.elements
        ]


def generate_group(simple_roots: Iterable[HalfIntVec4], bound: int = GROUP_SIZE_BOUND) -> Group:
    """Breadth-first closure of the simple reflections.

    Elements are recorded at first discovery, so ``word_length`` is the
    shortest word in the generators.
    """
    gens = [reflection_matrix(r) for r in simple_roots]
    elements = [IDENTITY]
    seen = {IDENTITY.matrix2}
    queue = deque([IDENTITY])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = g @ s
            if h.matrix2 in seen:
                continue
            seen.add(h.matrix2)
            elements.append(h)
            queue.append(h)
            if len(elements) > bound:
                raise GroupGenerationError(
                    f"closure exceeded {bound} elements; roots do not generate a finite group"
                )
    return Group(elements)


@lru_cache(maxsize=1)
def f4_group() -> Group:
    return generate_group(F4_ROOTS.simple_roots)


def orbit(v: HalfIntVec4, group: Group) -> frozenset[HalfIntVec4]:
    imgs = group.apply_int(v.num)
    return frozenset(HalfIntVec4(tuple(int(c) for c in row)) for row in imgs)


def coxeter_order_check(i: int, j: int, roots: RootSystem = F4_ROOTS) -> int:
    """Order of R_i R_j for mirrors i, j in 0..4 (mirror 0 taken through the origin)."""
    normals = roots.affine_roots
    if not (0 <= i < len(normals) and 0 <= j < len(normals)):
        raise ValueError("mirror index out of range")
    prod = reflection_matrix(normals[i]) @ reflection_matrix(normals[j])
    g = prod
    for n in range(1, 13):
        if g.matrix2 == IDENTITY.matrix2:
            return n
        g = g @ prod
    raise GroupGenerationError(f"mirrors {i},{j} do not generate a finite dihedral group")


@dataclass(frozen=True)
class Lattice:
    """D4 lattice generators and reciprocal vectors (the latter in units pi/L)."""

    generators: tuple[HalfIntVec4, ...]
    reciprocal: tuple[tuple[int, int, int, int], ...]

    def cell_volume(self) -> Fraction:
        return abs(_det([v.components for v in self.generators]))

    def pairing(self) -> np.ndarray:
        """kappa_i . a_j in units of pi; should be 2 * delta_ij."""
        return np.array(
            [[sum(Fraction(k) * c for k, c in zip(kap, a.components)) for a in self.generators]
             for kap in self.reciprocal],
            dtype=object,
        )


D4_LATTICE = Lattice(
    generators=(
        HalfIntVec4.of(1, -1, 0, 0),
        HalfIntVec4.of(0, 1, -1, 0),
        HalfIntVec4.of(0, 0, 1, -1),
        HalfIntVec4.of(0, 0, 1, 1),
    ),
    reciprocal=((2, 0, 0, 0), (2, 2, 0, 0), (1, 1, 1, -1), (1, 1, 1, 1)),
)
