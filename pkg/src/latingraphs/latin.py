"""Latin square construction and validation.

Squares are stored densely as ``int64`` arrays with symbols ``0..n-1``.  Group
tables use a fixed element enumeration (see :class:`GroupSpec`) so that the
vertex labelling of every Cayley graph is reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numba
import numpy as np

from ._rng import make_rng
from .exceptions import CapExceededError, LatinSquareError

ORDER_CAP = 4096
RANDOM_ORDER_CAP = 128

FAMILIES = (
    "cyclic",
    "group-division",
    "group-multiplication",
    "paired-example",
    "random",
    "user",
)


@dataclass(frozen=True, eq=False)
class LatinSquare:
    """An ``n x n`` array in which every row and column is a permutation of ``0..n-1``.

    Build one through :func:`validate_latin` or a generator; the constructor
    itself does not check anything.
    """

    cells: np.ndarray
    family_tag: str = "user"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.cells.setflags(write=False)

    @property
    def order(self) -> int:
        return self.cells.shape[0]

    n = order

    def __eq__(self, other):
        if not isinstance(other, LatinSquare):
            return NotImplemented
        return np.array_equal(self.cells, other.cells)

    def __hash__(self):
        return hash(self.cells.tobytes())

    def __repr__(self):
        return f"LatinSquare(order={self.order}, family_tag={self.family_tag!r})"

    def tolist(self):
        return self.cells.tolist()


def _check_permutation_lines(cells):
    n = cells.shape[0]
    target = np.arange(n)
    for r in range(n):
        row = cells[r]
        if not np.array_equal(np.sort(row), target):
            seen = {}
            for c, s in enumerate(row.tolist()):
                if s in seen:
                    raise LatinSquareError(
                        f"row {r} duplicates symbol {s} (columns {seen[s]} and {c})",
                        where=("row", r, c),
                    )
                seen[s] = c
    for c in range(n):
        col = cells[:, c]
        if not np.array_equal(np.sort(col), target):
            seen = {}
            for r, s in enumerate(col.tolist()):
                if s in seen:
                    raise LatinSquareError(
                        f"column {c} duplicates symbol {s} (rows {seen[s]} and {r})",
                        where=("column", c, r),
                    )
                seen[s] = r


def validate_latin(cells, family_tag="user", params=None) -> LatinSquare:
    """Check that ``cells`` is a Latin square over ``0..n-1`` and wrap it.

    Raises
    ------
    LatinSquareError
        On a non-square array, a symbol outside ``0..n-1``, or a repeated
        symbol in some row or column.  The message names the first violation.
    """
    arr = np.asarray(cells)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise LatinSquareError(f"expected a square 2-d array, got shape {arr.shape}")
    n = arr.shape[0]
    if n == 0:
        raise LatinSquareError("order must be at least 1")
    if n > ORDER_CAP:
        raise CapExceededError(f"order {n} exceeds cap {ORDER_CAP}")
    if arr.dtype.kind not in "iu":
        if arr.dtype.kind == "f" and np.all(np.equal(np.mod(arr, 1), 0)):
            arr = arr.astype(np.int64)
        else:
            raise LatinSquareError("symbols must be integers")
    arr = arr.astype(np.int64, copy=True)
    bad = np.argwhere((arr < 0) | (arr >= n))
    if len(bad):
        r, c = (int(v) for v in bad[0])
        raise LatinSquareError(
            f"symbol {arr[r, c]} at ({r}, {c}) outside 0..{n - 1}", where=("cell", r, c)
        )
    _check_permutation_lines(arr)
    return LatinSquare(arr, family_tag, dict(params or {}))


def is_latin(cells) -> bool:
    try:
        validate_latin(cells)
    except LatinSquareError:
        return False
    return True


def cyclic_difference_table(n: int) -> LatinSquare:
    """Division table of Z_n: ``cells[x, y] = (x - y) mod n``."""
    n = int(n)
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > ORDER_CAP:
        raise CapExceededError(f"order {n} exceeds cap {ORDER_CAP}")
    x = np.arange(n)
    cells = (x[:, None] - x[None, :]) % n
    return LatinSquare(cells, "cyclic", {"n": n})


# -- groups -----------------------------------------------------------------


@dataclass(frozen=True)
class GroupSpec:
    """Description of a finite group and which table to take from it.

    ``kind`` is one of ``"cyclic"`` (``args=(n,)``), ``"elementary_abelian"``
    (``args=(base, exponent)`` with base 2 or 3), ``"dihedral"``
    (``args=(m,)``, order ``2m``) or ``"direct_product"`` (``args`` a tuple of
    GroupSpec factors).  ``table_mode`` is ``"division"`` (``x y^-1``) or
    ``"multiplication"`` (``x y``).

    Elements are enumerated lexicographically over coordinate tuples, the
    first factor most significant.  Dihedral elements are the rotations
    ``r^0..r^(m-1)`` followed by the reflections ``r^i s``.
    """

    kind: str
    args: tuple = ()
    table_mode: str = "division"

    @classmethod
    def cyclic(cls, n, table_mode="division"):
        return cls("cyclic", (int(n),), table_mode)

    @classmethod
    def elementary_abelian(cls, base, exponent, table_mode="division"):
        return cls("elementary_abelian", (int(base), int(exponent)), table_mode)

    @classmethod
    def dihedral(cls, m, table_mode="division"):
        return cls("dihedral", (int(m),), table_mode)

    @classmethod
    def direct_product(cls, factors, table_mode="division"):
        return cls("direct_product", tuple(factors), table_mode)

    @property
    def order(self) -> int:
        if self.kind == "cyclic":
            return self.args[0]
        if self.kind == "elementary_abelian":
            return self.args[0] ** self.args[1]
        if self.kind == "dihedral":
            return 2 * self.args[0]
        if self.kind == "direct_product":
            out = 1
            for f in self.args:
                out *= f.order
            return out
        raise ValueError(f"unsupported group kind {self.kind!r}")

    def to_dict(self):
        if self.kind == "direct_product":
            args = [f.to_dict() for f in self.args]
        else:
            args = list(self.args)
        return {"kind": self.kind, "args": args, "table_mode": self.table_mode}

    @classmethod
    def from_dict(cls, d):
        kind = d["kind"]
        mode = d.get("table_mode", "division")
        if kind == "direct_product":
            return cls(kind, tuple(cls.from_dict(f) for f in d["args"]), mode)
        return cls(kind, tuple(int(a) for a in d["args"]), mode)


def _cyclic_tables(n):
    x = np.arange(n)
    return (x[:, None] + x[None, :]) % n, (-x) % n


def _product_tables(mul1, inv1, mul2, inv2):
    n1, n2 = len(inv1), len(inv2)
    mul = (mul1[:, None, :, None] * n2 + mul2[None, :, None, :]).reshape(n1 * n2, n1 * n2)
    inv = (inv1[:, None] * n2 + inv2[None, :]).reshape(-1)
    return mul, inv


def _dihedral_tables(m):
    # index i < m is r^i, index m + i is r^i s;  (r^a s^f)(r^b s^g) = r^(a + (-1)^f b) s^(f+g)
    n = 2 * m
    idx = np.arange(n)
    rot, refl = idx % m, idx // m
    sign = np.where(refl == 1, -1, 1)
    a = rot[:, None] + sign[:, None] * rot[None, :]
    f = (refl[:, None] + refl[None, :]) % 2
    mul = (a % m) + m * f
    inv = np.where(refl == 1, idx, (-rot) % m)
    return mul, inv


def _group_tables(spec: GroupSpec):
    kind = spec.kind
    if kind == "cyclic":
        (n,) = spec.args
        if n < 1:
            raise ValueError("cyclic group order must be >= 1")
        return _cyclic_tables(n)
    if kind == "elementary_abelian":
        base, exponent = spec.args
        if base not in (2, 3):
            raise ValueError(f"elementary abelian base must be 2 or 3, got {base}")
        if exponent < 1:
            raise ValueError("exponent must be >= 1")
        mul, inv = _cyclic_tables(base)
        out_mul, out_inv = mul, inv
        for _ in range(exponent - 1):
            out_mul, out_inv = _product_tables(out_mul, out_inv, mul, inv)
        return out_mul, out_inv
    if kind == "dihedral":
        (m,) = spec.args
        if m < 1:
            raise ValueError("dihedral parameter m must be >= 1")
        return _dihedral_tables(m)
    if kind == "direct_product":
        if not spec.args:
            raise ValueError("direct product needs at least one factor")
        mul, inv = _group_tables(spec.args[0])
        for factor in spec.args[1:]:
            mul2, inv2 = _group_tables(factor)
            mul, inv = _product_tables(mul, inv, mul2, inv2)
        return mul, inv
    raise ValueError(f"unsupported group kind {kind!r}")


def group_table(spec: GroupSpec) -> LatinSquare:
    """Division (``x y^-1``) or multiplication table of the group in ``spec``."""
    if spec.table_mode not in ("division", "multiplication"):
        raise ValueError(f"table_mode must be 'division' or 'multiplication', got {spec.table_mode!r}")
    order = spec.order
    if order > ORDER_CAP:
        raise CapExceededError(f"group order {order} exceeds cap {ORDER_CAP}")
    mul, inv = _group_tables(spec)
    if spec.table_mode == "division":
        cells = mul[:, inv]
        tag = "group-division"
    else:
        cells = mul
        tag = "group-multiplication"
    return validate_latin(cells, tag, {"group": spec.to_dict()})


def paired_example_square(r: int) -> LatinSquare:
    """The order-``2r`` square whose graphs pair up vertices with equal neighbourhoods.

    Vertex ``(x, b)`` has index ``x + b * r``.  Entries are ``x + y`` or
    ``x + y + r`` (mod ``2r``) depending on ``x <= y`` and whether the two
    coordinates' second components agree.
    """
    r = int(r)
    if r < 2:
        raise ValueError("r must be >= 2")
    x = np.tile(np.arange(r), 2)
    b = np.repeat([0, 1], r)
    le = x[:, None] <= x[None, :]
    same = b[:, None] == b[None, :]
    base = x[:, None] + x[None, :]
    # same half: +r when x > y; different halves: +r when x <= y
    shift = np.where(same, ~le, le)
    cells = (base + r * shift) % (2 * r)
    return validate_latin(cells, "paired-example", {"r": r})


# -- Jacobson-Matthews ------------------------------------------------------


@numba.njit(cache=True)
def _jm_moves(cube, state, rand, n_moves, stop_when_proper):
    # state = [improper, r0, c0, s0]; rand holds 3 uniforms per move
    n = cube.shape[0]
    done = 0
    for t in range(n_moves):
        if stop_when_proper and state[0] == 0:
            break
        u0 = rand[3 * t]
        u1 = rand[3 * t + 1]
        u2 = rand[3 * t + 2]
        if state[0] == 0:
            r = min(int(u0 * n), n - 1)
            c = min(int(u1 * n), n - 1)
            s_cur = 0
            for s in range(n):
                if cube[r, c, s] == 1:
                    s_cur = s
                    break
            k = min(int(u2 * (n - 1)), n - 2)
            s = k if k < s_cur else k + 1
            r1 = 0
            for i in range(n):
                if cube[i, c, s] == 1:
                    r1 = i
                    break
            c1 = 0
            for j in range(n):
                if cube[r, j, s] == 1:
                    c1 = j
                    break
            s1 = s_cur
        else:
            r, c, s = state[1], state[2], state[3]
            pick = 1 if u0 >= 0.5 else 0
            r1 = -1
            for i in range(n):
                if cube[i, c, s] == 1:
                    if pick == 0:
                        r1 = i
                        break
                    pick -= 1
            pick = 1 if u1 >= 0.5 else 0
            c1 = -1
            for j in range(n):
                if cube[r, j, s] == 1:
                    if pick == 0:
                        c1 = j
                        break
                    pick -= 1
            pick = 1 if u2 >= 0.5 else 0
            s1 = -1
            for k in range(n):
                if cube[r, c, k] == 1:
                    if pick == 0:
                        s1 = k
                        break
                    pick -= 1
        cube[r, c, s] += 1
        cube[r, c1, s1] += 1
        cube[r1, c, s1] += 1
        cube[r1, c1, s] += 1
        cube[r, c, s1] -= 1
        cube[r, c1, s] -= 1
        cube[r1, c, s] -= 1
        cube[r1, c1, s1] -= 1
        if cube[r1, c1, s1] < 0:
            state[0] = 1
            state[1] = r1
            state[2] = c1
            state[3] = s1
        else:
            state[0] = 0
        done += 1
    return done


def jacobson_matthews_chain(start: LatinSquare, moves: int, seed, chunk=1 << 18) -> np.ndarray:
    """Run ``moves`` Jacobson-Matthews steps from ``start``, then continue until proper.

    Randomness comes from a Philox stream seeded with ``seed`` (three uniforms
    per step), so the result is a pure function of ``(start, moves, seed)``.
    """
    n = start.order
    rng = make_rng(seed)
    cube = np.zeros((n, n, n), dtype=np.int8)
    rows, cols = np.indices((n, n))
    cube[rows, cols, start.cells] = 1
    state = np.zeros(4, dtype=np.int64)
    if n == 1:
        return start.cells.copy()
    remaining = int(moves)
    while remaining > 0:
        step = min(chunk, remaining)
        _jm_moves(cube, state, rng.random(3 * step), step, False)
        remaining -= step
    while state[0] != 0:
        _jm_moves(cube, state, rng.random(3 * chunk), chunk, True)
    return np.argmax(cube, axis=2).astype(np.int64)


def random_latin_square(n: int, seed=0, burn_in=None) -> LatinSquare:
    """Approximately uniform Latin square via the Jacobson-Matthews chain.

    Starts from the cyclic table and runs ``burn_in`` moves (default
    ``10 * n**3``), stopping at the first proper square after that.
    """
    n = int(n)
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > RANDOM_ORDER_CAP:
        raise CapExceededError(f"random squares are capped at order {RANDOM_ORDER_CAP}")
    moves = 10 * n ** 3 if burn_in is None else int(burn_in)
    cells = jacobson_matthews_chain(cyclic_difference_table(n), moves, seed)
    return validate_latin(cells, "random", {"n": n, "seed": int(seed)})


# -- symbol permutations ----------------------------------------------------


@dataclass(frozen=True)
class SymbolPermutation:
    """Positions of one symbol: ``row_map[i]`` is the column holding it in row ``i``."""

    symbol: int
    row_map: tuple
    col_map: tuple

    def matrix(self) -> np.ndarray:
        n = len(self.row_map)
        P = np.zeros((n, n), dtype=np.int64)
        P[np.arange(n), list(self.row_map)] = 1
        return P


def symbol_permutation(L: LatinSquare, s: int) -> SymbolPermutation:
    n = L.order
    if not 0 <= s < n:
        raise ValueError(f"symbol {s} outside 0..{n - 1}")
    rows, cols = np.nonzero(L.cells == s)
    row_map = np.empty(n, dtype=np.int64)
    row_map[rows] = cols
    col_map = np.empty(n, dtype=np.int64)
    col_map[cols] = rows
    return SymbolPermutation(int(s), tuple(row_map.tolist()), tuple(col_map.tolist()))


def square_from_family(family: str, n: int | None = None, **params) -> LatinSquare:
    """Build a square by family name; used by the CLI and experiment configs.

    ``family`` is ``cyclic``, ``elementary_abelian``, ``dihedral``,
    ``paired_example``, ``random`` or ``group`` (explicit ``group`` dict).
    For the named group families ``n`` is the order and must be attainable.
    """
    family = family.replace("-", "_")
    mode = params.get("table_mode", "division")
    if family == "cyclic":
        if mode == "division":
            return cyclic_difference_table(n)
        return group_table(GroupSpec.cyclic(n, mode))
    if family == "elementary_abelian":
        base = int(params.get("base", 2))
        m = params.get("exponent")
        if m is None:
            m = _exact_log(n, base)
        return group_table(GroupSpec.elementary_abelian(base, int(m), mode))
    if family == "dihedral":
        m = params.get("m")
        if m is None:
            if n is None or n % 2:
                raise ValueError(f"dihedral groups have even order, got {n}")
            m = n // 2
        return group_table(GroupSpec.dihedral(int(m), mode))
    if family == "paired_example":
        r = params.get("r")
        if r is None:
            if n is None or n % 2:
                raise ValueError(f"paired example has even order, got {n}")
            r = n // 2
        return paired_example_square(int(r))
    if family == "random":
        return random_latin_square(n, params.get("seed", 0))
    if family == "group":
        return group_table(GroupSpec.from_dict(params["group"]))
    raise ValueError(f"unknown Latin square family {family!r}")


def _exact_log(n, base):
    if n is None or n < 1:
        raise ValueError(f"order {n} is not a power of {base}")
    m, v = 0, 1
    while v < n:
        v *= base
        m += 1
    if v != n:
        raise ValueError(f"order {n} is not a power of {base}")
    return m


__all__: Sequence[str] = [
    "LatinSquare",
    "GroupSpec",
    "SymbolPermutation",
    "validate_latin",
    "is_latin",
    "cyclic_difference_table",
    "group_table",
    "paired_example_square",
    "random_latin_square",
    "jacobson_matthews_chain",
    "symbol_permutation",
    "square_from_family",
]
