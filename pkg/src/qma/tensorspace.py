"""Sparse exact operators on tensor powers of an N-dimensional space.

A word ``(a1, ..., ak)`` of basis indices is flattened to
``a1*N**(k-1) + ... + ak`` (first tensor slot most significant).  An
operator on ``V^{(x)k}`` stores ``rows[row_index][col_index] = value`` with
no zero values.  Values are exact field elements: :class:`qma.qfield.QRat`
in symbolic runs, ``int``/``Fraction`` in numeric-q runs.
"""

from __future__ import annotations

from itertools import product
from typing import Callable, Dict, Iterable, Optional, Sequence, Tuple

from .linalg import Echelon, solve_square

Word = Tuple[int, ...]


class ShapeError(ValueError):
    pass


class PositionError(IndexError):
    pass


class SlotError(ValueError):
    pass


class NotInvertible(ArithmeticError):
    pass


def word_to_index(word: Sequence[int], dim: int) -> int:
    idx = 0
    for a in word:
        idx = idx * dim + a
    return idx


def index_to_word(idx: int, dim: int, arity: int) -> Word:
    out = [0] * arity
    for i in range(arity - 1, -1, -1):
        idx, out[i] = divmod(idx, dim)
    return tuple(out)


class SparseOp:
    __slots__ = ("dim", "arity", "rows")

    def __init__(self, dim: int, arity: int, rows: Optional[Dict[int, Dict[int, object]]] = None):
        self.dim = dim
        self.arity = arity
        self.rows = {r: dict(row) for r, row in (rows or {}).items() if row}

    @classmethod
    def _wrap(cls, dim, arity, rows):
        obj = object.__new__(cls)
        obj.dim, obj.arity, obj.rows = dim, arity, rows
        return obj

    @classmethod
    def from_entries(cls, dim: int, arity: int, entries: Dict[Tuple[Word, Word], object]) -> "SparseOp":
        rows: Dict[int, Dict[int, object]] = {}
        for (rw, cw), v in entries.items():
            if len(rw) != arity or len(cw) != arity:
                raise ShapeError(f"word length mismatch for arity {arity}: {rw}, {cw}")
            if any(not 0 <= a < dim for a in rw + cw):
                raise ShapeError(f"index out of range for dim {dim}: {rw}, {cw}")
            if v:
                rows.setdefault(word_to_index(rw, dim), {})[word_to_index(cw, dim)] = v
        return cls._wrap(dim, arity, rows)

    @classmethod
    def from_function(cls, dim: int, arity: int, fn: Callable[[Word, Word], object]) -> "SparseOp":
        size = dim**arity
        rows: Dict[int, Dict[int, object]] = {}
        for r in range(size):
            rw = index_to_word(r, dim, arity)
            row = {}
            for c in range(size):
                v = fn(rw, index_to_word(c, dim, arity))
                if v:
                    row[c] = v
            if row:
                rows[r] = row
        return cls._wrap(dim, arity, rows)

    @classmethod
    def identity(cls, dim: int, arity: int, one=1) -> "SparseOp":
        return cls._wrap(dim, arity, {i: {i: one} for i in range(dim**arity)})

    @classmethod
    def zero(cls, dim: int, arity: int) -> "SparseOp":
        return cls._wrap(dim, arity, {})

    @classmethod
    def permutation(cls, dim: int) -> "SparseOp":
        """The flip P(a (x) b) = b (x) a on V (x) V."""
        return cls.from_entries(dim, 2, {((a, b), (b, a)): 1 for a in range(dim) for b in range(dim)})

    # -- access -----------------------------------------------------------
    @property
    def size(self) -> int:
        return self.dim**self.arity

    @property
    def entries(self) -> Dict[Tuple[Word, Word], object]:
        d, k = self.dim, self.arity
        return {
            (index_to_word(r, d, k), index_to_word(c, d, k)): v
            for r, row in sorted(self.rows.items())
            for c, v in sorted(row.items())
        }

    def get(self, row_word: Sequence[int], col_word: Sequence[int], default=0):
        r = word_to_index(row_word, self.dim)
        return self.rows.get(r, {}).get(word_to_index(col_word, self.dim), default)

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows.values())

    def is_zero(self) -> bool:
        return not self.rows

    def _check(self, other: "SparseOp"):
        if not isinstance(other, SparseOp):
            raise ShapeError(f"expected SparseOp, got {type(other).__name__}")
        if self.dim != other.dim or self.arity != other.arity:
            raise ShapeError(
                f"shape mismatch: (dim {self.dim}, arity {self.arity}) vs (dim {other.dim}, arity {other.arity})"
            )

    # -- algebra ----------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, SparseOp):
            return NotImplemented
        return self.dim == other.dim and self.arity == other.arity and self.rows == other.rows

    __hash__ = None

    def __add__(self, other: "SparseOp") -> "SparseOp":
        self._check(other)
        rows = {r: dict(row) for r, row in self.rows.items()}
        for r, row in other.rows.items():
            tgt = rows.setdefault(r, {})
            for c, v in row.items():
                t = tgt.get(c)
                t = v if t is None else t + v
                if t:
                    tgt[c] = t
                else:
                    tgt.pop(c, None)
            if not tgt:
                del rows[r]
        return SparseOp._wrap(self.dim, self.arity, rows)

    def __neg__(self) -> "SparseOp":
        return SparseOp._wrap(self.dim, self.arity, {r: {c: -v for c, v in row.items()} for r, row in self.rows.items()})

    def __sub__(self, other: "SparseOp") -> "SparseOp":
        return self + (-other)

    def scale(self, s) -> "SparseOp":
        if not s:
            return SparseOp.zero(self.dim, self.arity)
        rows = {}
        for r, row in self.rows.items():
            new = {}
            for c, v in row.items():
                w = s * v
                if w:
                    new[c] = w
            if new:
                rows[r] = new
        return SparseOp._wrap(self.dim, self.arity, rows)

    def __rmul__(self, s) -> "SparseOp":
        return self.scale(s)

    def __matmul__(self, other: "SparseOp") -> "SparseOp":
        if not isinstance(other, SparseOp):
            return NotImplemented
        return compose(self, other)

    def map(self, fn: Callable[[object], object]) -> "SparseOp":
        """Apply ``fn`` to every stored entry (e.g. specialization of q)."""
        rows = {}
        for r, row in self.rows.items():
            new = {}
            for c, v in row.items():
                w = fn(v)
                if w:
                    new[c] = w
            if new:
                rows[r] = new
        return SparseOp._wrap(self.dim, self.arity, rows)

    def first_difference(self, other: "SparseOp"):
        """A witness ``(row_word, col_word, self_value, other_value)`` or None."""
        keys = set()
        for r, row in self.rows.items():
            keys.update((r, c) for c in row)
        for r, row in other.rows.items():
            keys.update((r, c) for c in row)
        for r, c in sorted(keys):
            a = self.rows.get(r, {}).get(c, 0)
            b = other.rows.get(r, {}).get(c, 0)
            if a != b:
                return (index_to_word(r, self.dim, self.arity), index_to_word(c, self.dim, self.arity), a, b)
        return None

    def __repr__(self):
        return f"SparseOp(dim={self.dim}, arity={self.arity}, nnz={self.nnz()})"


def compose(a: SparseOp, b: SparseOp) -> SparseOp:
    """Matrix product ``a @ b``."""
    a._check(b)
    brows = b.rows
    rows = {}
    for r, row in a.rows.items():
        acc: Dict[int, object] = {}
        for m, x in row.items():
            bm = brows.get(m)
            if not bm:
                continue
            for c, y in bm.items():
                t = acc.get(c)
                acc[c] = x * y if t is None else t + x * y
        acc = {c: v for c, v in acc.items() if v}
        if acc:
            rows[r] = acc
    return SparseOp._wrap(a.dim, a.arity, rows)


def tensor(a: SparseOp, b: SparseOp) -> SparseOp:
    """Kronecker product, ``a`` on the leading slots."""
    if a.dim != b.dim:
        raise ShapeError("tensor factors must share the dimension")
    sb = b.dim**b.arity
    rows = {}
    for ra, rowa in a.rows.items():
        for rb, rowb in b.rows.items():
            new = {}
            for ca, x in rowa.items():
                for cb, y in rowb.items():
                    new[ca * sb + cb] = x * y
            rows[ra * sb + rb] = new
    return SparseOp._wrap(a.dim, a.arity + b.arity, rows)


def embed(op: SparseOp, i: int, k: int) -> SparseOp:
    """Place ``op`` on slots ``i .. i+op.arity-1`` of ``V^{(x)k}`` (1-based)."""
    m = op.arity
    if i < 1 or i + m - 1 > k:
        raise PositionError(f"cannot place an arity-{m} operator at slot {i} of arity {k}")
    if m == k:
        return op
    d = op.dim
    post = d ** (k - i - m + 1)
    block = d**m * post
    rows = {}
    for pre in range(d ** (i - 1)):
        base = pre * block
        for r, row in op.rows.items():
            for t in range(post):
                rows[base + r * post + t] = {base + c * post + t: v for c, v in row.items()}
    return SparseOp._wrap(d, k, rows)


def chain(F: SparseOp, i: int, k: int, total: int) -> SparseOp:
    """The ordered product ``F_i F_{i+1} ... F_k`` on arity ``total``."""
    if not 1 <= i <= k <= total - 1:
        raise PositionError(f"chain {i}->{k} invalid for arity {total}")
    out = embed(F, i, total)
    for j in range(i + 1, k + 1):
        out = compose(out, embed(F, j, total))
    return out


def trace_plan(dim: int, arity: int, slots: Iterable[int]):
    """Split every index into (kept index, traced word) for a partial trace."""
    slots = sorted(set(slots))
    if any(not 1 <= s <= arity for s in slots):
        raise SlotError(f"trace slots {slots} invalid for arity {arity}")
    kept = [s for s in range(1, arity + 1) if s not in slots]
    plan = []
    for idx in range(dim**arity):
        w = index_to_word(idx, dim, arity)
        plan.append((word_to_index([w[s - 1] for s in kept], dim), tuple(w[s - 1] for s in slots)))
    return plan, len(kept)


def trace_weight(D: Optional[SparseOp], col_part: Word, row_part: Word):
    """Product of ``D[c_s, r_s]`` over traced slots (Kronecker deltas if D is None)."""
    w = 1
    if D is None:
        return 1 if col_part == row_part else 0
    drows = D.rows
    for t, u in zip(col_part, row_part):
        x = drows.get(t, {}).get(u)
        if not x:
            return 0
        w = x * w
    return w


def partial_qtrace(X: SparseOp, D: Optional[SparseOp], slots: Iterable[int]):
    """``Tr_{slots}(D_{s1} ... D_{sm} X)``.

    ``D=None`` gives the ordinary partial trace.  Remaining slots keep their
    order; when every slot is traced the scalar result is returned.
    """
    if D is not None and (D.arity != 1 or D.dim != X.dim):
        raise ShapeError("D must be an arity-1 operator of matching dimension")
    plan, remaining = trace_plan(X.dim, X.arity, slots)
    acc: Dict[int, Dict[int, object]] = {}
    weights = {}
    for r, row in X.rows.items():
        kr, tr = plan[r]
        for c, x in row.items():
            kc, tc = plan[c]
            key = (tc, tr)
            w = weights.get(key)
            if w is None:
                w = weights[key] = trace_weight(D, tc, tr)
            if not w:
                continue
            tgt = acc.setdefault(kr, {})
            t = tgt.get(kc)
            tgt[kc] = w * x if t is None else t + w * x
    rows = {}
    for r, row in acc.items():
        row = {c: v for c, v in row.items() if v}
        if row:
            rows[r] = row
    if remaining == 0:
        return rows.get(0, {}).get(0, 0)
    return SparseOp._wrap(X.dim, remaining, rows)


def rank_exact(X: SparseOp) -> int:
    e = Echelon()
    for _, row in sorted(X.rows.items()):
        e.add(row)
    return e.rank


def inverse(X: SparseOp) -> SparseOp:
    ident = {i: {i: 1} for i in range(X.size)}
    sol = solve_square(X.rows, X.size, ident)
    if sol is None:
        raise NotInvertible(f"operator of dim {X.dim}, arity {X.arity} is singular")
    return SparseOp._wrap(X.dim, X.arity, sol)


def elementary(dim: int, a: int, b: int, one=1) -> SparseOp:
    """The matrix unit E_ab on V."""
    return SparseOp._wrap(dim, 1, {a: {b: one}})


def all_words(dim: int, arity: int):
    return product(range(dim), repeat=arity)
