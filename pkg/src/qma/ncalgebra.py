"""Free algebra on the N^2 matrix generators, operator-valued matrices over
it, the quadratic relations of the quantum matrix algebra, and exact
membership in homogeneous components of the relation ideal.

Generator ``M[i,j]`` has index ``i*N + j``; a monomial is a tuple of
generator indices, so lexicographic order on equal-length words equals the
numeric order of their base-N^2 encodings (degree-lex overall).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

from .linalg import Echelon
from .rmatrix import RMatrixPair
from .tensorspace import (
    SparseOp,
    chain,
    embed,
    index_to_word,
    inverse,
    trace_plan,
    trace_weight,
)

Terms = Dict[Tuple[int, ...], object]


# ---------------------------------------------------------------------------
# raw term-dict helpers
# ---------------------------------------------------------------------------


def _add_into(acc: Terms, terms: Terms, factor=None) -> None:
    for w, c in terms.items():
        if factor is not None:
            c = factor * c
        t = acc.get(w)
        if t is None:
            acc[w] = c
        else:
            t = t + c
            if t:
                acc[w] = t
            else:
                del acc[w]


def _mul_into(acc: Terms, a: Terms, b: Terms, factor=None) -> None:
    for w1, c1 in a.items():
        if factor is not None:
            c1 = factor * c1
        for w2, c2 in b.items():
            w = w1 + w2
            c = c1 * c2
            t = acc.get(w)
            if t is None:
                acc[w] = c
            else:
                t = t + c
                if t:
                    acc[w] = t
                else:
                    del acc[w]


def _clean(terms: Terms) -> Terms:
    return {w: c for w, c in terms.items() if c}


# ---------------------------------------------------------------------------
# NCPoly
# ---------------------------------------------------------------------------


class NCPoly:
    """Noncommutative polynomial in the generators ``M[i,j]``."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: Optional[Terms] = None):
        self.dim = dim
        self.terms = _clean(terms or {})

    @classmethod
    def _wrap(cls, dim, terms):
        obj = object.__new__(cls)
        obj.dim, obj.terms = dim, terms
        return obj

    @classmethod
    def one(cls, dim: int, coeff=1) -> "NCPoly":
        return cls._wrap(dim, {(): coeff})

    @classmethod
    def gen(cls, dim: int, i: int, j: int) -> "NCPoly":
        return cls._wrap(dim, {(i * dim + j,): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degrees(self) -> set:
        return {len(w) for w in self.terms}

    def is_homogeneous(self, d: Optional[int] = None) -> bool:
        degs = self.degrees()
        if not degs:
            return True
        return len(degs) == 1 and (d is None or d in degs)

    def homogeneous_parts(self) -> Dict[int, "NCPoly"]:
        parts: Dict[int, Terms] = {}
        for w, c in self.terms.items():
            parts.setdefault(len(w), {})[w] = c
        return {d: NCPoly._wrap(self.dim, t) for d, t in sorted(parts.items())}

    def __eq__(self, other):
        if isinstance(other, NCPoly):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    __hash__ = None

    def __add__(self, other: "NCPoly") -> "NCPoly":
        acc = dict(self.terms)
        _add_into(acc, other.terms)
        return NCPoly._wrap(self.dim, acc)

    def __neg__(self):
        return NCPoly._wrap(self.dim, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "NCPoly") -> "NCPoly":
        acc = dict(self.terms)
        _add_into(acc, other.terms, -1)
        return NCPoly._wrap(self.dim, acc)

    def scale(self, s) -> "NCPoly":
        if not s:
            return NCPoly._wrap(self.dim, {})
        return NCPoly._wrap(self.dim, _clean({w: s * c for w, c in self.terms.items()}))

    def __mul__(self, other):
        if isinstance(other, NCPoly):
            acc: Terms = {}
            _mul_into(acc, self.terms, other.terms)
            return NCPoly._wrap(self.dim, acc)
        return self.scale(other)

    def __rmul__(self, s):
        return self.scale(s)

    def map_coeffs(self, fn) -> "NCPoly":
        return NCPoly._wrap(self.dim, _clean({w: fn(c) for w, c in self.terms.items()}))

    def render(self) -> str:
        """Coefficient-grammar rendering with monomials written ``M[i,j]``."""
        if not self.terms:
            return "0"
        N = self.dim
        parts = []
        for w in sorted(self.terms, key=lambda w: (len(w), w)):
            c = self.terms[w]
            mon = "*".join(f"M[{g // N},{g % N}]" for g in w)
            cs = str(c)
            if not mon:
                parts.append(f"({cs})")
            elif cs == "1":
                parts.append(mon)
            else:
                parts.append(f"({cs})*{mon}")
        return " + ".join(parts)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"NCPoly({self.render()})"


def commutative_image(p: NCPoly) -> Dict[Tuple[int, ...], object]:
    """Forget the order of generators: map to sorted-word -> coefficient."""
    acc: Terms = {}
    for w, c in p.terms.items():
        key = tuple(sorted(w))
        acc[key] = acc[key] + c if key in acc else c
    return _clean(acc)


# ---------------------------------------------------------------------------
# OpPoly
# ---------------------------------------------------------------------------


class OpPoly:
    """Operator on ``V^{(x)k}`` with noncommutative-polynomial entries.

    ``rows[r][c]`` is a raw term dict; products multiply entries in the
    order the operator factors appear.
    """

    __slots__ = ("dim", "arity", "rows")

    def __init__(self, dim: int, arity: int, rows=None):
        self.dim, self.arity = dim, arity
        self.rows = {}
        for r, row in (rows or {}).items():
            row = {c: _clean(t) for c, t in row.items()}
            row = {c: t for c, t in row.items() if t}
            if row:
                self.rows[r] = row

    @classmethod
    def _wrap(cls, dim, arity, rows):
        obj = object.__new__(cls)
        obj.dim, obj.arity, obj.rows = dim, arity, rows
        return obj

    @classmethod
    def from_scalar(cls, op: SparseOp) -> "OpPoly":
        return cls._wrap(op.dim, op.arity, {r: {c: {(): v} for c, v in row.items()} for r, row in op.rows.items()})

    @classmethod
    def zero(cls, dim: int, arity: int) -> "OpPoly":
        return cls._wrap(dim, arity, {})

    def entry(self, r: int, c: int) -> NCPoly:
        return NCPoly._wrap(self.dim, dict(self.rows.get(r, {}).get(c, {})))

    def entries(self):
        """Iterate ``(row_word, col_word, NCPoly)`` over nonzero entries in index order."""
        d, k = self.dim, self.arity
        for r in sorted(self.rows):
            for c in sorted(self.rows[r]):
                yield index_to_word(r, d, k), index_to_word(c, d, k), NCPoly._wrap(d, self.rows[r][c])

    def is_zero(self) -> bool:
        return not self.rows

    def __eq__(self, other):
        if not isinstance(other, OpPoly):
            return NotImplemented
        return (self.dim, self.arity) == (other.dim, other.arity) and self.rows == other.rows

    __hash__ = None

    def _combine(self, other: "OpPoly", factor) -> "OpPoly":
        if (self.dim, self.arity) != (other.dim, other.arity):
            raise ValueError("shape mismatch")
        rows = {r: {c: dict(t) for c, t in row.items()} for r, row in self.rows.items()}
        for r, row in other.rows.items():
            tgt = rows.setdefault(r, {})
            for c, t in row.items():
                acc = tgt.setdefault(c, {})
                _add_into(acc, t, factor)
                if not acc:
                    del tgt[c]
            if not tgt:
                del rows[r]
        return OpPoly._wrap(self.dim, self.arity, rows)

    def __add__(self, other):
        return self._combine(other, None)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, s) -> "OpPoly":
        rows = {}
        for r, row in self.rows.items():
            new = {}
            for c, t in row.items():
                t = _clean({w: s * v for w, v in t.items()})
                if t:
                    new[c] = t
            if new:
                rows[r] = new
        return OpPoly._wrap(self.dim, self.arity, rows)

    def times_poly(self, p: NCPoly) -> "OpPoly":
        """Entrywise right multiplication ``X[r,c] * p``."""
        rows = {}
        for r, row in self.rows.items():
            new = {}
            for c, t in row.items():
                acc: Terms = {}
                _mul_into(acc, t, p.terms)
                if acc:
                    new[c] = acc
            if new:
                rows[r] = new
        return OpPoly._wrap(self.dim, self.arity, rows)

    def __matmul__(self, other):
        if isinstance(other, SparseOp):
            return _mul_op_scalar(self, other)
        if isinstance(other, OpPoly):
            return _mul_op_op(self, other)
        return NotImplemented

    def __rmatmul__(self, other):
        if isinstance(other, SparseOp):
            return _mul_scalar_op(other, self)
        return NotImplemented

    def map_coeffs(self, fn) -> "OpPoly":
        rows = {}
        for r, row in self.rows.items():
            new = {c: _clean({w: fn(v) for w, v in t.items()}) for c, t in row.items()}
            new = {c: t for c, t in new.items() if t}
            if new:
                rows[r] = new
        return OpPoly._wrap(self.dim, self.arity, rows)

    def first_nonzero(self):
        for rw, cw, p in self.entries():
            return rw, cw, p
        return None

    def __repr__(self):
        nnz = sum(len(r) for r in self.rows.values())
        return f"OpPoly(dim={self.dim}, arity={self.arity}, nnz={nnz})"


def _check_shape(a, b):
    if (a.dim, a.arity) != (b.dim, b.arity):
        raise ValueError(f"shape mismatch: ({a.dim},{a.arity}) vs ({b.dim},{b.arity})")


def _mul_op_op(a: OpPoly, b: OpPoly) -> OpPoly:
    _check_shape(a, b)
    rows = {}
    brows = b.rows
    for r, row in a.rows.items():
        acc: Dict[int, Terms] = {}
        for m, ta in row.items():
            bm = brows.get(m)
            if not bm:
                continue
            for c, tb in bm.items():
                _mul_into(acc.setdefault(c, {}), ta, tb)
        acc = {c: t for c, t in acc.items() if t}
        if acc:
            rows[r] = acc
    return OpPoly._wrap(a.dim, a.arity, rows)


def _mul_scalar_op(s: SparseOp, b: OpPoly) -> OpPoly:
    _check_shape(s, b)
    rows = {}
    brows = b.rows
    for r, row in s.rows.items():
        acc: Dict[int, Terms] = {}
        for m, x in row.items():
            bm = brows.get(m)
            if not bm:
                continue
            for c, tb in bm.items():
                _add_into(acc.setdefault(c, {}), tb, x)
        acc = {c: t for c, t in acc.items() if t}
        if acc:
            rows[r] = acc
    return OpPoly._wrap(b.dim, b.arity, rows)


def _mul_op_scalar(a: OpPoly, s: SparseOp) -> OpPoly:
    _check_shape(a, s)
    rows = {}
    srows = s.rows
    for r, row in a.rows.items():
        acc: Dict[int, Terms] = {}
        for m, ta in row.items():
            sm = srows.get(m)
            if not sm:
                continue
            for c, x in sm.items():
                _add_into(acc.setdefault(c, {}), ta, x)
        acc = {c: t for c, t in acc.items() if t}
        if acc:
            rows[r] = acc
    return OpPoly._wrap(a.dim, a.arity, rows)


def embed_poly(X: OpPoly, i: int, k: int) -> OpPoly:
    """Place ``X`` on slots ``i .. i+X.arity-1`` of arity ``k``."""
    m, d = X.arity, X.dim
    if i < 1 or i + m - 1 > k:
        raise IndexError(f"cannot place arity-{m} OpPoly at slot {i} of arity {k}")
    if m == k:
        return X
    post = d ** (k - i - m + 1)
    block = d**m * post
    rows = {}
    for pre in range(d ** (i - 1)):
        base = pre * block
        for r, row in X.rows.items():
            for t in range(post):
                rows[base + r * post + t] = {base + c * post + t: tt for c, tt in row.items()}
    return OpPoly._wrap(d, k, rows)


def partial_qtrace_poly(X: OpPoly, D: Optional[SparseOp], slots: Iterable[int]):
    """Partial quantum trace of an OpPoly; full traces return an NCPoly."""
    plan, remaining = trace_plan(X.dim, X.arity, slots)
    acc: Dict[int, Dict[int, Terms]] = {}
    weights = {}
    for r, row in X.rows.items():
        kr, tr = plan[r]
        for c, t in row.items():
            kc, tc = plan[c]
            key = (tc, tr)
            w = weights.get(key)
            if w is None:
                w = weights[key] = trace_weight(D, tc, tr)
            if not w:
                continue
            _add_into(acc.setdefault(kr, {}).setdefault(kc, {}), t, w)
    rows = {}
    for r, row in acc.items():
        row = {c: t for c, t in row.items() if t}
        if row:
            rows[r] = row
    if remaining == 0:
        return NCPoly._wrap(X.dim, rows.get(0, {}).get(0, {}))
    return OpPoly._wrap(X.dim, remaining, rows)


def identity_times(p: NCPoly, dim: int, arity: int) -> OpPoly:
    """``I_{1..arity} * p``."""
    if not p.terms:
        return OpPoly.zero(dim, arity)
    return OpPoly._wrap(dim, arity, {i: {i: dict(p.terms)} for i in range(dim**arity)})


def generators(N: int) -> OpPoly:
    """The arity-1 matrix M whose (i,j) entry is the generator M[i,j]."""
    return OpPoly._wrap(N, 1, {i: {j: {(i * N + j,): 1} for j in range(N)} for i in range(N)})


# ---------------------------------------------------------------------------
# ideal components
# ---------------------------------------------------------------------------


@dataclass
class Relation:
    label: Tuple[int, int, int, int]  # (row word, col word) of the defining matrix relation
    poly: NCPoly


class IdealBasis:
    """Echelon basis of the degree-d component of the two-sided ideal."""

    def __init__(self, dim: int, degree: int, echelon: Echelon):
        self.dim = dim
        self.degree = degree
        self.echelon = echelon

    @property
    def dimension(self) -> int:
        return self.echelon.rank

    @property
    def monomial_count(self) -> int:
        return (self.dim * self.dim) ** self.degree

    def column(self, word) -> int:
        g = self.dim * self.dim
        idx = 0
        for a in word:
            idx = idx * g + a
        return idx

    def word(self, col: int) -> Tuple[int, ...]:
        g = self.dim * self.dim
        out = [0] * self.degree
        for i in range(self.degree - 1, -1, -1):
            col, out[i] = divmod(col, g)
        return tuple(out)

    def vector(self, p: NCPoly) -> Dict[int, object]:
        return {self.column(w): c for w, c in p.terms.items()}

    def reduce(self, p: NCPoly) -> NCPoly:
        rest = self.echelon.reduce(self.vector(p))
        return NCPoly._wrap(self.dim, {self.word(c): v for c, v in rest.items()})


def build_ideal_component(rels: List[NCPoly], d: int, previous: Optional[IdealBasis] = None) -> IdealBasis:
    """Span of all shifts ``u * r * v`` (|u|+|v| = d-2) of the quadratic relations.

    For d > 2 the component equals ``V*I_{d-1} + I_{d-1}*V``, so it is
    generated from the echelon rows of ``previous`` when supplied.
    """
    if d < 2:
        raise ValueError("ideal components start at degree 2")
    dim = rels[0].dim if rels else (previous.dim if previous else 0)
    e = Echelon()
    if d == 2:
        basis = IdealBasis(dim, 2, e)
        for r in rels:
            if not r.is_homogeneous(2):
                raise ValueError("relations must be homogeneous of degree 2")
            e.add(basis.vector(r))
        return basis
    if previous is None or previous.degree != d - 1:
        previous = build_ideal_component(rels, d - 1)
    g = dim * dim
    shift = g ** (d - 1)
    prev_rows = [row for _, row in previous.echelon.rows()]
    for gen in range(g):
        for row in prev_rows:
            e.add({gen * shift + c: v for c, v in row.items()})
    for gen in range(g):
        for row in prev_rows:
            e.add({c * g + gen: v for c, v in row.items()})
    return IdealBasis(dim, d, e)


def membership(p: NCPoly, basis_for_degree) -> Tuple[bool, NCPoly]:
    """Reduce every homogeneous part of ``p``; returns (is_member, residual).

    ``basis_for_degree`` maps a degree to its :class:`IdealBasis`.  Parts of
    degree 0 or 1 are members only if zero.
    """
    residual: Terms = {}
    for d, part in p.homogeneous_parts().items():
        if d < 2:
            residual.update(part.terms)
            continue
        residual.update(basis_for_degree(d).reduce(part).terms)
    res = NCPoly._wrap(p.dim, residual)
    return not residual, res


# ---------------------------------------------------------------------------
# the algebra M(R,F)
# ---------------------------------------------------------------------------


class QuantumMatrixAlgebra:
    """Free algebra modulo the relations R_1 M_1 M_2 = M_1 M_2 R^{FF}_1.

    Holds caches of the F-conjugated copies ``M_kbar``, their products and
    the ideal components per degree.
    """

    def __init__(self, pair: RMatrixPair, drop_labels: Iterable = ()):
        if pair.D is None:
            raise ValueError("pair must be validated (closedness) before building the algebra")
        self.pair = pair
        self.N = pair.N
        self.M = generators(pair.N)
        # negative-control hook: relations with these labels are left out
        self.drop_labels = frozenset(tuple(x) for x in drop_labels)
        self._mbar: Dict[Tuple[int, int], OpPoly] = {}
        self._prod: Dict[Tuple[int, int, int], OpPoly] = {}
        self._ideal: Dict[int, IdealBasis] = {}
        self._sym: Dict = {}
        self._relations: Optional[List[Relation]] = None

    @property
    def q(self):
        return self.pair.q_param

    # -- M_kbar ------------------------------------------------------------
    def mbar(self, k: int, total: int) -> OpPoly:
        if not 1 <= k <= total:
            raise IndexError(f"M_{k} undefined on arity {total}")
        key = (k, total)
        if key not in self._mbar:
            if k == 1:
                val = embed_poly(self.M, 1, total)
            elif k < total:
                # M_kbar only touches slots 1..k
                val = embed_poly(self.mbar(k, k), 1, total)
            else:
                Fk = embed(self.pair.Fhat, k - 1, total)
                Fk_inv = embed(self.pair.F_inv, k - 1, total)
                val = Fk @ self.mbar(k - 1, total) @ Fk_inv
            self._mbar[key] = val
        return self._mbar[key]

    def mprod(self, i: int, j: int, total: int) -> OpPoly:
        """``M_ibar M_{i+1}bar ... M_jbar`` on arity ``total``."""
        key = (i, j, total)
        if key not in self._prod:
            if i == j:
                val = self.mbar(i, total)
            elif j == total and i == 1 and total > 1:
                val = embed_poly(self.mprod(1, j - 1, j - 1), 1, total) @ self.mbar(j, total)
            else:
                val = self.mprod(i, j - 1, total) @ self.mbar(j, total)
            self._prod[key] = val
        return self._prod[key]

    # -- relations and the ideal -------------------------------------------
    def relations(self) -> List[Relation]:
        if self._relations is None:
            rels = relation_matrix(self)
            out = []
            for rw, cw, p in rels.entries():
                out.append(Relation(rw + cw, p))
            if self.drop_labels:
                out = [r for r in out if r.label not in self.drop_labels]
            self._relations = out
        return self._relations

    def ideal(self, d: int) -> IdealBasis:
        if d not in self._ideal:
            rels = [r.poly for r in self.relations()]
            prev = self.ideal(d - 1) if d > 2 else None
            self._ideal[d] = build_ideal_component(rels, d, prev)
        return self._ideal[d]

    def membership(self, p: NCPoly) -> Tuple[bool, NCPoly]:
        return membership(p, self.ideal)

    def op_membership(self, X: OpPoly):
        """First entry of X outside the ideal as ``(row, col, residual)``, or None."""
        for rw, cw, p in X.entries():
            ok, res = self.membership(p)
            if not ok:
                return rw, cw, res
        return None


def mbar(M: OpPoly, k: int, F: SparseOp, total: int) -> OpPoly:
    """Stand-alone form of the recursion M_1 = M (x) I, M_{k+1} = F_k M_k F_k^-1."""
    F_inv = inverse(F)
    val = embed_poly(M, 1, total)
    for j in range(1, k):
        val = embed(F, j, total) @ val @ embed(F_inv, j, total)
    return val


def relation_matrix(alg: QuantumMatrixAlgebra) -> OpPoly:
    """R_1 M_1 M_2 - M_1 M_2 R^{FF}_1 on arity 2."""
    X = alg.mprod(1, 2, 2)
    return (alg.pair.Rhat @ X) - (X @ alg.pair.R_twist2)


def relations(pair: RMatrixPair) -> List[NCPoly]:
    return [r.poly for r in QuantumMatrixAlgebra(pair).relations()]


def ideal_component(rels: List[NCPoly], d: int) -> IdealBasis:
    return build_ideal_component(rels, d)


# ---------------------------------------------------------------------------
# lemma identities
# ---------------------------------------------------------------------------


@dataclass
class LemmaFailure:
    name: str
    where: str
    witness: str


def _op_diff_witness(a: OpPoly, b: OpPoly) -> Optional[str]:
    d = a - b
    w = d.first_nonzero()
    if w is None:
        return None
    rw, cw, p = w
    return f"entry {rw},{cw}: {p.render()}"


def check_lemma_a(alg: QuantumMatrixAlgebra, kmax: int) -> List[LemmaFailure]:
    """Free-algebra identities for every slot choice with total arity <= kmax+1.

    F_i M_kbar = M_kbar F_i and R_i M_kbar = M_kbar R_i for k not in {i, i+1};
    F_{i->k} M_ibar ... M_kbar = M_{i+1}bar ... M_{k+1}bar F_{i->k}.
    """
    fails: List[LemmaFailure] = []
    pair = alg.pair
    for t in range(2, kmax + 2):
        for i in range(1, t):
            Fi, Ri = embed(pair.Fhat, i, t), embed(pair.Rhat, i, t)
            for k in range(1, t + 1):
                if k in (i, i + 1):
                    continue
                Mk = alg.mbar(k, t)
                for name, X in (("l1", Fi), ("l1a", Ri)):
                    w = _op_diff_witness(X @ Mk, Mk @ X)
                    if w:
                        fails.append(LemmaFailure(name, f"arity={t} i={i} k={k}", w))
            for k in range(i, t):
                Fc = chain(pair.Fhat, i, k, t)
                lhs = Fc @ alg.mprod(i, k, t)
                rhs = alg.mprod(i + 1, k + 1, t) @ Fc
                w = _op_diff_witness(lhs, rhs)
                if w:
                    fails.append(LemmaFailure("l2", f"arity={t} i={i} k={k}", w))
    return fails


def alpha(alg: QuantumMatrixAlgebra, Y: SparseOp) -> NCPoly:
    """Tr_F(1..k)(Y M_1bar ... M_kbar) for an arity-k scalar operator Y."""
    k = Y.arity
    return partial_qtrace_poly(Y @ alg.mprod(1, k, k), alg.pair.D, range(1, k + 1))


def check_lemma_b(alg: QuantumMatrixAlgebra, Y: SparseOp, i: int) -> Optional[LemmaFailure]:
    """Tr_F(i..i+k-1)(Y^{(i,k)} M_ibar ... M_{i+k-1}bar) == I_{1..i-1} alpha(Y)."""
    k = Y.arity
    t = i + k - 1
    Yi = embed(Y, i, t)
    lhs = partial_qtrace_poly(Yi @ alg.mprod(i, t, t), alg.pair.D, range(i, t + 1))
    a = alpha(alg, Y)
    if i == 1:
        diff = lhs - a
        if diff:
            return LemmaFailure("l4", f"i=1 k={k}", diff.render())
        return None
    w = _op_diff_witness(lhs, identity_times(a, alg.N, i - 1))
    return LemmaFailure("l4", f"i={i} k={k}", w) if w else None


def check_lemma_c(alg: QuantumMatrixAlgebra, kmax: int) -> List[LemmaFailure]:
    """R_k M_kbar M_{k+1}bar - M_kbar M_{k+1}bar R^{FF}_k lies in the ideal."""
    fails = []
    pair = alg.pair
    for k in range(1, kmax + 1):
        t = k + 1
        X = alg.mprod(k, k + 1, t)
        diff = embed(pair.Rhat, k, t) @ X - X @ embed(pair.R_twist2, k, t)
        bad = alg.op_membership(diff)
        if bad:
            rw, cw, res = bad
            fails.append(LemmaFailure("l3", f"k={k}", f"entry {rw},{cw}: residual {res.render()}"))
    return fails
