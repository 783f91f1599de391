"""R-matrix pairs: braid/compatibility/Hecke checks, projector towers,
closedness (skew inverse, quantum trace matrix D) and twisting.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from . import qfield
from .qfield import eval_at, qnum
from .tensorspace import (
    NotInvertible,
    SparseOp,
    compose,
    elementary,
    embed,
    inverse,
    partial_qtrace,
    rank_exact,
    tensor,
)

FAMILIES = ("rtt-standard", "re-standard", "rtt-classical", "inverse-twist-standard", "custom")

FAMILY_NOTES = {
    "rtt-standard": "F = P: the RTT (FRT) algebra of the standard GL_q(N) R-matrix",
    "re-standard": "F = R: the reflection equation algebra of the standard GL_q(N) R-matrix",
    "rtt-classical": "R = F = P at q = 1: the commutative matrix algebra (numeric-q only)",
    "inverse-twist-standard": "F = R^-1 with the standard GL_q(N) R-matrix",
    "custom": "R and F read from matrix files",
}


class UnknownFamily(KeyError):
    pass


class NotEvenHecke(ValueError):
    pass


class NotClosed(ArithmeticError):
    pass


class QNumberZero(ZeroDivisionError):
    pass


class ValidationError(RuntimeError):
    def __init__(self, message: str, results=()):
        super().__init__(message)
        self.results = list(results)


@dataclass
class PropertyResult:
    name: str
    ok: bool
    witness: Optional[str] = None


@dataclass
class ProjectorTower:
    kind: str  # "antisymmetrizer" | "symmetrizer"
    levels: List[SparseOp]

    def __getitem__(self, k: int) -> SparseOp:
        # 1-based: tower[k] is A^(k) / S^(k)
        return self.levels[k - 1]

    def __len__(self):
        return len(self.levels)


@dataclass
class RMatrixPair:
    N: int
    Rhat: SparseOp
    Fhat: SparseOp
    q_param: object = field(default_factory=lambda: qfield.q)
    family: str = "custom"
    Psi: Optional[SparseOp] = None
    D: Optional[SparseOp] = None
    height: Optional[int] = None
    _cache: Dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def numeric(self) -> bool:
        return not isinstance(self.q_param, qfield.QRat)

    def cached(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    @property
    def F_inv(self) -> SparseOp:
        return self.cached("Finv", lambda: inverse(self.Fhat))

    @property
    def R_inv(self) -> SparseOp:
        return self.cached("Rinv", lambda: inverse(self.Rhat))

    @property
    def R_twist2(self) -> SparseOp:
        """The twist square R^{FF} = F^2 R F^-2."""
        return self.cached("RFF", lambda: twist(twist(self.Rhat, self.Fhat, self.F_inv), self.Fhat, self.F_inv))

    def antisym(self, kmax: int) -> ProjectorTower:
        t = self._cache.get("A")
        if t is None or len(t) < kmax:
            t = self._cache["A"] = antisymmetrizers(self.Rhat, kmax, self.q_param)
        return ProjectorTower(t.kind, t.levels[:kmax])

    def sym(self, kmax: int) -> ProjectorTower:
        t = self._cache.get("S")
        if t is None or len(t) < kmax:
            t = self._cache["S"] = symmetrizers(self.Rhat, kmax, self.q_param)
        return ProjectorTower(t.kind, t.levels[:kmax])

    def specialize(self, x) -> "RMatrixPair":
        """The same pair with q fixed to the rational ``x`` (not yet validated)."""
        x = Fraction(x)
        f = lambda v: eval_at(v, x)
        return RMatrixPair(self.N, self.Rhat.map(f), self.Fhat.map(f), x, self.family)


# ---------------------------------------------------------------------------
# braid-type relations
# ---------------------------------------------------------------------------


def _on3(X: SparseOp, i: int) -> SparseOp:
    return embed(X, i, 3)


def _witness(label: str, lhs: SparseOp, rhs: SparseOp) -> Optional[str]:
    d = lhs.first_difference(rhs)
    if d is None:
        return None
    rw, cw, a, b = d
    return f"{label}: entry {list(rw)},{list(cw)}: {a} != {b}"


def ybe_witness(X: SparseOp) -> Optional[str]:
    x1, x2 = _on3(X, 1), _on3(X, 2)
    return _witness("X1 X2 X1 vs X2 X1 X2", x1 @ x2 @ x1, x2 @ x1 @ x2)


def compatible_witness(R: SparseOp, F: SparseOp) -> Optional[str]:
    r1, r2, f1, f2 = _on3(R, 1), _on3(R, 2), _on3(F, 1), _on3(F, 2)
    return _witness("R1 F2 F1 vs F2 F1 R2", r1 @ f2 @ f1, f2 @ f1 @ r2) or _witness(
        "F1 F2 R1 vs R2 F1 F2", f1 @ f2 @ r1, r2 @ f1 @ f2
    )


def hecke_witness(R: SparseOp, qv=None) -> Optional[str]:
    qv = qfield.q if qv is None else qv
    ident = SparseOp.identity(R.dim, 2)
    return _witness("R^2 vs I + (q - q^-1) R", R @ R, ident + R.scale(qv - 1 / qv))


def check_ybe(X: SparseOp) -> bool:
    """X1 X2 X1 == X2 X1 X2 on V^(x)3."""
    return ybe_witness(X) is None


def check_compatible(R: SparseOp, F: SparseOp) -> bool:
    return compatible_witness(R, F) is None


def check_hecke(R: SparseOp, qv=None) -> bool:
    """R^2 == I + (q - 1/q) R."""
    return hecke_witness(R, qv) is None


# ---------------------------------------------------------------------------
# projector towers
# ---------------------------------------------------------------------------


def _tower(R: SparseOp, kmax: int, qv, sign: int, kind: str) -> ProjectorTower:
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    levels = [SparseOp.identity(R.dim, 1)]
    for k in range(2, kmax + 1):
        kq = qnum(k, qv)
        if not kq:
            raise QNumberZero(f"{k}_q vanishes")
        prev = embed(levels[-1], 1, k)
        mid = SparseOp.identity(R.dim, k, qv ** (sign * (k - 1))) + embed(R, k - 1, k).scale(-sign * qnum(k - 1, qv))
        levels.append((prev @ mid @ prev).scale(1 / kq))
    return ProjectorTower(kind, levels)


def antisymmetrizers(R: SparseOp, kmax: int, qv=None) -> ProjectorTower:
    """A^(1) = I, A^(k) = A^(k-1) (q^(k-1) - (k-1)_q R_{k-1}) A^(k-1) / k_q."""
    return _tower(R, kmax, qfield.q if qv is None else qv, 1, "antisymmetrizer")


def symmetrizers(R: SparseOp, kmax: int, qv=None) -> ProjectorTower:
    """S^(1) = I, S^(k) = S^(k-1) (q^(1-k) + (k-1)_q R_{k-1}) S^(k-1) / k_q."""
    return _tower(R, kmax, qfield.q if qv is None else qv, -1, "symmetrizer")


def height(R: SparseOp, nmax: int, qv=None) -> int:
    """Smallest n <= nmax with A^(n+1) = 0 and rank A^(n) = 1."""
    tower = antisymmetrizers(R, nmax + 1, qv)
    for n in range(1, nmax + 1):
        if tower[n + 1].is_zero():
            r = rank_exact(tower[n])
            if r != 1:
                raise NotEvenHecke(f"A^({n + 1}) = 0 but rank A^({n}) = {r}")
            return n
    raise NotEvenHecke(f"antisymmetrizer tower does not vanish up to level {nmax + 1}")


# ---------------------------------------------------------------------------
# closedness and the quantum trace
# ---------------------------------------------------------------------------


def skew_inverse(F: SparseOp) -> Tuple[SparseOp, SparseOp]:
    """Solve Psi^{af}_{cg} F^{gb}_{fd} = delta^a_d delta^b_c; D^a_b = Psi^{ac}_{bc}."""
    inverse(F)  # nonsingularity first; raises NotInvertible
    N = F.dim
    # reshuffle: Ft[(f,g),(b,d)] = F^{gb}_{fd}
    rows: Dict[int, Dict[int, object]] = {}
    for (rw, cw), v in F.entries.items():
        g, b = rw
        f, d = cw
        rows.setdefault(f * N + g, {})[b * N + d] = v
    Ft = SparseOp(N, 2, rows)
    try:
        Ft_inv = inverse(Ft)
    except NotInvertible:
        raise NotClosed("the (a,c)-reshuffled matrix of F is singular; F is not closed") from None
    # Psi~ = T Ft^-1 with T[(a,c),(b,d)] = delta_ad delta_bc, i.e. the flip
    psi_t = compose(SparseOp.permutation(N), Ft_inv)
    psi_rows: Dict[int, Dict[int, object]] = {}
    d_rows: Dict[int, Dict[int, object]] = {}
    for (rw, cw), v in psi_t.entries.items():
        a, c = rw
        f, g = cw
        psi_rows.setdefault(a * N + f, {})[c * N + g] = v
        if f == g:
            row = d_rows.setdefault(a, {})
            row[c] = row[c] + v if c in row else v
    d_rows = {a: {b: v for b, v in row.items() if v} for a, row in d_rows.items()}
    return SparseOp(N, 2, psi_rows), SparseOp(N, 1, d_rows)


def qtrace(X: SparseOp, D: SparseOp):
    """Tr_F X = Tr(D X) for an arity-1 operator."""
    return partial_qtrace(X, D, [1])


def _fmt_witness(w) -> Optional[str]:
    if w is None:
        return None
    rw, cw, a, b = w
    return f"entry {rw},{cw}: {a} != {b}"


def check_D_properties(pair: RMatrixPair, D: Optional[SparseOp] = None) -> List[PropertyResult]:
    """The three properties of D: trace of F, F D1 D2 = D1 D2 F, trace invariance."""
    D = pair.D if D is None else D
    N, F = pair.N, pair.Fhat
    Finv = pair.F_inv
    out = []
    I1 = SparseOp.identity(N, 1)

    lhs = partial_qtrace(F, D, [2])
    out.append(PropertyResult("qtrace-of-F", lhs == I1, _fmt_witness(lhs.first_difference(I1))))

    DD = tensor(D, D)
    a, b = F @ DD, DD @ F
    out.append(PropertyResult("F-commutes-DD", a == b, _fmt_witness(a.first_difference(b))))

    ok, wit = True, None
    for s, (P, Q) in (("+", (F, Finv)), ("-", (Finv, F))):
        for i in range(N):
            for j in range(N):
                X = elementary(N, i, j)
                lhs = partial_qtrace(P @ embed(X, 1, 2) @ Q, D, [2])
                rhs = I1.scale(qtrace(X, D))
                if lhs != rhs:
                    ok = False
                    if wit is None:
                        wit = f"F^{s}1 E_{i}{j} F^{'-' if s == '+' else '+'}1: " + _fmt_witness(lhs.first_difference(rhs))
    out.append(PropertyResult("qtrace-invariance", ok, wit))
    return out


def twist(R: SparseOp, F: SparseOp, F_inv: Optional[SparseOp] = None) -> SparseOp:
    """R^F = F R F^-1."""
    if F_inv is None:
        F_inv = inverse(F)
    return F @ R @ F_inv


def twist_square_witness(pair: RMatrixPair) -> Optional[str]:
    DD = tensor(pair.D, pair.D)
    return _witness("R^FF D1 D2 vs D1 D2 R", pair.R_twist2 @ DD, DD @ pair.Rhat)


def check_twist_square(pair: RMatrixPair) -> bool:
    """R^{FF}_1 D1 D2 == D1 D2 R_1."""
    return twist_square_witness(pair) is None


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------


def standard_rhat(N: int, qv=None) -> SparseOp:
    """Drinfeld-Jimbo braid matrix of GL_q(N)."""
    qv = qfield.q if qv is None else qv
    ent = {}
    for i in range(N):
        ent[((i, i), (i, i))] = qv
        for j in range(N):
            if i != j:
                ent[((i, j), (j, i))] = 1
            if i < j:
                ent[((i, j), (i, j))] = qv - 1 / qv
    return SparseOp.from_entries(N, 2, ent)


def builtin(family: str, N: int, q_value=None) -> RMatrixPair:
    """Unvalidated built-in pair; pass through :func:`validate` before use."""
    if N < 2:
        raise ValueError("N must be >= 2")
    if family == "rtt-classical":
        P = SparseOp.permutation(N)
        return RMatrixPair(N, P, P, Fraction(1) if q_value is None else Fraction(q_value), family)
    qv = qfield.q if q_value is None else Fraction(q_value)
    if family not in FAMILIES or family == "custom":
        raise UnknownFamily(family)
    R = standard_rhat(N, qv)
    if family == "rtt-standard":
        F = SparseOp.permutation(N)
    elif family == "re-standard":
        F = R
    else:
        F = inverse(R)
    return RMatrixPair(N, R, F, qv, family)


def validate(pair: RMatrixPair, nmax: Optional[int] = None, strict: bool = True) -> List[PropertyResult]:
    """Run the full preflight; fills Psi, D and height on success.

    Any failed property raises :class:`ValidationError` when ``strict``.
    """
    nmax = pair.N + 1 if nmax is None else nmax
    R, F = pair.Rhat, pair.Fhat
    res: List[PropertyResult] = []

    def add(name, ok, witness=None):
        res.append(PropertyResult(name, bool(ok), witness))

    def add_w(name, witness):
        add(name, witness is None, witness)

    add_w("ybe-R", ybe_witness(R))
    add_w("ybe-F", ybe_witness(F))
    add_w("compatible", compatible_witness(R, F))
    add_w("hecke", hecke_witness(R, pair.q_param))
    try:
        psi, D = skew_inverse(F)
        pair.Psi, pair.D = psi, D
        add("closed", True)
    except (NotClosed, NotInvertible) as exc:
        add("closed", False, str(exc))
        if strict:
            raise ValidationError(f"preflight failed: {exc}", res) from None
        return res
    res.extend(check_D_properties(pair))
    RF = twist(R, F, pair.F_inv)
    add_w("twist-ybe", ybe_witness(RF))
    add_w("twist-compatible", compatible_witness(RF, F))
    add_w("twist-square", twist_square_witness(pair))
    if res[3].ok:
        try:
            pair.height = height(R, nmax, pair.q_param)
            add("height", True, f"n = {pair.height}")
        except NotEvenHecke as exc:
            add("height", False, str(exc))
    else:
        add("height", False, "Hecke condition fails")
    failed = [r.name for r in res if not r.ok]
    if failed and strict:
        raise ValidationError("preflight failed: " + ", ".join(failed), res)
    return res
