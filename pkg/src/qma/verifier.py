"""Identity checks for quantum matrix algebras and the suite runner.

Every identity is proven by reducing the difference of its two sides modulo
the homogeneous component of the relation ideal of the right degree.  In
``exact`` mode the elimination runs over Q(q); ``fast`` mode repeats it
over the rationals at sampled values of q (a probabilistic pass).
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple

from . import qfield
from .matfile import InputError, read_matrix
from .ncalgebra import (
    NCPoly,
    OpPoly,
    QuantumMatrixAlgebra,
    check_lemma_a,
    check_lemma_b,
    check_lemma_c,
)
from .qfield import PoleError, qnum
from .rmatrix import (
    FAMILIES,
    RMatrixPair,
    ValidationError,
    antisymmetrizers,
    builtin,
    symmetrizers,
    validate,
)
from .symfun import (
    check_shift,
    complete,
    elementary,
    kernel,
    matrix_power,
    power_by_index,
    power_sum,
    sym_power,
    wedge_power,
)
from .tensorspace import SparseOp, chain

CHECKS = (
    "preflight",
    "lemma",
    "shift",
    "chn",
    "chn-sym",
    "newton",
    "wronski",
    "cayley-hamilton",
    "inverse-chn",
    "commutativity",
)

SAMPLE_RANGE = (2, 100)


@dataclass
class CheckResult:
    name: str
    mode: str
    status: str  # pass | fail | error
    witness: Optional[str] = None
    elapsed_ms: Optional[float] = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"


@dataclass
class SuiteConfig:
    family: str = "rtt-standard"
    N: int = 2
    kmax: Optional[int] = None
    nmax: Optional[int] = None
    checks: Sequence[str] = CHECKS
    mode: str = "exact"
    seed: int = 0
    samples: int = 5
    out: Optional[str] = None
    r_matrix: Optional[str] = None
    f_matrix: Optional[str] = None
    timings: bool = False
    # negative control: leave out the first k defining relations
    drop_relations: int = 0

    def echo(self) -> dict:
        d = asdict(self)
        d["checks"] = [c for c in CHECKS if c in self.checks]
        d.pop("out")
        return d


@dataclass
class SuiteReport:
    config: dict
    preflight: List[dict]
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def aggregate(self) -> dict:
        pre_ok = all(p["status"] == "pass" for p in self.preflight)
        counts = {s: sum(1 for c in self.checks if c.status == s) for s in ("pass", "fail", "error")}
        if not pre_ok or counts["error"]:
            status = "error"
        elif counts["fail"]:
            status = "fail"
        else:
            status = "pass"
        return {"status": status, "passed": counts["pass"], "failed": counts["fail"], "errors": counts["error"]}

    @property
    def exit_code(self) -> int:
        return {"pass": 0, "fail": 1, "error": 2}[self.aggregate["status"]]

    def to_json(self) -> str:
        doc = {
            "config": self.config,
            "preflight": self.preflight,
            "checks": [
                {"name": c.name, "mode": c.mode, "status": c.status, "witness": c.witness, "elapsed_ms": c.elapsed_ms}
                for c in self.checks
            ],
            "aggregate": self.aggregate,
        }
        return json.dumps(doc, indent=2) + "\n"


# ---------------------------------------------------------------------------
# residuals: left side minus right side of each identity
# ---------------------------------------------------------------------------


def _zero_op(alg) -> OpPoly:
    return OpPoly.zero(alg.N, 1)


def chn_residual(alg: QuantumMatrixAlgebra, k: int, qv=None) -> OpPoly:
    """(-1)^(k-1) k_q M^wedge k - sum_i (-q)^i M^(k-i)bar sigma_i.

    Passing ``qv`` rebuilds every explicit q (towers, q-numbers, weights)
    from that value; ``qv = reflect(q)`` turns this into the symmetric form.
    """
    own = qv is None
    qv = alg.q if own else qv
    tower = None if own else antisymmetrizers(alg.pair.Rhat, k, qv)
    lhs = wedge_power(alg, k, tower).value.scale((-1) ** (k - 1) * qnum(k, qv))
    for i in range(k):
        term = matrix_power(alg, k - i).value.times_poly(elementary(alg, i, tower).value)
        lhs = lhs - term.scale((-qv) ** i)
    return lhs


def chn_sym_residual(alg: QuantumMatrixAlgebra, k: int, qv=None) -> OpPoly:
    """k_q M^S k - sum_i q^-i M^(k-i)bar tau_i."""
    own = qv is None
    qv = alg.q if own else qv
    tower = None if own else symmetrizers(alg.pair.Rhat, k, qv)
    lhs = sym_power(alg, k, tower).value.scale(qnum(k, qv))
    for i in range(k):
        term = matrix_power(alg, k - i).value.times_poly(complete(alg, i, tower).value)
        lhs = lhs - term.scale(qv ** (-i))
    return lhs


def newton_residuals(alg: QuantumMatrixAlgebra, k: int) -> Tuple[NCPoly, NCPoly]:
    qv = alg.q
    s = lambda i: power_sum(alg, i).value
    e = elementary(alg, k).value.scale((-1) ** (k - 1) * qnum(k, qv))
    h = complete(alg, k).value.scale(qnum(k, qv))
    for i in range(k):
        e = e - (s(k - i) * elementary(alg, i).value).scale((-qv) ** i)
        h = h - (s(k - i) * complete(alg, i).value).scale(qv ** (-i))
    return e, h


def wronski_residual(alg: QuantumMatrixAlgebra, k: int) -> NCPoly:
    out = NCPoly(alg.N)
    for i in range(k + 1):
        out = out + (complete(alg, k - i).value * elementary(alg, i).value).scale((-1) ** i)
    return out


def cayley_hamilton_residual(alg: QuantumMatrixAlgebra) -> OpPoly:
    n, qv = alg.pair.height, alg.q
    out = _zero_op(alg)
    for i in range(n + 1):
        out = out + power_by_index(alg, n - i).times_poly(elementary(alg, i).value).scale((-qv) ** i)
    return out


def inverse_chn_residuals(alg: QuantumMatrixAlgebra, k: int) -> Tuple[OpPoly, OpPoly]:
    qv = alg.q
    Mk = matrix_power(alg, k).value
    a, b = Mk, Mk
    for i in range(1, k + 1):
        iq = qnum(i, qv)
        a = a - wedge_power(alg, i).value.times_poly(complete(alg, k - i).value).scale((-1) ** (i + 1) * qv ** (k - i) * iq)
        b = b - sym_power(alg, i).value.times_poly(elementary(alg, k - i).value).scale((-1) ** (k - i) * qv ** (i - k) * iq)
    return a, b


_CHAR = {"s": power_sum, "sigma": elementary, "tau": complete}


def commutator(alg: QuantumMatrixAlgebra, a: Tuple[str, int], b: Tuple[str, int]) -> NCPoly:
    x = _CHAR[a[0]](alg, a[1]).value
    y = _CHAR[b[0]](alg, b[1]).value
    return x * y - y * x


def default_commutator_pairs(total: int) -> List[Tuple[Tuple[str, int], Tuple[str, int]]]:
    """All pairs of families with indices 1 <= k <= i and k + i <= total."""
    fams = ("s", "sigma", "tau")
    out = []
    for deg in range(2, total + 1):
        for k in range(1, deg // 2 + 1):
            i = deg - k
            for fa in fams:
                for fb in fams:
                    if k == i and fams.index(fb) <= fams.index(fa):
                        continue
                    out.append(((fa, k), (fb, i)))
    return out


# ---------------------------------------------------------------------------
# membership wrappers: return a witness string or None
# ---------------------------------------------------------------------------


def _op_witness(alg: QuantumMatrixAlgebra, X: OpPoly) -> Optional[str]:
    bad = alg.op_membership(X)
    if bad is None:
        return None
    rw, cw, res = bad
    return f"entry {list(rw)},{list(cw)}: residual {res.render()}"


def _poly_witness(alg: QuantumMatrixAlgebra, p: NCPoly) -> Optional[str]:
    ok, res = alg.membership(p)
    return None if ok else f"residual {res.render()}"


def check_chn(alg, k) -> Optional[str]:
    return _op_witness(alg, chn_residual(alg, k))


def check_chn_sym(alg, k) -> Optional[str]:
    return _op_witness(alg, chn_sym_residual(alg, k))


def check_newton(alg, k) -> Optional[str]:
    e, h = newton_residuals(alg, k)
    w = _poly_witness(alg, e)
    if w:
        return "elementary form: " + w
    w = _poly_witness(alg, h)
    return "complete form: " + w if w else None


def check_wronski(alg, k) -> Optional[str]:
    return _poly_witness(alg, wronski_residual(alg, k))


def check_cayley_hamilton(alg) -> Optional[str]:
    return _op_witness(alg, cayley_hamilton_residual(alg))


def check_inverse_chn(alg, k) -> Optional[str]:
    a, b = inverse_chn_residuals(alg, k)
    w = _op_witness(alg, a)
    if w:
        return "wedge form: " + w
    w = _op_witness(alg, b)
    return "symmetric form: " + w if w else None


def check_commutativity(alg, pairs) -> Optional[str]:
    for a, b in pairs:
        w = _poly_witness(alg, commutator(alg, a, b))
        if w:
            return f"[{a[0]}_{a[1]}, {b[0]}_{b[1]}]: {w}"
    return None


def _lemma_a(alg, arity_bound) -> Optional[str]:
    fails = check_lemma_a(alg, arity_bound - 1)
    return None if not fails else f"{fails[0].name} {fails[0].where}: {fails[0].witness}"


def _lemma_c(alg, kmax) -> Optional[str]:
    fails = check_lemma_c(alg, kmax)
    return None if not fails else f"{fails[0].name} {fails[0].where}: {fails[0].witness}"


def lemma_b_kernels(alg, k) -> List[Tuple[str, SparseOp]]:
    """Sample polynomials in R_1..R_{k-1} used for the trace-shift lemma."""
    N = alg.N
    out = [("I", SparseOp.identity(N, k))]
    if k >= 2:
        out.append(("R_1->%d" % (k - 1), chain(alg.pair.Rhat, 1, k - 1, k)))
        out.append(("A", kernel(alg, "elementary", k)))
        out.append(("S", kernel(alg, "complete", k)))
    return out


def _lemma_b(alg, arity_bound) -> Optional[str]:
    for i in range(2, arity_bound + 1):
        for k in range(1, arity_bound - i + 2):
            for name, Y in lemma_b_kernels(alg, k):
                f = check_lemma_b(alg, Y, i)
                if f:
                    return f"l4 i={i} k={k} Y={name}: {f.witness}"
    return None


def _shift(alg, arity_bound) -> Optional[str]:
    pair = alg.pair
    for i in range(1, arity_bound):
        for k in range(1, arity_bound - i + 1):
            kernels = [("A", kernel(alg, "elementary", k))]
            if k >= 2:
                kernels.insert(0, ("R_1->%d" % (k - 1), chain(pair.Rhat, 1, k - 1, k)))
            for name, Y in kernels:
                w = check_shift(pair, Y, i)
                if w:
                    return f"i={i} k={k} Y={name}: {w}"
    return None


# ---------------------------------------------------------------------------
# suite
# ---------------------------------------------------------------------------


def load_pair(config: SuiteConfig) -> RMatrixPair:
    if config.family == "custom" or config.r_matrix or config.f_matrix:
        if not (config.r_matrix and config.f_matrix):
            raise InputError("custom input needs both --r-matrix and --f-matrix")
        if config.nmax is None:
            raise InputError("custom input requires an explicit height bound (nmax)")
        R, F = read_matrix(config.r_matrix), read_matrix(config.f_matrix)
        if R.dim != F.dim:
            raise InputError(f"R has dim {R.dim} but F has dim {F.dim}")
        if config.N and config.N != R.dim:
            raise InputError(f"--n {config.N} does not match matrix dim {R.dim}")
        return RMatrixPair(R.dim, R, F, qfield.q, "custom")
    if config.family not in FAMILIES:
        raise InputError(f"unknown family {config.family!r}; choose from {', '.join(FAMILIES)}")
    return builtin(config.family, config.N)


def sample_order(seed: int) -> List[int]:
    """Candidate q values 2..100 shuffled by ``random.Random(seed)``
    (Mersenne Twister); samples are taken from the front, skipping poles."""
    pool = list(range(SAMPLE_RANGE[0], SAMPLE_RANGE[1] + 1))
    random.Random(seed).shuffle(pool)
    return pool


def specialized_algebras(pair: RMatrixPair, config: SuiteConfig, drop) -> List[Tuple[int, QuantumMatrixAlgebra]]:
    out = []
    for x in sample_order(config.seed):
        if len(out) == config.samples:
            break
        try:
            sp = pair.specialize(x)
            validate(sp, pair.height)
        except (PoleError, ZeroDivisionError, ValidationError):
            continue
        out.append((x, QuantumMatrixAlgebra(sp, drop)))
    return out


def _plan(config: SuiteConfig, alg: QuantumMatrixAlgebra):
    n = alg.pair.height
    kmax = config.kmax if config.kmax is not None else n
    sel = set(config.checks)
    plan: List[Tuple[str, Callable]] = []
    bound = kmax + 1
    if "lemma" in sel:
        plan.append(("lemma-a", lambda a: _lemma_a(a, bound)))
        plan.append(("lemma-b", lambda a: _lemma_b(a, bound)))
        plan.append(("lemma-c", lambda a: _lemma_c(a, kmax)))
    if "shift" in sel:
        plan.append(("shift", lambda a: _shift(a, bound)))
    for k in range(1, kmax + 1):
        if "chn" in sel:
            plan.append((f"chn[k={k}]", lambda a, k=k: check_chn(a, k)))
    for k in range(1, kmax + 1):
        if "chn-sym" in sel:
            plan.append((f"chn-sym[k={k}]", lambda a, k=k: check_chn_sym(a, k)))
    for k in range(1, kmax + 1):
        if "newton" in sel:
            plan.append((f"newton[k={k}]", lambda a, k=k: check_newton(a, k)))
    for k in range(1, kmax + 1):
        if "wronski" in sel:
            plan.append((f"wronski[k={k}]", lambda a, k=k: check_wronski(a, k)))
    if "cayley-hamilton" in sel:
        plan.append((f"cayley-hamilton[n={n}]", check_cayley_hamilton))
    for k in range(1, min(kmax, n) + 1):
        if "inverse-chn" in sel:
            plan.append((f"inverse-chn[k={k}]", lambda a, k=k: check_inverse_chn(a, k)))
    if "commutativity" in sel:
        for a_, b_ in default_commutator_pairs(min(kmax, n) + 1):
            name = f"commutativity[{a_[0]}_{a_[1]},{b_[0]}_{b_[1]}]"
            plan.append((name, lambda a, p=((a_, b_),): check_commutativity(a, p)))
    return plan


def run_suite(config: SuiteConfig) -> SuiteReport:
    """Preflight, then the selected identity checks in fixed order.

    Raises InputError for unreadable input.  A failed preflight raises
    ValidationError whose ``report`` attribute holds the preflight results.
    """
    if config.mode not in ("exact", "fast"):
        raise InputError(f"unknown mode {config.mode!r}")
    unknown = set(config.checks) - set(CHECKS)
    if unknown:
        raise InputError(f"unknown checks: {', '.join(sorted(unknown))}")
    if config.kmax is not None and config.kmax < 1:
        raise InputError("kmax must be >= 1")
    pair = load_pair(config)
    report = SuiteReport(config.echo(), [])
    try:
        results = validate(pair, config.nmax, strict=False)
    except Exception as exc:  # malformed custom input (shape errors etc.)
        raise InputError(f"cannot validate input pair: {exc}") from exc
    report.preflight = [
        {"name": r.name, "status": "pass" if r.ok else "fail", "witness": r.witness} for r in results
    ]
    failed = [r.name for r in results if not r.ok]
    if failed:
        err = ValidationError("preflight failed: " + ", ".join(failed), results)
        err.report = report
        raise err

    alg = QuantumMatrixAlgebra(pair)
    drop = []
    if config.drop_relations:
        drop = [r.label for r in alg.relations()[: config.drop_relations]]
        alg = QuantumMatrixAlgebra(pair, drop)

    fast = config.mode == "fast" and not pair.numeric
    targets = specialized_algebras(pair, config, drop) if fast else [(None, alg)]
    mode = "probabilistic" if fast else "exact"
    for name, fn in _plan(config, alg):
        t0 = time.perf_counter()
        status, witness = "pass", None
        try:
            for x, a in targets:
                w = fn(a)
                if w:
                    status = "fail"
                    witness = w if x is None else f"q={x}: {w}"
                    break
        except Exception as exc:
            status, witness = "error", f"{type(exc).__name__}: {exc}"
        elapsed = round((time.perf_counter() - t0) * 1000, 3) if config.timings else None
        report.checks.append(CheckResult(name, mode, status, witness, elapsed))
    return report


def write_report(report: SuiteReport, path) -> None:
    Path(path).write_text(report.to_json())

