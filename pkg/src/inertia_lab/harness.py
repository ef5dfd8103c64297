"""Randomized verification and witness search for negativity claims.

Claim vocabulary (the ``theorem`` field of run configs and reports):

* ``inertia`` -- f[A] has the same (neg, zero, pos) counts as A.
* ``exact``   -- on tuples with exactly k_p negatives per slot, the image has
  exactly l negatives (uniform k, l = k).
* ``closure`` -- on tuples with at most k_p negatives per slot, the image has
  at most l negatives.
* ``bounded`` -- on tuples with exactly k_p negatives per slot, the image has
  at most l negatives; l = 0 means the image must be PSD.
* ``lift``    -- the image negativity count is unchanged when every slot is
  lifted by replicating its last coordinate (checked at sizes n, n+3, n+7).

``verify_forward`` first runs the syntactic classifier; a non-conforming
function yields a vacuous report (nothing is verified).  ``falsify`` goes the
other way: it uses the violated clause to pick a witness recipe, validates
every candidate numerically (membership, domain, and the violation itself),
and falls back to seeded random search when no recipe applies.  Reports are
deterministic for a fixed seed, independent of the thread count.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .constructions import (
    block_pair,
    direct_sum,
    embed_with_negatives,
    equicorrelation,
    inflate,
    lift_finite,
    ones_pencil,
    ones_spike,
    pencil_base,
    two_by_two_pair,
    vandermonde_psd,
)
from .errors import ConfigError, DomainViolation, SamplingError
from .functions import (
    AdmissibleK,
    FunctionSpec,
    PreserverVerdict,
    _decompose,
    apply_entrywise,
    classify,
)
from .linalg import (
    DEFAULT_TOL,
    DomainSpec,
    Inertia,
    SymMatrix,
    TolerancePolicy,
    eig_sym,
    inertia,
)

CLAIMS = ("inertia", "exact", "closure", "bounded", "lift")
STRATEGIES = ("auto", "recipe", "random")

_CLAIM_TO_MODE = {"inertia": "inertia", "exact": "exact", "closure": "bounded", "bounded": "bounded"}

#: cap on witnesses stored in a report (keeps files small and deterministic)
WITNESS_CAP = 10

#: scale halvings a recipe may take before giving up
RECIPE_HALVINGS = 40

_SAMPLE_ATTEMPTS = 100


def _thread_count(threads: int | None) -> int:
    if threads is None:
        return os.cpu_count() or 1
    if not isinstance(threads, int) or threads < 1:
        raise ConfigError("threads must be a positive int")
    return threads


def _run_indexed(worker: Callable[[int], object], count: int, threads: int) -> list:
    """Run worker(0..count-1), returning results in index order."""
    if threads <= 1 or count <= 1:
        return [worker(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, range(count)))


def _trial_rng(seed: int, index: int) -> np.random.Generator:
    # counter-based Philox keyed by (seed, stream): identical streams for a
    # given trial index no matter how trials are scheduled across threads
    return np.random.Generator(np.random.Philox(key=[seed, index]))


# ---------------------------------------------------------------------------
# run configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrialConfig:
    """Sampling parameters shared by verification and falsification runs."""

    dom: DomainSpec
    k: AdmissibleK
    l: int
    n_range: tuple[int, int] | None = None
    trials: int = 200
    seed: int = 0
    tol: TolerancePolicy = field(default_factory=TolerancePolicy)

    def __post_init__(self):
        if not isinstance(self.l, int) or isinstance(self.l, bool) or self.l < 0:
            raise ConfigError(f"l must be a nonnegative int, got {self.l!r}")
        if not isinstance(self.trials, int) or not 1 <= self.trials <= 10_000_000:
            raise ConfigError("trials must be an int in 1..10_000_000")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be an int in [0, 2^64)")
        kmax = max(self.k.k)
        floor = kmax + 1 if (self.dom.one_sided and kmax >= 1) else max(1, kmax)
        if self.n_range is None:
            object.__setattr__(self, "n_range", (floor + 1, floor + 6))
        lo, hi = self.n_range
        if not (isinstance(lo, int) and isinstance(hi, int) and 1 <= lo <= hi):
            raise ConfigError(f"bad n_range {self.n_range!r}")
        if lo < floor:
            raise ConfigError(
                f"n_range starts at {lo}, but k={self.k.k} over {self.dom.kind} needs n >= {floor}"
            )
        object.__setattr__(self, "n_range", (lo, hi))

    def to_json_dict(self) -> dict:
        return {
            "domain": self.dom.to_json_dict(),
            "k": self.k.to_json_list(),
            "l": self.l,
            "n_range": list(self.n_range),
            "trials": self.trials,
            "seed": self.seed,
            "tolerance": self.tol.to_json_dict(),
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "TrialConfig":
        if not isinstance(d, dict):
            raise ConfigError("config must be a JSON object")
        allowed = {"domain", "k", "l", "n_range", "trials", "seed", "tolerance"}
        unknown = set(d) - allowed
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "k" not in d or "l" not in d:
            raise ConfigError('config must set "k" and "l"')
        n_range = d.get("n_range")
        if n_range is not None:
            if not (isinstance(n_range, list) and len(n_range) == 2):
                raise ConfigError("n_range must be a [min, max] pair")
            n_range = (n_range[0], n_range[1])
        return cls(
            dom=DomainSpec.from_json_dict(d.get("domain", {})),
            k=AdmissibleK.from_json(d["k"]),
            l=d["l"],
            n_range=n_range,
            trials=d.get("trials", 200),
            seed=d.get("seed", 0),
            tol=TolerancePolicy.from_json_dict(d.get("tolerance", {})),
        )


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def _random_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    sgn = np.sign(np.diag(r))
    sgn[sgn == 0.0] = 1.0
    return q * sgn


def sample_with_inertia(
    n: int,
    k: int,
    dom: DomainSpec,
    rng: np.random.Generator,
    tol: TolerancePolicy = DEFAULT_TOL,
) -> SymMatrix:
    """Random matrix with exactly k negative eigenvalues and entries in dom.

    Over a two-sided domain the sample is a rescaled Q diag(lam) Q^T with no
    zero eigenvalues.  Over one-sided domains entries must be nonnegative, so
    a matrix with all-negative spectrum is impossible (the trace would be
    negative); n == k raises :class:`SamplingError`.  Sizes k+1 use the
    equicorrelation family; larger sizes embed a random PSD block next to it
    and occasionally inflate a smaller core, which adds zero eigenvalues but
    no negatives.
    """
    if not isinstance(n, int) or n < 1:
        raise ConfigError("n must be a positive int")
    if not isinstance(k, int) or not 0 <= k <= n:
        raise ConfigError(f"k must lie in 0..{n}, got {k!r}")
    rho = dom.rho_eff

    if dom.one_sided and k >= 1 and n == k:
        raise SamplingError(
            f"no {n}x{n} matrix over {dom.kind} has all {k} eigenvalues negative "
            "(nonnegative entries force a nonnegative trace)"
        )

    for _ in range(_SAMPLE_ATTEMPTS):
        if not dom.one_sided:
            q = _random_orthogonal(n, rng)
            lam = np.concatenate(
                [-rng.uniform(0.2, 1.0, size=k), rng.uniform(0.2, 1.0, size=n - k)]
            )
            a0 = (q * lam) @ q.T
            peak = float(np.max(np.abs(a0)))
            target = (0.25 + 0.6 * rng.uniform()) * rho
            cand = SymMatrix(a0 * (target / peak))
        elif k == 0:
            v = rng.uniform(0.3, 1.0, size=(n, n))
            g = v @ v.T
            target = (0.25 + 0.6 * rng.uniform()) * rho
            cand = SymMatrix(g * (target / float(np.max(g))))
        else:
            a = rho * rng.uniform(0.05, 0.2)
            b = a + rho * rng.uniform(0.15, 0.35)
            if n == k + 1:
                cand = equicorrelation(k, a, b)
            elif rng.uniform() < 0.35 and n >= k + 2:
                s = int(rng.integers(k + 1, n))
                core = sample_with_inertia(s, k, dom, rng, tol)
                cuts = sorted(rng.choice(np.arange(1, n), size=s - 1, replace=False).tolist())
                bounds = [0] + [int(c) for c in cuts] + [n]
                partition = [list(range(bounds[i], bounds[i + 1])) for i in range(s)]
                cand = inflate(core, partition)
            else:
                nb = n - k - 1
                v = rng.uniform(0.3, 1.0, size=(nb, nb))
                g = v @ v.T
                psd = SymMatrix(g * (b / float(np.max(g))))
                eps = rho * rng.uniform(0.01, 0.05)
                if dom.kind == "closed_left" and rng.uniform() < 0.3:
                    eps = 0.0
                cand = embed_with_negatives(a, b, k, eps, psd)
        try:
            dom.check_matrix(cand)
        except DomainViolation:
            continue
        if inertia(cand, tol).n_neg == k:
            return cand
    raise SamplingError(f"could not sample n={n}, k={k} over {dom.kind} in {_SAMPLE_ATTEMPTS} attempts")


def sample_member_tuple(
    ks: AdmissibleK,
    n: int,
    dom: DomainSpec,
    rng: np.random.Generator,
    tol: TolerancePolicy = DEFAULT_TOL,
    closure: bool = False,
) -> tuple[SymMatrix, ...]:
    """One matrix per slot: exactly k_p negatives (or j <= k_p under closure)."""
    mats = []
    for k_p in ks.k:
        kk = int(rng.integers(0, k_p + 1)) if closure else k_p
        mats.append(sample_with_inertia(n, kk, dom, rng, tol))
    return tuple(mats)


# ---------------------------------------------------------------------------
# witnesses and reports
# ---------------------------------------------------------------------------

@dataclass
class Witness:
    """A concrete tuple on which a claim fails, plus the observed image counts."""

    mats: tuple[SymMatrix, ...]
    fn: FunctionSpec
    observed: Inertia
    clause: str

    def to_json_dict(self) -> dict:
        return {
            "matrices": [m.to_json_dict() for m in self.mats],
            "fn": self.fn.to_json_dict(),
            "observed": self.observed.to_json_dict(),
            "clause": self.clause,
        }

    def revalidate(self, claim: str, cfg: TrialConfig) -> bool:
        """Recompute everything from scratch and confirm the violation."""
        try:
            checked = _make_witness(claim, self.fn, self.mats, cfg, self.clause)
        except (ConfigError, DomainViolation):
            return False
        return checked is not None and checked.observed == self.observed


@dataclass
class VerdictReport:
    claim: str
    mode: str
    fn: FunctionSpec | None
    config: TrialConfig
    trials: int
    failures: int
    witnesses: list[Witness]
    label: str
    runtime_ms: float = 0.0

    def to_json_dict(self) -> dict:
        # runtime_ms is intentionally absent: report files must be
        # byte-identical across runs; wall time goes to the CSV summary
        return {
            "theorem": self.claim,
            "mode": self.mode,
            "config": {
                "fn": self.fn.to_json_dict() if self.fn is not None else None,
                **self.config.to_json_dict(),
            },
            "trials": self.trials,
            "failures": self.failures,
            "witnesses": [w.to_json_dict() for w in self.witnesses],
            "label": self.label,
        }

    def summary_line(self) -> str:
        return (
            f"{self.mode} {self.claim}: trials={self.trials} failures={self.failures} "
            f"witnesses={len(self.witnesses)} runtime_ms={self.runtime_ms:.1f} :: {self.label}"
        )

    def csv_row(self) -> dict:
        return {
            "theorem": self.claim,
            "mode": self.mode,
            "trials": self.trials,
            "failures": self.failures,
            "witnesses": len(self.witnesses),
            "label": self.label,
            "runtime_ms": f"{self.runtime_ms:.3f}",
        }


CSV_FIELDS = ["theorem", "mode", "trials", "failures", "witnesses", "label", "runtime_ms"]


def _violation(claim: str, l: int, out: Inertia, ref: Inertia | None) -> bool:
    if claim in ("bounded", "closure"):
        return out.n_neg > l
    if claim == "exact":
        return out.n_neg != l
    if claim == "inertia":
        return out != ref
    raise ConfigError(f"no violation predicate for claim {claim!r}")


def _make_witness(
    claim: str,
    fn: FunctionSpec,
    mats: Sequence[SymMatrix],
    cfg: TrialConfig,
    clause: str,
) -> Witness | None:
    """Validate a candidate tuple end to end; None when it is no witness."""
    mats = tuple(mats)
    if len(mats) != cfg.k.m:
        return None
    ref = None
    for p, (m, k_p) in enumerate(zip(mats, cfg.k.k), start=1):
        cfg.dom.check_matrix(m, slot=p)
        ine = inertia(m, cfg.tol)
        if claim == "closure":
            if ine.n_neg > k_p:
                return None
        elif ine.n_neg != k_p:
            return None
        if p == 1:
            ref = ine
    image = apply_entrywise(fn, mats, cfg.dom)
    out = inertia(image, cfg.tol)
    if _violation(claim, cfg.l, out, ref):
        return Witness(mats, fn, out, clause)
    return None


# ---------------------------------------------------------------------------
# forward verification
# ---------------------------------------------------------------------------

def _check_claim(claim: str, fn: FunctionSpec, cfg: TrialConfig) -> None:
    if claim not in CLAIMS:
        raise ConfigError(f"unknown claim {claim!r}; choose from {CLAIMS}")
    if fn.arity != cfg.k.m:
        raise ConfigError(f"function arity {fn.arity} does not match k arity {cfg.k.m}")
    if claim == "inertia" and cfg.k.m != 1:
        raise ConfigError("the inertia claim is single-variable")


def verify_forward(
    claim: str,
    fn: FunctionSpec,
    cfg: TrialConfig,
    threads: int | None = None,
) -> VerdictReport:
    """Sample members, apply ``fn``, and check the claim on every image.

    When the classifier says the function is outside the conforming family,
    the run is vacuous: nothing is sampled and the label says so.
    """
    _check_claim(claim, fn, cfg)
    threads = _thread_count(threads)
    started = time.perf_counter()

    if claim != "lift":
        verdict = classify(fn, cfg.k, cfg.l, cfg.dom, mode=_CLAIM_TO_MODE[claim])
        if not verdict.conforms:
            return VerdictReport(
                claim, "verify", fn, cfg, 0, 0, [],
                label=(
                    f"vacuous: function violates clause '{verdict.clause}'"
                    f" ({verdict.detail}); nothing verified"
                ),
                runtime_ms=1000.0 * (time.perf_counter() - started),
            )

    lo, hi = cfg.n_range

    def worker(i: int):
        rng = _trial_rng(cfg.seed, i)
        n = int(rng.integers(lo, hi + 1))
        mats = sample_member_tuple(cfg.k, n, cfg.dom, rng, cfg.tol, closure=(claim == "closure"))
        if claim == "lift":
            base = inertia(apply_entrywise(fn, mats, cfg.dom), cfg.tol).n_neg
            for extra in (0, 3, 7):
                lifted = tuple(lift_finite(m, n + extra) for m in mats)
                count = inertia(apply_entrywise(fn, lifted, cfg.dom), cfg.tol).n_neg
                if count != base:
                    out = inertia(apply_entrywise(fn, lifted, cfg.dom), cfg.tol)
                    return Witness(lifted, fn, out, "lift-transfer-mismatch")
            return None
        ref = inertia(mats[0], cfg.tol) if claim == "inertia" else None
        out = inertia(apply_entrywise(fn, mats, cfg.dom), cfg.tol)
        if _violation(claim, cfg.l, out, ref):
            return Witness(mats, fn, out, f"verify-failure:{claim}")
        return None

    results = _run_indexed(worker, cfg.trials, threads)
    witnesses = [w for w in results if w is not None]
    failures = len(witnesses)
    label = (
        f"pass: {cfg.trials} trials, 0 failures"
        if failures == 0
        else f"FAIL: {failures} of {cfg.trials} trials violated the claim"
    )
    return VerdictReport(
        claim, "verify", fn, cfg, cfg.trials, failures, witnesses[:WITNESS_CAP],
        label=label, runtime_ms=1000.0 * (time.perf_counter() - started),
    )


# ---------------------------------------------------------------------------
# witness recipes
# ---------------------------------------------------------------------------

def _ones(n: int, v: float) -> SymMatrix:
    return SymMatrix(np.full((n, n), v))


def _member_filler(n: int, k_q: int, dom: DomainSpec, t0: float, eps: float) -> SymMatrix:
    """A size-n matrix with exactly k_q negatives, valid in dom."""
    if k_q == 0:
        return _ones(n, t0)
    if dom.one_sided and n < k_q + 1:
        raise ConfigError(f"cannot place {k_q} negatives in size {n} over {dom.kind}")
    if n < k_q:
        raise ConfigError(f"cannot place {k_q} negatives in size {n}")
    if not dom.one_sided:
        diag = np.concatenate([-t0 * np.ones(k_q), t0 * np.ones(n - k_q)])
        return SymMatrix(np.diag(diag))
    if n == k_q + 1:
        return equicorrelation(k_q, t0, 2 * t0)
    pad = SymMatrix(t0 * np.eye(n - k_q - 1))
    shift = eps if dom.kind == "open_positive" else 0.0
    return embed_with_negatives(t0, 2 * t0, k_q, shift, pad)


def _pad_with_identity(core: SymMatrix, n: int, t0: float, dom: DomainSpec, eps: float) -> SymMatrix:
    """Extend to size n with a positive identity block; exact negatives kept."""
    if core.n > n:
        raise ConfigError("cannot pad downwards")
    if core.n == n:
        return core
    out = direct_sum([core, SymMatrix(t0 * np.eye(n - core.n))])
    if dom.kind == "open_positive":
        out = SymMatrix(out.entries + eps * np.ones((n, n)))
    return out


def _fill_slots(
    builder: Callable[[int], SymMatrix],
    target_slot: int,
    target_mat: SymMatrix,
    ks: AdmissibleK,
    dom: DomainSpec,
    t0: float,
    eps: float,
) -> tuple[SymMatrix, ...]:
    """Place target_mat in its slot, member fillers everywhere else."""
    n = target_mat.n
    mats = []
    for q, k_q in enumerate(ks.k, start=1):
        if q == target_slot:
            mats.append(target_mat)
        elif k_q == 0:
            mats.append(builder(n))
        else:
            mats.append(_member_filler(n, k_q, dom, t0, eps))
    return tuple(mats)


def _first_bad_slot(fn: FunctionSpec, m0: int) -> int:
    _, _, _, bad = _decompose(fn, m0)
    alpha, _, _ = bad[0]
    for p, e in enumerate(alpha, start=1):
        if e and p > m0:
            return p
    raise ConfigError("no constrained variable in the offending term")


def _recipe_nonlinear(fn, claim, cfg, rng):
    ks, dom = cfg.k, cfg.dom
    _, _, _, bad = _decompose(fn, ks.m0)
    alpha = bad[0][0]
    p = _first_bad_slot(fn, ks.m0)
    k_p = ks.k[p - 1]

    def candidates(t0, eps):
        if k_p >= 2:
            size = 2 * k_p - 1
            zero = SymMatrix(np.zeros((size, size)))
            core = block_pair(zero, vandermonde_psd(k_p, t0))
            if dom.one_sided:
                core = SymMatrix(core.entries + eps * np.ones((core.n, core.n)))
        else:
            a2, b2 = two_by_two_pair(t0)
            core = block_pair(a2, b2)
        n = core.n
        mats = []
        for q, k_q in enumerate(ks.k, start=1):
            if q == p or (alpha[q - 1] >= 1 and k_q == k_p):
                # every slot the offending term touches gets the same core,
                # so its structure survives the entrywise product
                mats.append(core)
            elif k_q == 0:
                mats.append(_ones(n, t0))
            else:
                mats.append(_member_filler(n, k_q, dom, t0, eps))
        return [tuple(mats)]

    return candidates


def _recipe_negative_linear(fn, claim, cfg, rng):
    ks, dom = cfg.k, cfg.dom
    _, _, linear, _ = _decompose(fn, ks.m0)
    p = min(q for q, c in linear.items() if c < 0.0)
    k_p = ks.k[p - 1]

    def candidates(t0, eps):
        pad = cfg.l + 3
        if not dom.one_sided:
            diag = np.concatenate([-t0 * np.ones(k_p), t0 * np.ones(pad)])
            core = SymMatrix(np.diag(diag))
        else:
            core = embed_with_negatives(
                t0, 2 * t0, k_p,
                eps if dom.kind == "open_positive" else 0.0,
                SymMatrix(t0 * np.eye(pad)),
            )
        return [_fill_slots(lambda n: _ones(n, t0), p, core, ks, dom, t0, eps)]

    return candidates


def _recipe_multiple_linear(fn, claim, cfg, rng):
    ks, dom = cfg.k, cfg.dom
    const, base, linear, _ = _decompose(fn, ks.m0)
    pos = [q for q in sorted(linear) if linear[q] > 0.0]
    min_c = min(linear[q] for q in pos)
    sum_c = sum(abs(c) for c in linear.values())
    constrained = [q for q in range(ks.m0 + 1, ks.m + 1)]

    def candidates(t0, eps):
        blocks = {q: ks.k[q - 1] + 1 for q in constrained}
        n = sum(blocks.values())
        offsets = {}
        at = 0
        for q in constrained:
            offsets[q] = at
            at += blocks[q]
        eta = t0 * min_c / (4.0 * max(sum_c, min_c))
        mats = []
        for q, k_q in enumerate(ks.k, start=1):
            if k_q == 0:
                mats.append(_ones(n, eps / 4 if eps > 0 else t0 / 16))
                continue
            if not dom.one_sided:
                ent = np.zeros((n, n))
                o = offsets[q]
                ent[o : o + k_q, o : o + k_q] = -t0 * np.eye(k_q)
                mats.append(SymMatrix(ent))
            else:
                parts = []
                for r in constrained:
                    if r == q:
                        parts.append(equicorrelation(k_q, 4 * t0, 8 * t0))
                    else:
                        parts.append(SymMatrix(eta * np.eye(blocks[r])))
                core = direct_sum(parts)
                if dom.kind == "open_positive":
                    core = SymMatrix(core.entries + (eps / 8) * np.ones((n, n)))
                mats.append(core)
        return [tuple(mats)]

    return candidates


def _recipe_constrained_dependence(fn, claim, cfg, rng):
    ks, dom = cfg.k, cfg.dom
    _, _, linear, bad = _decompose(fn, ks.m0)
    touched = set(linear)
    for alpha, _, _ in bad:
        for q, e in enumerate(alpha, start=1):
            if e and q > ks.m0:
                touched.add(q)
    p = min(touched)
    k_p = ks.k[p - 1]
    constrained = list(range(ks.m0 + 1, ks.m + 1))

    def candidates(t0, eps):
        out = []
        if not dom.one_sided and all(ks.k[q - 1] == 1 for q in constrained):
            # smallest possible witness: a tuple of 1x1 matrices
            tiny = tuple(
                SymMatrix([[-t0]]) if q in constrained else SymMatrix([[t0]])
                for q in range(1, ks.m + 1)
            )
            out.append(tiny)
        kmax = max(ks.k[q - 1] for q in constrained)
        n = 2 + max(k_p, kmax + 1)
        # two spreads for the probe pair: a mild one and a wide one, since
        # which separates f(a) from f(b) depends on the function's shape
        for a, b in ((2 * t0, 3 * t0), (t0 / 2, 6 * t0)):
            mats = []
            for q, k_q in enumerate(ks.k, start=1):
                if q == p:
                    parts = [SymMatrix([[a, b], [b, a]])]
                    if k_p >= 2:
                        parts.append(equicorrelation(k_p - 1, t0, 2 * t0))
                    pad = n - sum(x.n for x in parts)
                    if pad:
                        parts.append(SymMatrix(t0 * np.eye(pad)))
                    core = direct_sum(parts)
                elif k_q >= 1:
                    inner = [equicorrelation(k_q, t0, 2 * t0)]
                    pad = (n - 1) - (k_q + 1)
                    if pad:
                        inner.append(SymMatrix(t0 * np.eye(pad)))
                    small = direct_sum(inner)
                    partition = [[0, 1]] + [[i] for i in range(2, n)]
                    core = inflate(small, partition)
                else:
                    mats.append(_ones(n, a))
                    continue
                if dom.kind == "open_positive":
                    core = SymMatrix(core.entries + eps * np.ones((n, n)))
                mats.append(core)
            out.append(tuple(mats))
        return out

    return candidates


def _recipe_negative_coefficient(fn, claim, cfg, rng):
    ks, dom = cfg.k, cfg.dom
    const, base, linear, _ = _decompose(fn, ks.m0)
    kmax = max(ks.k)
    support = sorted(base, key=lambda a: (sum(a), a))
    negative = [a for a in support if base[a] < 0.0]

    def candidates(t0, eps):
        if not negative:
            # l == 0 with a negative constant: any small PSD-ish tuple works,
            # the image hugs const * ones which has a negative direction
            n = max(2, kmax + 2)
            mats = []
            for k_q in ks.k:
                if k_q == 0:
                    mats.append(_ones(n, t0 / 8))
                else:
                    mats.append(_member_filler(n, k_q, dom, t0 / 8, eps / 8))
            return [tuple(mats)]

        target = negative[0]
        # collapse the multivariate support onto one variable: weights encode
        # each active slot in base (degree+1) so collapsed exponents stay
        # distinct, then evaluate every slot on powers of one node vector
        degree = max(sum(a) for a in support)
        weights = [0] * ks.m
        active = sorted({q for a in support for q, e in enumerate(a, start=1) if e})
        for rank_, q in enumerate(active):
            weights[q - 1] = (degree + 1) ** rank_
        exps = sorted({sum(w * e for w, e in zip(weights, a)) for a in support} | {0})
        block = len(exps) + 2
        copies = cfg.l + 1
        scale = min(1.0, dom.rho_eff) * min(1.0, 8.0 * t0 / dom.rho_eff)
        nodes = scale * (0.35 + 0.5 * (np.arange(block) + 0.5) / block)
        e_t = sum(w * e for w, e in zip(weights, target))
        eta = abs(base[target]) * float(np.min(nodes)) ** (2 * e_t) / 64.0
        eta = min(max(eta, 1e-12 * t0), t0)
        shift = min(eps, eta) / 4.0
        n = max(block * copies, kmax + 2)
        mats = []
        for q, k_q in enumerate(ks.k, start=1):
            if k_q >= 1:
                mats.append(_member_filler(n, k_q, dom, eta, shift))
                continue
            w = weights[q - 1]
            if w == 0:
                mats.append(_ones(n, min(t0, scale) / 8))
                continue
            col = nodes**w
            grid = np.outer(col, col)
            ent = np.zeros((n, n))
            for c in range(copies):
                o = c * block
                ent[o : o + block, o : o + block] = grid
            for j in range(block * copies, n):
                ent[j, j] = eta
            if dom.kind == "open_positive":
                ent = ent + shift * np.ones((n, n))
            mats.append(SymMatrix(ent))
        return [tuple(mats)]

    return candidates


def _recipe_offset(fn, claim, cfg, rng, want_negative_offset: bool):
    """Witnesses for a bad constant offset next to a positive slope."""
    ks, dom = cfg.k, cfg.dom
    const, base, linear, _ = _decompose(fn, ks.m0)
    pos = [q for q in sorted(linear) if linear[q] > 0.0]
    p = pos[0]
    c = linear[p]
    k_p = ks.k[p - 1]

    def base_value(s: float) -> float:
        total = const
        for alpha, coef in base.items():
            term = coef
            for e in alpha:
                if e:
                    term *= s**e
            total += term
        return total

    def candidates(t0, eps):
        s = t0 / 4.0
        g = base_value(s)
        out = []
        if want_negative_offset or g < 0.0:
            if g >= 0.0:
                return []
            delta = min(t0, abs(g) / (2.0 * c))
            if not dom.one_sided:
                core = ones_spike(k_p, delta, min(eps, delta / 2.0))
            else:
                core = equicorrelation(k_p, delta / 2.0, delta)
            kmax = max(ks.k)
            n = max(core.n, kmax + 2)
            core = _pad_with_identity(core, n, t0, dom, eps / 4)
            out.append(_fill_slots(lambda nn: _ones(nn, s), p, core, ks, dom, t0, eps))
            return out
        # positive offset against an exact/inertia claim
        if not dom.one_sided:
            t_small = min(t0, max(1, k_p) * g / (2.0 * c))
            core = SymMatrix(-t_small * np.eye(max(k_p, 1)))
        else:
            delta = min(t0 / 5.0, g / (2.0 * c))
            t_shift = 0.02 / max(k_p, 1)
            core = SymMatrix(delta * ones_pencil(max(k_p, 1), t_shift).entries)
        out.append(_fill_slots(lambda nn: _ones(nn, s), p, core, ks, dom, t0, eps))
        return out

    return candidates


def _recipe_constant_map(fn, claim, cfg, rng):
    ks, dom = cfg.k, cfg.dom
    kstar = max(ks.k)

    def candidates(t0, eps):
        if not dom.one_sided and kstar == 1:
            core = SymMatrix(t0 * np.array([[1.0, 2.0], [2.0, 1.0]]))
        else:
            n = kstar + 2 if dom.one_sided else max(kstar + 1, 2)
            core = sample_with_inertia(n, kstar, dom, rng, cfg.tol)
        mats = tuple(
            core if ks.k[q - 1] == kstar else _member_filler(core.n, ks.k[q - 1], dom, t0, eps)
            for q in range(1, ks.m + 1)
        )
        return [mats]

    return candidates


def _recipe_budget(fn, claim, cfg, rng):
    """Slope on a slot whose negativity exceeds the claimed budget l."""
    ks, dom = cfg.k, cfg.dom
    _, _, linear, _ = _decompose(fn, ks.m0)
    p = [q for q in sorted(linear) if linear[q] > 0.0][0]
    k_p = ks.k[p - 1]

    def candidates(t0, eps):
        if not dom.one_sided:
            n0 = k_p + 1
            core = SymMatrix(-t0 * (np.eye(n0) - np.ones((n0, n0)) / n0))
        else:
            core = equicorrelation(k_p, t0, 2 * t0)
        kmax = max(ks.k)
        n = max(core.n, kmax + 2)
        core = _pad_with_identity(core, n, t0, dom, eps / 4)
        return [_fill_slots(lambda nn: _ones(nn, t0 / 4), p, core, ks, dom, t0, eps)]

    return candidates


_RECIPES: dict[str, Callable] = {
    "nonlinear-term": _recipe_nonlinear,
    "mixed-term": _recipe_nonlinear,
    "negative-linear-coefficient": _recipe_negative_linear,
    "multiple-linear-variables": _recipe_multiple_linear,
    "constrained-dependence": _recipe_constrained_dependence,
    "negative-coefficient": _recipe_negative_coefficient,
    "nonmonotone-base": _recipe_negative_coefficient,
    "negative-offset": lambda fn, claim, cfg, rng: _recipe_offset(fn, claim, cfg, rng, True),
    "nonzero-offset": lambda fn, claim, cfg, rng: _recipe_offset(fn, claim, cfg, rng, False),
    "constant-map": _recipe_constant_map,
    "l-less-than-k": _recipe_budget,
}


def _recipe_witness(
    clause: str, claim: str, fn: FunctionSpec, cfg: TrialConfig
) -> tuple[Witness | None, int]:
    """Build and validate recipe candidates, halving scales on failure."""
    maker = _RECIPES.get(clause)
    if maker is None:
        return None, 0
    rng = _trial_rng(cfg.seed, 2**63 + 1)
    candidates = maker(fn, claim, cfg, rng)
    t0 = cfg.dom.rho_eff / 8.0
    eps = cfg.dom.rho_eff / 16.0
    attempts = 0
    for _ in range(RECIPE_HALVINGS):
        try:
            tuples = candidates(t0, eps)
        except (ConfigError, SamplingError, DomainViolation):
            tuples = []
        for mats in tuples:
            attempts += 1
            try:
                w = _make_witness(claim, fn, mats, cfg, clause)
            except (ConfigError, DomainViolation):
                w = None
            if w is not None:
                return w, attempts
        t0 /= 2.0
        eps /= 2.0
    return None, attempts


def falsify(
    claim: str,
    fn: FunctionSpec,
    cfg: TrialConfig,
    threads: int | None = None,
    strategy: str = "auto",
) -> VerdictReport:
    """Search for a concrete witness against a claim.

    ``auto`` asks the classifier which clause fails and tries the matching
    recipe before random search; ``recipe`` stops after the recipe; ``random``
    skips the classifier shortcut entirely.
    """
    _check_claim(claim, fn, cfg)
    if strategy not in STRATEGIES:
        raise ConfigError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
    threads = _thread_count(threads)
    started = time.perf_counter()

    verdict: PreserverVerdict | None = None
    if claim != "lift":
        verdict = classify(fn, cfg.k, cfg.l, cfg.dom, mode=_CLAIM_TO_MODE[claim])

    if (verdict is None or verdict.conforms) and strategy != "random":
        clause = verdict.clause if verdict is not None else "universal-identity"
        return VerdictReport(
            claim, "falsify", fn, cfg, 0, 0, [],
            label=(
                f"conforms (clause '{clause}'): no witness exists for this claim; "
                "nothing searched"
            ),
            runtime_ms=1000.0 * (time.perf_counter() - started),
        )

    attempts = 0
    if verdict is not None and not verdict.conforms and strategy in ("auto", "recipe"):
        witness, attempts = _recipe_witness(verdict.clause, claim, fn, cfg)
        if witness is not None:
            return VerdictReport(
                claim, "falsify", fn, cfg, attempts, 1, [witness],
                label=f"witness found via recipe for clause '{verdict.clause}'",
                runtime_ms=1000.0 * (time.perf_counter() - started),
            )
        if strategy == "recipe":
            return VerdictReport(
                claim, "falsify", fn, cfg, attempts, 0, [],
                label=(
                    f"no witness from recipe for clause '{verdict.clause}' "
                    f"after {attempts} candidates"
                ),
                runtime_ms=1000.0 * (time.perf_counter() - started),
            )

    clause = verdict.clause if verdict is not None else "random-search"
    lo, hi = cfg.n_range

    def worker(i: int):
        rng = _trial_rng(cfg.seed, i)
        n = int(rng.integers(lo, hi + 1))
        try:
            mats = sample_member_tuple(cfg.k, n, cfg.dom, rng, cfg.tol)
            return _make_witness(claim, fn, mats, cfg, clause)
        except (ConfigError, DomainViolation):
            return None

    results = _run_indexed(worker, cfg.trials, threads)
    witnesses = [w for w in results if w is not None]
    total = attempts + cfg.trials
    if witnesses:
        label = f"witness found by random search ({len(witnesses)} of {cfg.trials} trials)"
    else:
        label = (
            f"no witness found: {attempts} recipe candidates and "
            f"{cfg.trials} random trials exhausted"
        )
    return VerdictReport(
        claim, "falsify", fn, cfg, total, len(witnesses), witnesses[:WITNESS_CAP],
        label=label, runtime_ms=1000.0 * (time.perf_counter() - started),
    )


# ---------------------------------------------------------------------------
# lemma suite
# ---------------------------------------------------------------------------

def _suite_block_identity(cfg: TrialConfig, i: int) -> bool:
    rng = _trial_rng(cfg.seed, (1 << 40) + i)
    n = int(rng.integers(1, 7))
    scale = cfg.dom.rho_eff / 2.0
    a = SymMatrix(scale * (lambda g: g + g.T)(rng.uniform(-0.5, 0.5, size=(n, n))))
    b = SymMatrix(scale * (lambda g: g + g.T)(rng.uniform(-0.5, 0.5, size=(n, n))))
    lhs = inertia(block_pair(a, b), cfg.tol)
    plus = inertia(SymMatrix(a.entries + b.entries), cfg.tol)
    minus = inertia(SymMatrix(a.entries - b.entries), cfg.tol)
    return lhs == Inertia(
        plus.n_neg + minus.n_neg, plus.n_zero + minus.n_zero, plus.n_pos + minus.n_pos
    )


def _suite_rank_one(cfg: TrialConfig, i: int) -> bool:
    rng = _trial_rng(cfg.seed, (2 << 40) + i)
    n = int(rng.integers(2, 11))
    k = int(rng.integers(0, n + 1))
    dom = DomainSpec("two_sided", math.inf)
    a = sample_with_inertia(n, k, dom, rng, cfg.tol)
    v = rng.standard_normal(n)
    t = rng.uniform(0.1, 2.0)
    bump = SymMatrix(t * np.outer(v, v))
    up = inertia(SymMatrix(a.entries + bump.entries), cfg.tol).n_neg
    down = inertia(SymMatrix(a.entries - bump.entries), cfg.tol).n_neg
    return up in (k - 1, k) and down in (k, k + 1)


def _suite_inflation(cfg: TrialConfig, i: int) -> bool:
    rng = _trial_rng(cfg.seed, (3 << 40) + i)
    s = int(rng.integers(1, 6))
    n = s + int(rng.integers(0, 6))
    g = rng.uniform(-1.0, 1.0, size=(s, s))
    a = SymMatrix(g + g.T)
    cuts = sorted(rng.choice(np.arange(1, n), size=s - 1, replace=False).tolist()) if s > 1 else []
    bounds = [0] + [int(c) for c in cuts] + [n]
    partition = [list(range(bounds[j], bounds[j + 1])) for j in range(s)]
    before = inertia(a, cfg.tol)
    after = inertia(inflate(a, partition), cfg.tol)
    return (before.n_neg, before.n_pos) == (after.n_neg, after.n_pos)


def _suite_pinned(cfg: TrialConfig, i: int) -> bool:
    rng = _trial_rng(cfg.seed, (4 << 40) + i)
    k = int(rng.integers(1, 5))
    a = rng.uniform(0.0, 0.3)
    b = a + rng.uniform(0.1, 0.5)
    eps = rng.uniform(0.0, 0.2)
    nb = int(rng.integers(1, 5))
    v = rng.uniform(0.1, 1.0, size=(nb, nb))
    out = embed_with_negatives(a, b, k, eps, SymMatrix(v @ v.T))
    lam, _ = eig_sym(out, cfg.tol)
    neg = [x for x in lam if x < -cfg.tol.rel_zero * max(1.0, out.fro)]
    return len(neg) == k and all(abs(x - (a - b)) <= 1e-9 * max(1.0, abs(a - b)) for x in neg)


def _suite_pencil(cfg: TrialConfig, i: int) -> bool:
    rng = _trial_rng(cfg.seed, (5 << 40) + i)
    k = int(rng.integers(1, 5))
    t = float(rng.uniform(1.05, 10.0))
    if inertia(pencil_base(), cfg.tol) != Inertia(1, 0, 2):
        return False
    return inertia(ones_pencil(k, t), cfg.tol).n_neg == k - 1


_SUITE = [
    ("block-identity", _suite_block_identity),
    ("rank-one-perturbation", _suite_rank_one),
    ("inflation", _suite_inflation),
    ("pinned-negatives", _suite_pinned),
    ("pencil-counts", _suite_pencil),
]


def lemma_suite(cfg: TrialConfig, threads: int | None = None) -> VerdictReport:
    """Run the structural property batches that back the constructions."""
    threads = _thread_count(threads)
    started = time.perf_counter()
    failures = 0
    parts = []
    for name, batch in _SUITE:
        results = _run_indexed(lambda i, b=batch: b(cfg, i), cfg.trials, threads)
        bad = sum(1 for ok in results if not ok)
        failures += bad
        parts.append(f"{name}: {cfg.trials - bad}/{cfg.trials} ok")
    label = "; ".join(parts)
    return VerdictReport(
        "lemma-suite", "suite", None, cfg, cfg.trials * len(_SUITE), failures, [],
        label=label, runtime_ms=1000.0 * (time.perf_counter() - started),
    )
