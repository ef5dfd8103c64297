"""Entrywise function specs, their evaluation, and the syntactic classifier.

A function spec is a finitely supported real polynomial in ``arity``
variables, wrapped in one of a few shapes that the classifier and the
verification harness care about:

* :class:`Constant` -- f(x) = d
* :class:`Homothety` -- f(x) = c * x_slot with c > 0
* :class:`Affine` -- f(x) = offset + c * x_slot with c > 0
* :class:`Series` -- finitely supported multivariate polynomial
* :class:`SplitForm` -- f(x) = F(x_1..x_m0) + c * x_slot with c >= 0

``classify`` inspects a spec purely syntactically and reports whether the
function belongs to the family that is compatible with a negativity claim
(see ``inertia_lab.harness`` for the claim vocabulary), or names the clause
it violates.  The harness uses those clause names to pick witness recipes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ConfigError, DomainViolation, RegimeNotCovered
from .linalg import DomainSpec, SymMatrix

CLASSIFY_MODES = ("bounded", "exact", "inertia")


# ---------------------------------------------------------------------------
# multi-index helpers
# ---------------------------------------------------------------------------

def _check_multi_index(alpha, arity: int) -> tuple[int, ...]:
    alpha = tuple(alpha)
    if len(alpha) != arity:
        raise ConfigError(f"multi-index {alpha} has arity {len(alpha)}, expected {arity}")
    for e in alpha:
        if not isinstance(e, int) or isinstance(e, bool) or e < 0:
            raise ConfigError(f"multi-index components must be nonnegative ints, got {alpha}")
    return alpha


def _canonical_terms(arity: int, coeffs) -> tuple[tuple[tuple[int, ...], float], ...]:
    """Validate, merge, drop zeros, and sort by (total degree, lex)."""
    if isinstance(coeffs, Mapping):
        items = coeffs.items()
    else:
        items = list(coeffs)
    merged: dict[tuple[int, ...], float] = {}
    for alpha, c in items:
        alpha = _check_multi_index(alpha, arity)
        c = float(c)
        if not math.isfinite(c):
            raise ConfigError("series coefficients must be finite")
        merged[alpha] = merged.get(alpha, 0.0) + c
    terms = tuple(
        (alpha, c)
        for alpha, c in sorted(merged.items(), key=lambda kv: (sum(kv[0]), kv[0]))
        if c != 0.0
    )
    return terms


# ---------------------------------------------------------------------------
# function spec variants
# ---------------------------------------------------------------------------

class _FnBase:
    """Shared plumbing: equality via a key tuple, JSON via subclass hooks."""

    __slots__ = ()

    def _key(self):  # pragma: no cover - overridden
        raise NotImplementedError

    def __eq__(self, other):
        if type(self) is not type(other):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash((type(self).__name__, self._key()))


class Constant(_FnBase):
    """f(x) = value, in any number of variables."""

    __slots__ = ("value", "arity")

    def __init__(self, value: float, arity: int = 1):
        value = float(value)
        if not math.isfinite(value):
            raise ConfigError("constant value must be finite")
        if not isinstance(arity, int) or arity < 1:
            raise ConfigError("arity must be a positive int")
        self.value = value
        self.arity = arity

    def _key(self):
        return (self.value, self.arity)

    def __repr__(self):
        return f"Constant({self.value!r}, arity={self.arity})"

    def term_map(self) -> dict[tuple[int, ...], float]:
        if self.value == 0.0:
            return {}
        return {(0,) * self.arity: self.value}

    def to_json_dict(self) -> dict:
        return {"type": "constant", "value": self.value, "arity": self.arity}


class Homothety(_FnBase):
    """f(x) = c * x_slot with c > 0 (slot is 1-based)."""

    __slots__ = ("c", "slot", "arity")

    def __init__(self, c: float, slot: int = 1, arity: int = 1):
        c = float(c)
        if not (math.isfinite(c) and c > 0.0):
            raise ConfigError("homothety ratio must be a positive finite float")
        if not isinstance(arity, int) or arity < 1:
            raise ConfigError("arity must be a positive int")
        if not isinstance(slot, int) or not 1 <= slot <= arity:
            raise ConfigError(f"slot must lie in 1..{arity}, got {slot!r}")
        self.c = c
        self.slot = slot
        self.arity = arity

    def _key(self):
        return (self.c, self.slot, self.arity)

    def __repr__(self):
        return f"Homothety({self.c!r}, slot={self.slot}, arity={self.arity})"

    def term_map(self):
        alpha = [0] * self.arity
        alpha[self.slot - 1] = 1
        return {tuple(alpha): self.c}

    def to_json_dict(self) -> dict:
        return {"type": "homothety", "c": self.c, "slot": self.slot, "arity": self.arity}


class Affine(_FnBase):
    """f(x) = offset + c * x_slot with c > 0."""

    __slots__ = ("offset", "c", "slot", "arity")

    def __init__(self, offset: float, c: float, slot: int = 1, arity: int = 1):
        offset = float(offset)
        c = float(c)
        if not math.isfinite(offset):
            raise ConfigError("affine offset must be finite")
        if not (math.isfinite(c) and c > 0.0):
            raise ConfigError("affine slope must be a positive finite float")
        if not isinstance(arity, int) or arity < 1:
            raise ConfigError("arity must be a positive int")
        if not isinstance(slot, int) or not 1 <= slot <= arity:
            raise ConfigError(f"slot must lie in 1..{arity}, got {slot!r}")
        self.offset = offset
        self.c = c
        self.slot = slot
        self.arity = arity

    def _key(self):
        return (self.offset, self.c, self.slot, self.arity)

    def __repr__(self):
        return f"Affine(offset={self.offset!r}, c={self.c!r}, slot={self.slot}, arity={self.arity})"

    def term_map(self):
        out = {}
        if self.offset != 0.0:
            out[(0,) * self.arity] = self.offset
        alpha = [0] * self.arity
        alpha[self.slot - 1] = 1
        out[tuple(alpha)] = self.c
        return out

    def to_json_dict(self) -> dict:
        return {
            "type": "affine",
            "offset": self.offset,
            "c": self.c,
            "slot": self.slot,
            "arity": self.arity,
        }


class Series(_FnBase):
    """Finitely supported polynomial sum_alpha c_alpha * x^alpha.

    Terms are kept in a canonical order (total degree, then lexicographic) and
    evaluation accumulates in that order, so results are bit-reproducible.
    ``degree`` bounds the total degree of the support; it defaults to the
    largest |alpha| present.
    """

    __slots__ = ("arity", "terms", "degree")

    def __init__(self, arity: int, coeffs, degree: int | None = None):
        if not isinstance(arity, int) or arity < 1:
            raise ConfigError("arity must be a positive int")
        self.arity = arity
        self.terms = _canonical_terms(arity, coeffs)
        max_deg = max((sum(a) for a, _ in self.terms), default=0)
        if degree is None:
            degree = max_deg
        if not isinstance(degree, int) or degree < 0:
            raise ConfigError("degree must be a nonnegative int")
        if degree < max_deg:
            raise ConfigError(f"support has total degree {max_deg} above the declared cap {degree}")
        self.degree = degree

    def _key(self):
        return (self.arity, self.terms, self.degree)

    def __repr__(self):
        return f"Series(arity={self.arity}, terms={len(self.terms)}, degree={self.degree})"

    @property
    def coeffs(self) -> dict[tuple[int, ...], float]:
        return dict(self.terms)

    def term_map(self):
        return dict(self.terms)

    def to_json_dict(self) -> dict:
        return {
            "type": "series",
            "arity": self.arity,
            "degree": self.degree,
            "terms": [{"alpha": list(a), "coeff": c} for a, c in self.terms],
        }


class SplitForm(_FnBase):
    """f(x) = base(x_1, ..., x_m0) + c * x_slot with c >= 0 and slot > m0."""

    __slots__ = ("arity", "base", "c", "slot")

    def __init__(self, arity: int, base: Series, c: float, slot: int):
        if not isinstance(arity, int) or arity < 1:
            raise ConfigError("arity must be a positive int")
        if not isinstance(base, Series):
            raise ConfigError("split-form base must be a Series")
        c = float(c)
        if not (math.isfinite(c) and c >= 0.0):
            raise ConfigError("split-form slope must be finite and >= 0")
        if base.arity >= arity:
            raise ConfigError("split-form base must use fewer variables than the full arity")
        if not isinstance(slot, int) or not base.arity < slot <= arity:
            raise ConfigError(f"slot must lie in {base.arity + 1}..{arity}, got {slot!r}")
        self.arity = arity
        self.base = base
        self.c = c
        self.slot = slot

    def _key(self):
        return (self.arity, self.base._key(), self.c, self.slot)

    def __repr__(self):
        return f"SplitForm(arity={self.arity}, base={self.base!r}, c={self.c!r}, slot={self.slot})"

    def term_map(self):
        out = {}
        pad = self.arity - self.base.arity
        for alpha, c in self.base.terms:
            out[alpha + (0,) * pad] = c
        if self.c != 0.0:
            alpha = [0] * self.arity
            alpha[self.slot - 1] = 1
            key = tuple(alpha)
            out[key] = out.get(key, 0.0) + self.c
        return out

    def to_json_dict(self) -> dict:
        return {
            "type": "split",
            "arity": self.arity,
            "base": self.base.to_json_dict(),
            "c": self.c,
            "slot": self.slot,
        }


FunctionSpec = Constant | Homothety | Affine | Series | SplitForm

_FN_TYPES = {
    "constant": Constant,
    "homothety": Homothety,
    "affine": Affine,
    "series": Series,
    "split": SplitForm,
}


def fn_from_json_dict(d: dict) -> FunctionSpec:
    if not isinstance(d, dict) or "type" not in d:
        raise ConfigError('function JSON must be an object with a "type" key')
    kind = d["type"]
    if kind not in _FN_TYPES:
        raise ConfigError(f"unknown function type {kind!r}")
    body = {k: v for k, v in d.items() if k != "type"}
    try:
        if kind == "series":
            terms = body.pop("terms")
            coeffs = [(tuple(t["alpha"]), t["coeff"]) for t in terms]
            return Series(coeffs=coeffs, **body)
        if kind == "split":
            base = fn_from_json_dict(body.pop("base"))
            if not isinstance(base, Series):
                raise ConfigError("split-form base must be a series spec")
            return SplitForm(base=base, **body)
        return _FN_TYPES[kind](**body)
    except TypeError as exc:
        raise ConfigError(f"bad {kind} spec: {exc}") from None
    except (KeyError, AttributeError) as exc:
        raise ConfigError(f"bad {kind} spec: missing {exc}") from None


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def _sorted_terms(f: FunctionSpec) -> list[tuple[tuple[int, ...], float]]:
    tm = f.term_map()
    return sorted(tm.items(), key=lambda kv: (sum(kv[0]), kv[0]))


def evaluate(f: FunctionSpec, x: Sequence[float], dom: DomainSpec) -> float:
    """Evaluate ``f`` at the point ``x``, enforcing the entry domain."""
    xs = [float(v) for v in x]
    if len(xs) != f.arity:
        raise ConfigError(f"point has {len(xs)} coordinates, function needs {f.arity}")
    for p, v in enumerate(xs, start=1):
        if not dom.contains(v):
            raise DomainViolation(v, 0, 0, p, detail=dom.describe())
    total = 0.0
    for alpha, c in _sorted_terms(f):
        term = c
        for v, e in zip(xs, alpha):
            if e:
                term *= v**e
        total += term
    return total


def apply_entrywise(
    f: FunctionSpec, mats: Sequence[SymMatrix], dom: DomainSpec
) -> SymMatrix:
    """Apply ``f`` to a tuple of same-size symmetric matrices entry by entry."""
    mats = list(mats)
    if len(mats) != f.arity:
        raise ConfigError(f"tuple has {len(mats)} matrices, function needs {f.arity}")
    n = mats[0].n
    for p, m in enumerate(mats, start=1):
        if m.n != n:
            raise ConfigError("all matrices in a tuple must share one size")
        dom.check_matrix(m, slot=p)

    terms = _sorted_terms(f)
    # per-variable entrywise power tables, built by repeated multiplication
    max_exp = [0] * f.arity
    for alpha, _ in terms:
        for p, e in enumerate(alpha):
            max_exp[p] = max(max_exp[p], e)
    powers: list[list[np.ndarray]] = []
    for p, m in enumerate(mats):
        tab = [np.ones((n, n))]
        for _ in range(max_exp[p]):
            tab.append(tab[-1] * m.entries)
        powers.append(tab)

    out = np.zeros((n, n))
    for alpha, c in terms:
        prod = None
        for p, e in enumerate(alpha):
            if e:
                prod = powers[p][e] if prod is None else prod * powers[p][e]
        out = out + (c * prod if prod is not None else np.full((n, n), c))
    return SymMatrix(out)


def is_abs_monotone_series(f: Series, include_constant: bool = False) -> bool:
    """Are all (non-constant, unless requested) coefficients nonnegative?"""
    if not isinstance(f, Series):
        raise ConfigError("absolute-monotonicity check expects a Series spec")
    zero = (0,) * f.arity
    for alpha, c in f.terms:
        if alpha == zero and not include_constant:
            continue
        if c < 0.0:
            return False
    return True


# ---------------------------------------------------------------------------
# admissible negativity tuples
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AdmissibleK:
    """Per-variable negative-eigenvalue counts, zeros listed first."""

    k: tuple[int, ...]

    def __init__(self, k: Iterable[int]):
        k = tuple(k)
        if not k:
            raise ConfigError("k must have at least one component")
        seen_positive = False
        for v in k:
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise ConfigError(f"k components must be nonnegative ints, got {k}")
            if v == 0 and seen_positive:
                raise ConfigError(f"zeros in k must come first, got {k}")
            if v > 0:
                seen_positive = True
        object.__setattr__(self, "k", k)

    @property
    def m(self) -> int:
        return len(self.k)

    @property
    def m0(self) -> int:
        """Number of leading zero components (unconstrained variables)."""
        return sum(1 for v in self.k if v == 0)

    @property
    def all_zero(self) -> bool:
        return self.m0 == self.m

    @property
    def k_max(self) -> int:
        return max(1, max(self.k))

    @property
    def min_positive(self) -> int | None:
        pos = [v for v in self.k if v > 0]
        return min(pos) if pos else None

    def to_json_list(self) -> list[int]:
        return list(self.k)

    @classmethod
    def from_json(cls, v) -> "AdmissibleK":
        if isinstance(v, int):
            v = [v]
        if not isinstance(v, list):
            raise ConfigError("k must be an int or a list of ints")
        return cls(v)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PreserverVerdict:
    """Outcome of the syntactic check of a function against a claim."""

    conforms: bool
    mode: str
    clause: str
    detail: str = ""

    def to_json_dict(self) -> dict:
        return {
            "conforms": self.conforms,
            "mode": self.mode,
            "clause": self.clause,
            "detail": self.detail,
        }


def _decompose(f: FunctionSpec, m0: int):
    """Split the term map into (constant, base, linear, bad) parts.

    ``base`` collects terms supported on the first ``m0`` (unconstrained)
    variables, excluding the constant.  ``linear`` maps 1-based slots of
    constrained variables to their pure-linear coefficients.  ``bad`` lists
    terms that touch a constrained variable in any other way.
    """
    const = 0.0
    base: dict[tuple[int, ...], float] = {}
    linear: dict[int, float] = {}
    bad: list[tuple[tuple[int, ...], float, str]] = []
    for alpha, c in _sorted_terms(f):
        total = sum(alpha)
        constrained = [(p, e) for p, e in enumerate(alpha, start=1) if e and p > m0]
        if total == 0:
            const = c
        elif not constrained:
            base[alpha] = c
        elif total == 1:
            linear[constrained[0][0]] = c
        elif any(e >= 2 for _, e in constrained):
            bad.append((alpha, c, "nonlinear-term"))
        else:
            bad.append((alpha, c, "mixed-term"))
    return const, base, linear, bad


def _regime_covered(ks: AdmissibleK, l: int) -> bool:
    if l == 0 or ks.all_zero:
        return True
    kmin = ks.min_positive
    assert kmin is not None
    if kmin == 1:
        return l == 1
    return 1 <= l <= 2 * kmin - 2


def classify(
    f: FunctionSpec,
    k,
    l: int,
    dom: DomainSpec,
    mode: str = "bounded",
) -> PreserverVerdict:
    """Syntactic check of ``f`` against a negativity claim.

    ``mode="bounded"``: inputs with exactly ``k`` negative eigenvalues per
    slot, image required to have at most ``l`` (``l=0`` means PSD).  The same
    rules cover closure-domain claims.  ``mode="exact"``: image required to
    have exactly ``l`` negatives.  ``mode="inertia"``: full inertia must be
    preserved.  Raises :class:`RegimeNotCovered` for (k, l) combinations the
    classification does not decide.
    """
    ks = k if isinstance(k, AdmissibleK) else AdmissibleK(k)
    if not isinstance(l, int) or isinstance(l, bool) or l < 0:
        raise ConfigError(f"l must be a nonnegative int, got {l!r}")
    if mode not in CLASSIFY_MODES:
        raise ConfigError(f"unknown classify mode {mode!r}")
    if f.arity != ks.m:
        raise ConfigError(f"function arity {f.arity} does not match k arity {ks.m}")

    if mode in ("exact", "inertia"):
        distinct = set(ks.k)
        if len(distinct) != 1:
            raise ConfigError(f"{mode} claims need a uniform k tuple, got {ks.k}")
        kstar = ks.k[0]
        if mode == "exact" and l != kstar:
            raise ConfigError(f"exact claims need l == k, got l={l}, k={kstar}")
        if mode == "inertia":
            return _classify_inertia(f, ks)
        if kstar == 0:
            # exactly-PSD image on PSD inputs is the l = 0 bounded regime
            return _classify_bounded(f, ks, 0)
        return _classify_exact(f, ks, l)

    if not _regime_covered(ks, l):
        kmin = ks.min_positive
        window = "l == 1" if kmin == 1 else f"1 <= l <= {2 * kmin - 2}"
        raise RegimeNotCovered(
            f"no decision for k={ks.k} with l={l}; covered: l == 0, or {window}"
        )
    return _classify_bounded(f, ks, l)


def _classify_inertia(f: FunctionSpec, ks: AdmissibleK) -> PreserverVerdict:
    const, base, linear, bad = _decompose(f, m0=0)
    if bad:
        alpha, c, reason = bad[0]
        return PreserverVerdict(False, "inertia", reason, f"term {alpha} with coefficient {c:g}")
    if len(linear) > 1:
        return PreserverVerdict(
            False, "inertia", "multiple-linear-variables", f"slots {sorted(linear)}"
        )
    if not linear:
        return PreserverVerdict(False, "inertia", "constant-map", f"f is constant {const:g}")
    (slot, c), = linear.items()
    if c <= 0.0:
        return PreserverVerdict(
            False, "inertia", "negative-linear-coefficient", f"slope {c:g} on slot {slot}"
        )
    if const != 0.0:
        return PreserverVerdict(False, "inertia", "nonzero-offset", f"offset {const:g}")
    return PreserverVerdict(True, "inertia", "homothety", f"f = {c:g} * x_{slot}")


def _classify_exact(f: FunctionSpec, ks: AdmissibleK, l: int) -> PreserverVerdict:
    kstar = ks.k[0]
    const, base, linear, bad = _decompose(f, m0=ks.m0)
    # base terms live on unconstrained slots; exact claims have none (m0 = 0),
    # so anything in `base` is impossible here by construction
    assert not base
    if bad:
        alpha, c, reason = bad[0]
        return PreserverVerdict(False, "exact", reason, f"term {alpha} with coefficient {c:g}")
    if len(linear) > 1:
        return PreserverVerdict(
            False, "exact", "multiple-linear-variables", f"slots {sorted(linear)}"
        )
    if not linear:
        if const < 0.0 and kstar == 1 and l == 1:
            return PreserverVerdict(
                True, "exact", "negative-constant", f"f = {const:g} pins one negative eigenvalue"
            )
        return PreserverVerdict(False, "exact", "constant-map", f"f is constant {const:g}")
    (slot, c), = linear.items()
    if c <= 0.0:
        return PreserverVerdict(
            False, "exact", "negative-linear-coefficient", f"slope {c:g} on slot {slot}"
        )
    if const != 0.0:
        return PreserverVerdict(False, "exact", "nonzero-offset", f"offset {const:g}")
    return PreserverVerdict(True, "exact", "homothety", f"f = {c:g} * x_{slot}")


def _classify_bounded(f: FunctionSpec, ks: AdmissibleK, l: int) -> PreserverVerdict:
    const, base, linear, bad = _decompose(f, m0=ks.m0)

    if l == 0:
        # image must be PSD: no dependence on constrained slots at all,
        # and every coefficient (constant included) nonnegative
        if linear or bad:
            slots = sorted(set(linear) | {p for a, _, _ in bad for p, e in enumerate(a, 1) if e and p > ks.m0})
        else:
            slots = []
        if slots:
            return PreserverVerdict(
                False, "bounded", "constrained-dependence",
                f"f depends on constrained slot(s) {slots}",
            )
        if const < 0.0:
            return PreserverVerdict(
                False, "bounded", "negative-coefficient", f"constant term {const:g}"
            )
        for alpha, c in sorted(base.items(), key=lambda kv: (sum(kv[0]), kv[0])):
            if c < 0.0:
                return PreserverVerdict(
                    False, "bounded", "negative-coefficient",
                    f"coefficient {c:g} on {alpha}",
                )
        return PreserverVerdict(True, "bounded", "series-nonnegative", "")

    if ks.all_zero:
        # PSD inputs, at most l >= 1 negatives allowed: the constant is free
        for alpha, c in sorted(base.items(), key=lambda kv: (sum(kv[0]), kv[0])):
            if c < 0.0:
                return PreserverVerdict(
                    False, "bounded", "negative-coefficient",
                    f"coefficient {c:g} on {alpha}",
                )
        if not base:
            clause = "negative-constant" if const < 0.0 else "constant"
            return PreserverVerdict(True, "bounded", clause, f"f = {const:g}")
        return PreserverVerdict(True, "bounded", "series-nonnegative", "")

    # some slot is genuinely constrained
    if bad:
        alpha, c, reason = bad[0]
        return PreserverVerdict(False, "bounded", reason, f"term {alpha} with coefficient {c:g}")
    for slot in sorted(linear):
        if linear[slot] < 0.0:
            return PreserverVerdict(
                False, "bounded", "negative-linear-coefficient",
                f"slope {linear[slot]:g} on slot {slot}",
            )
    positive_slots = [p for p in sorted(linear) if linear[p] > 0.0]
    if len(positive_slots) > 1:
        return PreserverVerdict(
            False, "bounded", "multiple-linear-variables", f"slots {positive_slots}"
        )
    for alpha, c in sorted(base.items(), key=lambda kv: (sum(kv[0]), kv[0])):
        if c < 0.0:
            return PreserverVerdict(
                False, "bounded", "nonmonotone-base", f"coefficient {c:g} on {alpha}"
            )
    if not positive_slots:
        clause = "base-only" if base else ("negative-constant" if const < 0.0 else "constant")
        return PreserverVerdict(True, "bounded", clause, "no slope on constrained slots")
    slot = positive_slots[0]
    k_slot = ks.k[slot - 1]
    if l < k_slot:
        return PreserverVerdict(
            False, "bounded", "l-less-than-k",
            f"slope on slot {slot} needs l >= {k_slot}, claim has l = {l}",
        )
    if l == k_slot and const < 0.0:
        return PreserverVerdict(
            False, "bounded", "negative-offset",
            f"offset {const:g} < 0 is not allowed when l == k_slot == {l}",
        )
    if base:
        return PreserverVerdict(True, "bounded", "split-form", f"slope on slot {slot}")
    if const != 0.0:
        return PreserverVerdict(True, "bounded", "affine", f"offset {const:g}, slope on slot {slot}")
    return PreserverVerdict(True, "bounded", "homothety", f"slope on slot {slot}")
