"""Trigonometric polynomials, bounded evaluable signals, and Bohr means.

The signal model is deliberately small.  A :class:`TrigPolynomial` is a
finite sum

    p(t) = sum_k  c_k cos(w_k t) + s_k sin(w_k t),      w_k >= 0,

with real vector coefficients ``c_k, s_k``.  An :class:`EvaluableSignal` is
an arbitrary bounded time function given by an evaluator callable; it carries
no proof of almost periodicity or almost automorphy, only the contract that
it is total and bounded.  Closed-form time averages exist only for
trigonometric polynomials; everything else is averaged numerically over a
finite horizon.

The mean inner product of two signals is

    <p, q>_aa = lim_{T->oo} (1/T) * int_0^T <p(t), q(t)> dt,

which for trigonometric polynomials reduces to a finite sum over matched
frequencies: each shared w > 0 contributes (c_p.c_q + s_p.s_q)/2 and a shared
constant term contributes c_p.c_q.  Frequencies match when
|w1 - w2| <= freq_match_rtol * max(1, w1, w2).
"""

from __future__ import annotations

import dataclasses
import math
from typing import Callable, Iterable, Sequence, Union

import numpy as np

from .config import DEFAULTS
from .errors import DimensionError

__all__ = [
    "HarmonicTerm",
    "TrigPolynomial",
    "EvaluableSignal",
    "Signal",
    "evaluate",
    "bohr_inner_closed",
    "bohr_inner_numeric",
    "aa_norm_sq",
    "signal_to_json",
    "signal_from_json",
    "BUILTIN_SIGNALS",
    "aa_sin_reciprocal",
    "aa_cos_reciprocal",
    "aa_sin_reciprocal_sines",
]


def _coeff_vector(value, what: str) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(value, dtype=float))
    if arr.ndim != 1:
        raise DimensionError(f"{what} must be a vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} contains non-finite entries")
    arr.setflags(write=False)
    return arr


def frequencies_match(w1: float, w2: float,
                      rtol: float = DEFAULTS.freq_match_rtol) -> bool:
    """Two frequencies are the same line when |w1 - w2| <= rtol*max(1, w1, w2)."""
    return abs(w1 - w2) <= rtol * max(1.0, w1, w2)


@dataclasses.dataclass(frozen=True, eq=False)
class HarmonicTerm:
    """One frequency line  c*cos(w t) + s*sin(w t)  with vector coefficients.

    Invariants enforced on construction: w >= 0 and finite, coefficient
    vectors share one dimension, and a constant term (w = 0) carries no sine
    part.  Instances are immutable; the coefficient arrays are frozen.
    """

    omega: float
    cos_coeff: np.ndarray
    sin_coeff: np.ndarray

    def __post_init__(self):
        w = float(self.omega)
        if not math.isfinite(w) or w < 0.0:
            raise ValueError(f"frequency must be finite and >= 0, got {self.omega!r}")
        c = _coeff_vector(self.cos_coeff, "cosine coefficient")
        s = _coeff_vector(self.sin_coeff, "sine coefficient")
        if c.shape != s.shape:
            raise DimensionError(
                f"cosine coefficient has dimension {c.size}, sine coefficient {s.size}")
        if w == 0.0 and np.any(s != 0.0):
            raise ValueError("a constant term (omega = 0) cannot carry a sine coefficient")
        object.__setattr__(self, "omega", w)
        object.__setattr__(self, "cos_coeff", c)
        object.__setattr__(self, "sin_coeff", s)

    @property
    def dimension(self) -> int:
        return self.cos_coeff.size

    def __repr__(self):  # keep failure output short
        return (f"HarmonicTerm(omega={self.omega:.6g}, cos={self.cos_coeff!r}, "
                f"sin={self.sin_coeff!r})")


def _merge_terms(terms: Sequence[HarmonicTerm],
                 rtol: float) -> tuple[HarmonicTerm, ...]:
    # sort by frequency, then fold runs of matching frequencies into one term
    ordered = sorted(terms, key=lambda term: term.omega)
    merged: list[HarmonicTerm] = []
    for term in ordered:
        if merged and frequencies_match(merged[-1].omega, term.omega, rtol):
            prev = merged[-1]
            sin_sum = prev.sin_coeff + term.sin_coeff
            if prev.omega == 0.0 and np.any(sin_sum != 0.0):
                raise ValueError(
                    f"term at omega={term.omega!r} merges into the constant term "
                    "but carries a sine coefficient")
            merged[-1] = HarmonicTerm(prev.omega,
                                      prev.cos_coeff + term.cos_coeff,
                                      sin_sum)
        else:
            merged.append(term)
    # drop lines whose coefficients are exactly zero
    kept = tuple(t for t in merged
                 if np.any(t.cos_coeff != 0.0) or np.any(t.sin_coeff != 0.0))
    return kept


@dataclasses.dataclass(frozen=True, eq=False)
class TrigPolynomial:
    """Finite sum of harmonic terms with a common coefficient dimension.

    Terms passed to the constructor are normalised: sorted by frequency,
    duplicate frequencies (within the matching tolerance) merged by summing
    coefficients, and exactly-zero lines dropped.
    """

    dimension: int
    terms: tuple[HarmonicTerm, ...] = ()

    def __post_init__(self):
        dim = int(self.dimension)
        if dim <= 0:
            raise DimensionError(f"dimension must be positive, got {self.dimension!r}")
        terms = tuple(self.terms)
        for term in terms:
            if term.dimension != dim:
                raise DimensionError(
                    f"term at omega={term.omega:.6g} has dimension {term.dimension}, "
                    f"polynomial has dimension {dim}")
        object.__setattr__(self, "dimension", dim)
        object.__setattr__(self, "terms", _merge_terms(terms, DEFAULTS.freq_match_rtol))

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, dimension: int) -> "TrigPolynomial":
        return cls(dimension, ())

    @classmethod
    def harmonic(cls, omega: float, cos_coeff, sin_coeff) -> "TrigPolynomial":
        term = HarmonicTerm(omega, cos_coeff, sin_coeff)
        return cls(term.dimension, (term,))

    @classmethod
    def constant(cls, value) -> "TrigPolynomial":
        vec = _coeff_vector(value, "constant value")
        return cls(vec.size, (HarmonicTerm(0.0, vec, np.zeros_like(vec)),))

    # -- queries -----------------------------------------------------------

    @property
    def frequencies(self) -> tuple[float, ...]:
        return tuple(term.omega for term in self.terms)

    def evaluate(self, t):
        """Value at time ``t``; scalar t -> (n,), 1-D t of length k -> (k, n)."""
        ts = np.asarray(t, dtype=float)
        scalar = ts.ndim == 0
        tt = ts.reshape(-1)
        out = np.zeros((tt.size, self.dimension))
        for term in self.terms:
            wt = term.omega * tt
            out += np.outer(np.cos(wt), term.cos_coeff)
            out += np.outer(np.sin(wt), term.sin_coeff)
        return out[0] if scalar else out

    # -- algebra -----------------------------------------------------------

    def apply(self, matrix) -> "TrigPolynomial":
        """Apply a linear map coefficient-wise: returns ``matrix @ p``."""
        mat = np.atleast_2d(np.asarray(matrix, dtype=float))
        if mat.shape[1] != self.dimension:
            raise DimensionError(
                f"matrix has {mat.shape[1]} columns, polynomial has dimension "
                f"{self.dimension}")
        terms = tuple(HarmonicTerm(t.omega, mat @ t.cos_coeff, mat @ t.sin_coeff)
                      for t in self.terms)
        return TrigPolynomial(mat.shape[0], terms)

    def derivative(self) -> "TrigPolynomial":
        """Termwise derivative; the constant line drops out."""
        terms = tuple(HarmonicTerm(t.omega,
                                   t.omega * t.sin_coeff,
                                   -t.omega * t.cos_coeff)
                      for t in self.terms if t.omega > 0.0)
        return TrigPolynomial(self.dimension, terms)

    def __add__(self, other: "TrigPolynomial") -> "TrigPolynomial":
        if not isinstance(other, TrigPolynomial):
            return NotImplemented
        if other.dimension != self.dimension:
            raise DimensionError(
                f"cannot add polynomials of dimensions {self.dimension} and "
                f"{other.dimension}")
        return TrigPolynomial(self.dimension, self.terms + other.terms)

    def __mul__(self, scalar) -> "TrigPolynomial":
        factor = float(scalar)
        terms = tuple(HarmonicTerm(t.omega, factor * t.cos_coeff, factor * t.sin_coeff)
                      for t in self.terms)
        return TrigPolynomial(self.dimension, terms)

    __rmul__ = __mul__

    def __neg__(self) -> "TrigPolynomial":
        return self * -1.0

    def __sub__(self, other: "TrigPolynomial") -> "TrigPolynomial":
        if not isinstance(other, TrigPolynomial):
            return NotImplemented
        return self + (-other)

    def __repr__(self):
        lines = ", ".join(f"{t.omega:.6g}" for t in self.terms)
        return f"TrigPolynomial(dim={self.dimension}, frequencies=[{lines}])"


@dataclasses.dataclass(frozen=True, eq=False)
class EvaluableSignal:
    """Bounded signal given by an evaluator callable.

    The evaluator must accept a float, and should accept a 1-D array of times
    and return the matching (k, n) block; scalar-only evaluators are handled
    by a per-sample fallback.  No almost-periodicity property is verified:
    the contract is only that the evaluator is total and bounded.  ``builtin``
    and ``params`` record how library-provided signals were constructed so
    they can round-trip through JSON.
    """

    dimension: int
    evaluator: Callable
    descriptor: str
    builtin: Union[str, None] = None
    params: Union[dict, None] = None

    def __post_init__(self):
        if int(self.dimension) <= 0:
            raise DimensionError(f"dimension must be positive, got {self.dimension!r}")
        object.__setattr__(self, "dimension", int(self.dimension))

    def evaluate(self, t):
        ts = np.asarray(t, dtype=float)
        if ts.ndim == 0:
            out = np.asarray(self.evaluator(float(ts)), dtype=float).reshape(-1)
            if out.size != self.dimension:
                raise DimensionError(
                    f"evaluator of {self.descriptor!r} returned {out.size} values, "
                    f"declared dimension is {self.dimension}")
            return out
        try:
            block = np.asarray(self.evaluator(ts), dtype=float)
        except Exception:
            block = None
        if block is not None:
            if block.shape == (ts.size, self.dimension):
                return block
            if self.dimension == 1 and block.shape == (ts.size,):
                return block.reshape(-1, 1)
        # scalar-only evaluator: fall back to one call per sample
        return np.stack([self.evaluate(float(ti)) for ti in ts])

    def __repr__(self):
        return f"EvaluableSignal(dim={self.dimension}, {self.descriptor!r})"


Signal = Union[TrigPolynomial, EvaluableSignal]


def evaluate(signal: Signal, t):
    """Evaluate either kind of signal at scalar or 1-D array times."""
    if isinstance(signal, (TrigPolynomial, EvaluableSignal)):
        return signal.evaluate(t)
    raise TypeError(f"not a signal: {type(signal).__name__}")


# ---------------------------------------------------------------------------
# mean inner products


def bohr_inner_closed(p: TrigPolynomial, q: TrigPolynomial,
                      freq_match_rtol: float = DEFAULTS.freq_match_rtol) -> float:
    """Closed-form mean inner product of two trigonometric polynomials.

    Matched frequencies w > 0 contribute (c_p.c_q + s_p.s_q)/2; a matched
    constant line contributes c_p.c_q; unmatched lines average to zero.
    """
    if not isinstance(p, TrigPolynomial) or not isinstance(q, TrigPolynomial):
        raise TypeError("closed-form means are defined for trigonometric polynomials "
                        "only; use bohr_inner_numeric for evaluable signals")
    if p.dimension != q.dimension:
        raise DimensionError(
            f"signals have dimensions {p.dimension} and {q.dimension}")
    total = 0.0
    i = j = 0
    while i < len(p.terms) and j < len(q.terms):
        tp, tq = p.terms[i], q.terms[j]
        if frequencies_match(tp.omega, tq.omega, freq_match_rtol):
            if frequencies_match(tp.omega, 0.0, freq_match_rtol):
                total += float(tp.cos_coeff @ tq.cos_coeff)
            else:
                total += 0.5 * float(tp.cos_coeff @ tq.cos_coeff
                                     + tp.sin_coeff @ tq.sin_coeff)
            i += 1
            j += 1
        elif tp.omega < tq.omega:
            i += 1
        else:
            j += 1
    return total


def bohr_inner_numeric(f: Signal, g: Signal, horizon: float, samples: int) -> float:
    """Finite-horizon average (1/T) int_0^T <f(t), g(t)> dt by the trapezoid rule.

    This is the only mean available to evaluable signals, and the numerical
    cross-check for closed-form means.  ``samples`` counts the equally spaced
    sample points on [0, horizon], endpoints included.
    """
    dim_f = f.dimension
    dim_g = g.dimension
    if dim_f != dim_g:
        raise DimensionError(f"signals have dimensions {dim_f} and {dim_g}")
    horizon = float(horizon)
    if not horizon > 0.0:
        raise ValueError(f"averaging horizon must be positive, got {horizon!r}")
    samples = int(samples)
    if samples < 2:
        raise ValueError(f"need at least 2 samples, got {samples}")
    ts = np.linspace(0.0, horizon, samples)
    prod = np.sum(evaluate(f, ts) * evaluate(g, ts), axis=1)
    dt = horizon / (samples - 1)
    integral = dt * (prod.sum() - 0.5 * (prod[0] + prod[-1]))
    return float(integral / horizon)


def aa_norm_sq(f: Signal, horizon: float = None, samples: int = None) -> float:
    """Mean square norm |f|^2_aa via the matching path.

    Trigonometric polynomials use the closed form when no horizon is given;
    evaluable signals require ``horizon`` and ``samples`` and are averaged
    numerically.
    """
    if isinstance(f, TrigPolynomial) and horizon is None:
        total = 0.0
        for term in f.terms:
            if term.omega == 0.0:
                total += float(term.cos_coeff @ term.cos_coeff)
            else:
                total += 0.5 * float(term.cos_coeff @ term.cos_coeff
                                     + term.sin_coeff @ term.sin_coeff)
        return total
    if horizon is None or samples is None:
        raise ValueError("numeric mean-square norm needs a horizon and a sample count")
    return bohr_inner_numeric(f, f, horizon, samples)


# ---------------------------------------------------------------------------
# JSON interchange


def signal_to_json(signal: Signal) -> dict:
    """JSON-ready dict for a signal.

    Trigonometric polynomials serialise coefficient lists; evaluable signals
    serialise only if they were constructed from a registered builtin.
    """
    if isinstance(signal, TrigPolynomial):
        return {
            "dimension": signal.dimension,
            "terms": [
                {
                    "omega": term.omega,
                    "cos": term.cos_coeff.tolist(),
                    "sin": term.sin_coeff.tolist(),
                }
                for term in signal.terms
            ],
        }
    if isinstance(signal, EvaluableSignal):
        if signal.builtin is None:
            raise ValueError(
                f"evaluable signal {signal.descriptor!r} was not built from a "
                "registered builtin and cannot be serialised")
        return {"builtin": signal.builtin, "params": dict(signal.params or {})}
    raise TypeError(f"not a signal: {type(signal).__name__}")


def signal_from_json(data: dict) -> Signal:
    """Parse a signal from its JSON dict form (inverse of signal_to_json)."""
    if not isinstance(data, dict):
        raise ValueError(f"signal description must be an object, got {type(data).__name__}")
    if "builtin" in data:
        name = data["builtin"]
        factory = BUILTIN_SIGNALS.get(name)
        if factory is None:
            known = ", ".join(sorted(BUILTIN_SIGNALS))
            raise ValueError(f"unknown builtin signal {name!r}; known: {known}")
        params = data.get("params", {})
        if not isinstance(params, dict):
            raise ValueError("builtin params must be an object")
        return factory(**params)
    try:
        dimension = data["dimension"]
        raw_terms = data["terms"]
    except KeyError as exc:
        raise ValueError(f"signal description lacks required key {exc}") from None
    terms = []
    for entry in raw_terms:
        try:
            terms.append(HarmonicTerm(entry["omega"], entry["cos"], entry["sin"]))
        except KeyError as exc:
            raise ValueError(f"harmonic term lacks required key {exc}") from None
    return TrigPolynomial(dimension, tuple(terms))


# ---------------------------------------------------------------------------
# builtin bounded signals
#
# These are classical compositions sin(1/d(t)) or cos(1/d(t)) where d is a
# two-frequency trigonometric sum.  They are bounded by construction; when
# the offset lets d(t) approach zero the value oscillates rapidly but stays
# in [-1, 1].  The evaluator clamps |d| away from exact zero so it is total.

_DENOMINATOR_FLOOR = 1e-12


def _clamped_reciprocal(den: np.ndarray) -> np.ndarray:
    small = np.abs(den) < _DENOMINATOR_FLOOR
    if np.any(small):
        den = np.where(small, np.where(den < 0.0, -_DENOMINATOR_FLOOR,
                                       _DENOMINATOR_FLOOR), den)
    return 1.0 / den


def _reciprocal_signal(outer, inner, offset: float, omega1: float, omega2: float,
                       builtin: str, params: dict) -> EvaluableSignal:
    outer_fn = np.sin if outer == "sin" else np.cos
    inner_fn = np.sin if inner == "sin" else np.cos

    def evaluator(t):
        tt = np.asarray(t, dtype=float)
        den = offset + inner_fn(omega1 * tt) + inner_fn(omega2 * tt)
        val = outer_fn(_clamped_reciprocal(den))
        if tt.ndim == 0:
            return np.array([float(val)])
        return val.reshape(-1, 1)

    descriptor = (f"{outer}(1/({offset:g} + {inner}({omega1:g} t) + "
                  f"{inner}({omega2:g} t)))")
    return EvaluableSignal(1, evaluator, descriptor, builtin=builtin, params=params)


def aa_sin_reciprocal(offset: float = 2.0, omega1: float = 1.0,
                      omega2: float = math.sqrt(2.0)) -> EvaluableSignal:
    """sin(1/(offset + cos(w1 t) + cos(w2 t))); the default offset keeps the
    denominator positive, giving a continuous bounded signal."""
    params = {"offset": float(offset), "omega1": float(omega1), "omega2": float(omega2)}
    return _reciprocal_signal("sin", "cos", float(offset), float(omega1),
                              float(omega2), "aa_sin_reciprocal", params)


def aa_cos_reciprocal(offset: float = 0.0, omega1: float = 1.0,
                      omega2: float = math.sqrt(2.0)) -> EvaluableSignal:
    """cos(1/(offset + cos(w1 t) + cos(w2 t))); with offset 0 the denominator
    changes sign and the signal oscillates wildly near its zeros while staying
    bounded."""
    params = {"offset": float(offset), "omega1": float(omega1), "omega2": float(omega2)}
    return _reciprocal_signal("cos", "cos", float(offset), float(omega1),
                              float(omega2), "aa_cos_reciprocal", params)


def aa_sin_reciprocal_sines(offset: float = 0.0, omega1: float = 1.0,
                            omega2: float = math.sqrt(5.0)) -> EvaluableSignal:
    """sin(1/(offset + sin(w1 t) + sin(w2 t))), the sine-sum variant."""
    params = {"offset": float(offset), "omega1": float(omega1), "omega2": float(omega2)}
    return _reciprocal_signal("sin", "sin", float(offset), float(omega1),
                              float(omega2), "aa_sin_reciprocal_sines", params)


BUILTIN_SIGNALS = {
    "aa_sin_reciprocal": aa_sin_reciprocal,
    "aa_cos_reciprocal": aa_cos_reciprocal,
    "aa_sin_reciprocal_sines": aa_sin_reciprocal_sines,
}
