"""Even functions on the unit sphere of C^n = R^{2n}.

Symmetry levels, weakest first:

* ``NONE``   -- no structure assumed
* ``RTHETA`` -- invariant under a common phase ``z -> e^{i t} z``
* ``TORUS``  -- invariant under independent phases; depends on ``w = |z|^2``
* ``AXIAL``  -- torus invariant and depends on ``w_n = |z_n|^2`` only
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ._validation import as_complex, as_real, check_directions
from .errors import InputDomainError, SpecParseError
from .polynomials import SimplexBasis, simplex_gauss_rule

__all__ = [
    "NONE",
    "RTHETA",
    "TORUS",
    "AXIAL",
    "symmetry_name",
    "SphericalProfile",
    "ConstantProfile",
    "FunctionProfile",
    "PolynomialProfile",
    "moduli",
    "torus_invariance_defect",
    "rtheta_invariance_defect",
]

NONE, RTHETA, TORUS, AXIAL = 0, 1, 2, 3
_NAMES = {NONE: "none", RTHETA: "rtheta", TORUS: "torus", AXIAL: "axial"}


def symmetry_name(level):
    return _NAMES[level]


def moduli(u):
    """Squared moduli ``|z_j|^2`` of real-interleaved points ``u``."""
    z = as_complex(u)
    return (z * z.conj()).real


class SphericalProfile:
    """Base class.  Subclasses set ``n``, ``symmetry``, ``smoothness``.

    ``smoothness`` is the number of continuous derivatives, ``math.inf`` for
    analytic profiles.  Torus-invariant profiles must implement
    :meth:`on_moduli`.
    """

    n: int
    symmetry: int = NONE
    smoothness: float = math.inf

    def __call__(self, u, check=True):
        u = np.asarray(u, dtype=float)
        if check:
            check_directions(u, 2 * self.n)
        out = np.asarray(self._evaluate(u), dtype=float)
        return out.reshape(u.shape[:-1]) if out.size == int(np.prod(u.shape[:-1])) else out

    def _evaluate(self, u):
        if self.symmetry >= TORUS:
            return self.on_moduli(moduli(u))
        raise NotImplementedError

    def on_moduli(self, w):
        raise NotImplementedError(f"{type(self).__name__} is not torus invariant")


@dataclass(frozen=True)
class ConstantProfile(SphericalProfile):
    n: int
    value: float = 1.0
    symmetry: int = AXIAL
    smoothness: float = math.inf

    def on_moduli(self, w):
        w = np.atleast_2d(w)
        return np.full(w.shape[:-1], float(self.value))


@dataclass(frozen=True)
class FunctionProfile(SphericalProfile):
    """Profile defined by callables.

    ``func`` takes real points (M, 2n); ``moduli_func`` (optional) takes
    squared moduli (M, n) and must be supplied for torus-invariant profiles.
    """

    n: int
    func: Callable | None = None
    moduli_func: Callable | None = None
    symmetry: int = NONE
    smoothness: float = math.inf

    def _evaluate(self, u):
        if self.func is None:
            return self.on_moduli(moduli(u))
        return np.asarray(self.func(u), dtype=float)

    def on_moduli(self, w):
        if self.moduli_func is None:
            return super().on_moduli(w)
        return np.asarray(self.moduli_func(np.atleast_2d(w)), dtype=float)


@dataclass(frozen=True, eq=False)
class PolynomialProfile(SphericalProfile):
    """Polynomial in the squared moduli, stored in an orthogonal simplex basis.

    ``coef[i]`` multiplies the basis polynomial with multi-index
    ``SimplexBasis(n, degree, axial).alpha[i]``.
    """

    n: int
    degree: int
    coef: np.ndarray
    axial: bool = False
    smoothness: float = math.inf
    _basis: SimplexBasis = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        basis = SimplexBasis(self.n, self.degree, axial=self.axial)
        coef = np.asarray(self.coef, dtype=float)
        if coef.shape != (len(basis),):
            raise InputDomainError(f"expected {len(basis)} coefficients, got {coef.shape}")
        object.__setattr__(self, "coef", coef)
        object.__setattr__(self, "_basis", basis)

    @property
    def symmetry(self):
        return AXIAL if self.axial or self.n == 1 else TORUS

    @property
    def basis(self):
        return self._basis

    def on_moduli(self, w):
        w = np.atleast_2d(np.asarray(w, dtype=float))
        return self._basis.synthesize(self.coef, w)

    def component(self, k):
        """Coefficient vector restricted to total degree ``k`` (harmonic degree 2k)."""
        c = np.where(self._basis.degree == k, self.coef, 0.0)
        return PolynomialProfile(self.n, self.degree, c, self.axial)

    @classmethod
    def fit(cls, n, degree, w, values, axial=False):
        """Least-squares fit of a polynomial of the given degree to samples."""
        basis = SimplexBasis(n, degree, axial=axial)
        B = basis.evaluate(np.atleast_2d(w))
        coef, *_ = np.linalg.lstsq(B.T, np.asarray(values, dtype=float), rcond=None)
        return cls(n, degree, coef, axial)

    # CSV round trip on a tabulated grid of the reduced domain
    def grid(self):
        q = self.degree + 2
        if self.axial:
            w, _ = simplex_gauss_rule(1, q)
            full = np.zeros((len(w), self.n))
            full[:, -1] = w[:, -1]
            full[:, 0] = 1.0 - w[:, -1]
            return full
        w, _ = simplex_gauss_rule(self.n - 1, q)
        return w

    def to_csv(self, fh=None):
        """Tabulate on the reduced grid; columns ``m1..mn`` are the moduli."""
        w = self.grid()
        vals = self.on_moduli(w)
        out = fh if fh is not None else io.StringIO()
        out.write(f"# degree={self.degree} symmetry={symmetry_name(self.symmetry)} n={self.n}\n")
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow([f"m{i + 1}" for i in range(self.n)] + ["value"])
        for row, v in zip(np.sqrt(w), vals):
            writer.writerow([repr(float(x)) for x in row] + [repr(float(v))])
        if fh is None:
            return out.getvalue()
        return None

    @classmethod
    def from_csv(cls, fh):
        text = fh.read() if hasattr(fh, "read") else str(fh)
        lines = text.splitlines()
        if not lines or not lines[0].startswith("#"):
            raise SpecParseError("profile CSV lacks the '# degree=... symmetry=... n=...' header")
        meta = dict(tok.split("=", 1) for tok in lines[0][1:].split())
        try:
            degree, n, sym = int(meta["degree"]), int(meta["n"]), meta["symmetry"]
        except (KeyError, ValueError) as exc:
            raise SpecParseError(f"bad profile CSV header: {lines[0]!r}") from exc
        rows = list(csv.reader(lines[1:]))
        header, body = rows[0], rows[1:]
        if header != [f"m{i + 1}" for i in range(n)] + ["value"]:
            raise SpecParseError(f"bad profile CSV columns: {header}")
        data = np.array([[float(x) for x in r] for r in body if r])
        w = data[:, :n] ** 2
        return cls.fit(n, degree, w, data[:, n], axial=(sym == "axial"))


def rtheta_invariance_defect(profile, samples=1000, seed=0):
    """Max ``|f(e^{it} u) - f(u)|`` over random ``u`` and ``t``."""
    rng = np.random.default_rng(seed)
    n = profile.n
    z = rng.standard_normal((samples, n)) + 1j * rng.standard_normal((samples, n))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    t = rng.uniform(0, 2 * np.pi, (samples, 1))
    return float(np.max(np.abs(profile(as_real(np.exp(1j * t) * z), check=False)
                               - profile(as_real(z), check=False))))


def torus_invariance_defect(profile, samples=1000, seed=0):
    """Max ``|f(D u) - f(u)|`` over random ``u`` and diagonal unitaries ``D``."""
    rng = np.random.default_rng(seed)
    n = profile.n
    z = rng.standard_normal((samples, n)) + 1j * rng.standard_normal((samples, n))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    t = rng.uniform(0, 2 * np.pi, (samples, n))
    return float(np.max(np.abs(profile(as_real(np.exp(1j * t) * z), check=False)
                               - profile(as_real(z), check=False))))
