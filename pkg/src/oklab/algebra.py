"""Multigraded monomial algebras A inside k[x_1..x_r][t_1..t_s].

Everything is driven by the underlying graded semigroup of exponent
vectors: dimensions of graded pieces are exact lattice-point counts,
volume functions are evaluated both geometrically (cone fibers of the
global Newton-Okounkov cone) and by asymptotic counting, and mixed
multiplicities come from exact Hilbert-polynomial interpolation with a
Fujita-style ladder over degree-p subalgebras.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import (RegularityNotReachedError, UnsupportedSemigroupError,
                     ValidationError)
from .lattice import group_generated, rational_rank
from .polytope import (MultidegreePolynomial, PolyCone, Sublattice,
                       compositions, cone_fiber, convex_hull,
                       dd_extreme_rays, integral_volume, make_cone,
                       _solve_square)
from .semigroup import BoundRule, GradedSemigroup, StaircaseSpec, \
    VeroneseRay


@dataclass(frozen=True)
class FiberVolume:
    """Value of the volume function at one point.

    ``method`` is "fiber" for exact rational evaluations and "estimate"
    when the global cone is not polyhedral and only a counting estimate
    is available.
    """

    value: object  # Fraction or float
    method: str

    @property
    def exact(self):
        return self.method == "fiber"


@dataclass(frozen=True)
class MixedMultiplicityReport:
    d: tuple
    value: object                  # Fraction (exact) or float
    provenance: str                # "exact" | "fujita"
    ladder: tuple = ()             # tuple of (p, Fraction)
    positive: bool = False


class MonomialAlgebra:
    """A monomial subalgebra presented by its exponent semigroup."""

    def __init__(self, semigroup):
        self.semigroup = semigroup
        self._dim_cache = {}

    @classmethod
    def from_generators(cls, r, s, gens):
        return cls(GradedSemigroup.from_generators(r, s, gens))

    @classmethod
    def from_staircase(cls, spec, closure_bound=8):
        return cls(GradedSemigroup.from_staircase(spec, closure_bound))

    @property
    def r(self):
        return self.semigroup.r

    @property
    def s(self):
        return self.semigroup.s

    @property
    def is_generated(self):
        return self.semigroup.is_generated

    def axis_nonvanishing(self):
        """Whether [A]_{e_i} is nonzero, per axis."""
        out = []
        for i in range(self.s):
            e = tuple(int(i == j) for j in range(self.s))
            out.append(bool(self.semigroup.graded_piece(e)))
        return out

    # -- Hilbert function ----------------------------------------------------

    def hilbert_function(self, n):
        return self.semigroup.piece_size(tuple(n))

    def veronese(self, n):
        """Singly graded Veronese subalgebra along the ray n."""
        return MonomialAlgebra(self.semigroup.veronese_ray(n))

    # -- global cone and volume function -------------------------------------

    def global_no_cone(self, bound=8):
        """(cone, exact) for the global Newton-Okounkov cone Delta(A).

        Rays carry the valuation block first and the degree block last.
        Piecewise-linear staircases get an exact H-representation;
        square-root staircases only an inner approximation from
        enumerated points (exact = False).
        """
        src = self.semigroup.source
        if self.is_generated:
            rays = [val + deg for val, deg in self.semigroup.generators]
            return make_cone(rays, self.r + self.s), True
        if isinstance(src, StaircaseSpec) and _is_polyhedral(src):
            ineqs = []
            dim = 1 + src.s
            for f in _lower_forms(src):
                ineqs.append((Fraction(1),) + tuple(-Fraction(c) for c in f))
            for f in _upper_forms(src):
                ineqs.append((Fraction(-1),) + tuple(Fraction(c) for c in f))
            for i in range(src.s):
                ineqs.append(tuple(Fraction(int(j == i + 1))
                                   for j in range(dim)))
            lines, rays = dd_extreme_rays(ineqs, dim)
            if lines:
                raise UnsupportedSemigroupError(
                    "staircase cone is not pointed")
            return make_cone(rays, dim), True
        pts = set()
        if isinstance(src, VeroneseRay):
            for k in range(1, bound + 1):
                pts.update(v + (k,) for v in self.semigroup.graded_piece((k,)))
        else:
            for t in range(1, bound + 1):
                for n in compositions(t, self.s):
                    pts.update(v + n
                               for v in self.semigroup.graded_piece(n))
        rays = [p for p in pts if any(p)]
        return make_cone(rays, self.r + self.s), False

    def krull_dim(self):
        if "krull" not in self._dim_cache:
            vecs = self._generator_vectors()
            self._dim_cache["krull"] = group_generated(
                vecs, self.r + self.s).rank
        return self._dim_cache["krull"]

    def dim_subalgebra(self, axes):
        """dim of A_(J): degrees supported on the axis subset J."""
        axes = frozenset(axes)
        if not axes <= set(range(1, self.s + 1)):
            raise ValidationError(f"axes {sorted(axes)} must be within "
                                  f"1..{self.s}")
        vecs = [v for v in self._generator_vectors()
                if all(v[self.r + i] == 0
                       for i in range(self.s) if i + 1 not in axes)]
        return group_generated(vecs, self.r + self.s).rank

    def _generator_vectors(self, bound=8):
        if self.is_generated:
            return [val + deg for val, deg in self.semigroup.generators]
        cone, _ = self.global_no_cone(bound)
        return list(cone.rays)

    def volume_fn_fiber(self, x, bound=8):
        """F_A(x) = Vol_q(Delta(A)_x) / ind(A); exact when polyhedral."""
        x = [Fraction(v) for v in x]
        if len(x) != self.s:
            raise ValidationError(f"point {x} must have length {self.s}")
        if not all(self.axis_nonvanishing()):
            raise UnsupportedSemigroupError(
                "volume function needs nonzero pieces on every axis")
        cone, exact = self.global_no_cone(bound)
        if not exact:
            lam = math.lcm(*(v.denominator for v in x))
            n = tuple(int(v * lam) for v in x)
            q = self.krull_dim() - self.s
            est = self.volume_fn_count(n, n_max=200)
            return FiberVolume(est / float(lam) ** q, "estimate")
        q = self.krull_dim() - self.s
        fiber = cone_fiber(cone, (self.r, self.s), x)
        if fiber.affine_dim < q:
            return FiberVolume(Fraction(0), "fiber")
        lam = math.lcm(*(v.denominator for v in x))
        n = tuple(int(v * lam) for v in x)
        if any(v <= 0 for v in n):
            raise ValidationError(f"point {x} must be positive")
        inv = self.semigroup.veronese_ray(n).invariants()
        lattice = _project_valuation(inv["boundary_lattice"], self.r)
        vol = integral_volume(fiber, lattice)
        return FiberVolume(vol / inv["ind"], "fiber")

    def volume_fn_count(self, n, n_max=500, subsample=1):
        """Tail-fit estimate of lim dim[A]_{kn} / k^q."""
        n = tuple(int(v) for v in n)
        if any(v <= 0 for v in n):
            raise ValidationError(f"ray {n} must be positive")
        q = self.krull_dim() - self.s
        ray = self.semigroup.veronese_ray(n)
        counts = ray.counts_upto(n_max, subsample=subsample)
        ks = np.array(sorted(k for k in counts if k >= max(1, n_max // 2)))
        ys = np.array([counts[int(k)] for k in ks], dtype=float)
        if q == 0:
            return float(ys.mean())
        design = np.stack([ks.astype(float) ** q,
                           ks.astype(float) ** (q - 1)], axis=1)
        sol, *_ = np.linalg.lstsq(design, ys, rcond=None)
        return float(sol[0])

    # -- decomposability, truncations ----------------------------------------

    def is_decomposable(self, bound=4):
        """(flag, witness): piece(n) == product of axis pieces, n <= bound."""
        for t in range(2, bound * self.s + 1):
            for n in compositions(t, self.s):
                if any(v > bound for v in n):
                    continue
                piece = self.semigroup.graded_piece(n)
                prod = {(0,) * self.r}
                for i, ni in enumerate(n):
                    if ni == 0:
                        continue
                    e = tuple(ni * int(i == j) for j in range(self.s))
                    axis = self.semigroup.graded_piece(e)
                    prod = {tuple(a + b for a, b in zip(p, v))
                            for p in prod for v in axis}
                if piece != prod:
                    return False, n
        return True, None

    def truncation(self, a):
        """Subalgebra generated by the axis pieces up to degree a."""
        gens = []
        for i in range(self.s):
            for j in range(1, a + 1):
                e = tuple(j * int(i == j2) for j2 in range(self.s))
                gens.extend((v, e) for v in self.semigroup.graded_piece(e))
        if not gens:
            raise ValidationError(f"no axis pieces up to degree {a}")
        return MonomialAlgebra.from_generators(self.r, self.s, gens)

    def p_subalgebra(self, p):
        """Standard multigraded algebra from the degree p*e_i pieces.

        The piece at p*e_i is regraded to sit in degree e_i.
        """
        gens = []
        for i in range(self.s):
            e = tuple(p * int(i == j) for j in range(self.s))
            piece = self.semigroup.graded_piece(e)
            if not piece:
                raise ValidationError(
                    f"piece at degree {p}*e_{i + 1} is empty")
            unit = tuple(int(i == j) for j in range(self.s))
            gens.extend((v, unit) for v in sorted(piece))
        return MonomialAlgebra.from_generators(self.r, self.s, gens)

    # -- Hilbert polynomial and mixed multiplicities -------------------------

    def is_standard(self):
        if not self.is_generated:
            return False
        units = {tuple(int(i == j) for j in range(self.s))
                 for i in range(self.s)}
        return all(deg in units for _, deg in self.semigroup.generators)

    def hilbert_polynomial(self):
        """Exact multigraded Hilbert polynomial, with mixed multiplicities.

        Returns (polynomial, mixed) where mixed maps each type d with
        |d| = q to the integer e(d) = d! * [coefficient of n^d].
        """
        if not self.is_standard():
            raise ValidationError(
                "Hilbert polynomial needs a standard multigraded algebra")
        q = self.krull_dim() - self.s
        if q < 0:
            raise ValidationError("dim(A) < s; no Hilbert polynomial")
        poly = _stable_fit(self.hilbert_function, self.s, q)
        mixed = {}
        for d in compositions(q, self.s):
            c = poly.coeffs.get(d, Fraction(0))
            mixed[d] = c * math.prod(math.factorial(x) for x in d)
        return poly, mixed

    def mixed_multiplicities(self, d, p_schedule=(1, 2, 4, 8),
                             decomp_bound=4):
        """Mixed multiplicity e(d; A) via the ladder of p-subalgebras."""
        d = tuple(int(x) for x in d)
        q = self.krull_dim() - self.s
        if sum(d) != q:
            raise ValidationError(f"type {d} must have total degree q={q}")
        ok, witness = self.is_decomposable(decomp_bound)
        if not ok:
            raise ValidationError(
                f"grading is not decomposable; first failure at {witness}")
        ladder = []
        for p in p_schedule:
            ap = self.p_subalgebra(p)
            qp = ap.krull_dim() - self.s
            if qp < q:
                ladder.append((p, Fraction(0)))
                continue
            _, mixed = ap.hilbert_polynomial()
            ladder.append((p, Fraction(mixed[d], p ** q)))
        values = [v for _, v in ladder]
        positive, _ = self.positivity(d)
        if len(set(values[-2:])) == 1:
            return MixedMultiplicityReport(
                d=d, value=values[-1], provenance="exact",
                ladder=tuple(ladder), positive=positive)
        # One Richardson step: the ladder converges with O(1/p) error.
        extrap = 2.0 * float(values[-1]) - float(values[-2])
        return MixedMultiplicityReport(
            d=d, value=extrap, provenance="fujita",
            ladder=tuple(ladder), positive=positive)

    def positivity(self, d):
        """(flag, certificate) for e(d; A) > 0 via subset dimensions.

        Positive iff for every nonempty subset J of the axes,
        sum_{j in J} d_j <= dim(A_(J)) - |J|.  The certificate is the
        first violated subset, or None.
        """
        d = tuple(int(x) for x in d)
        axes = list(range(1, self.s + 1))
        for size in range(1, self.s + 1):
            for subset in _subsets(axes, size):
                lhs = sum(d[j - 1] for j in subset)
                if lhs > self.dim_subalgebra(subset) - size:
                    return False, subset
        return True, None


def _subsets(items, size):
    from itertools import combinations
    return combinations(items, size)


def _is_polyhedral(spec):
    return spec.lower.kind in ("linear", "max") and \
        spec.upper.kind in ("linear", "min")


def _lower_forms(spec):
    return spec.lower.forms


def _upper_forms(spec):
    return spec.upper.forms


def _project_valuation(lattice, r):
    """Drop the trailing degree coordinates (all zero on the boundary)."""
    basis = tuple(row[:r] for row in lattice.basis)
    return Sublattice(basis=basis, ambient_dim=r)


def _stable_fit(fn, s, q, n0=None, cap=512):
    """Interpolate fn on a shifted principal lattice until stable.

    Fits the full polynomial of total degree <= q in s variables on the
    grid N0*(1,..,1) + {m : |m| <= q}, verifies it on the two next
    shells, then doubles N0; two consecutive agreeing verified fits are
    accepted.  Raises RegularityNotReachedError past the cap.
    """
    exps = [m for t in range(q + 1) for m in compositions(t, s)]
    n0 = n0 if n0 is not None else q + 1
    prev = None
    fits = []
    while n0 <= cap:
        grid = [tuple(n0 + m[i] for i in range(s)) for m in exps]
        rows = [[_monomial(p, e) for e in exps] for p in grid]
        rhs = [Fraction(fn(p)) for p in grid]
        coeffs = dict(zip(exps, _solve_square(rows, rhs)))
        poly = MultidegreePolynomial(num_vars=s, degree=q, coeffs={
            e: c for e, c in coeffs.items() if c})
        held_out = [tuple(n0 + m[i] for i in range(s))
                    for t in (q + 1, q + 2) for m in compositions(t, s)]
        ok = all(poly.evaluate(p) == fn(p) for p in held_out)
        fits.append((n0, poly.coeffs))
        if ok and prev is not None and prev == poly.coeffs:
            return poly
        prev = poly.coeffs if ok else None
        n0 *= 2
    raise RegularityNotReachedError(
        f"Hilbert fit did not stabilize up to N0={cap}", last_fits=fits[-2:])


def _monomial(point, exp):
    return math.prod(Fraction(p) ** e for p, e in zip(point, exp))
