"""Totally complex number fields from a text catalog.

A field is defined by a monic integer minimal polynomial and an explicit
integral basis (rational polynomials in the root theta).  Discriminants,
traces and norms are computed exactly over the rationals; the relative
canonical embedding (one root per complex-conjugate pair, positive
imaginary part) is computed in doubles.
"""

import numbers
import warnings
from fractions import Fraction

import numpy as np

from .errors import CatalogInconsistent, NotTotallyComplex
from .exact import (bareiss_det, invert_exact, poly_mod, poly_mul,
                    poly_trim, power_sums)

ROOT_RESIDUAL_TOL = 1e-12
REAL_ROOT_TOL = 1e-8

# Best known root discriminants |d|^(1/2k) for totally complex fields of
# degree 2k, k = 1..5.  The first four are known optimal.
BEST_ROOT_DISC = {1: 1.732, 2: 3.289, 3: 4.622, 4: 5.787, 5: 6.793}


class FieldElement:
    """Element of a NumberField, held as exact rational coordinates over the
    integral basis."""

    __slots__ = ("field", "coords")

    def __init__(self, field, coords):
        self.field = field
        # force plain python ints: numpy integer scalars overflow inside
        # Fraction arithmetic
        self.coords = tuple(
            Fraction(int(c)) if isinstance(c, numbers.Integral) else Fraction(c)
            for c in coords)
        if len(self.coords) != field.degree:
            raise ValueError("coordinate length != field degree")

    def __add__(self, other):
        self._check(other)
        return FieldElement(self.field, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        self._check(other)
        return FieldElement(self.field, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return FieldElement(self.field, [-a for a in self.coords])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, [a * other for a in self.coords])
        self._check(other)
        return self.field.mul(self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, FieldElement) and other.field is self.field
                and other.coords == self.coords)

    def __hash__(self):
        return hash((id(self.field), self.coords))

    def __repr__(self):
        return f"FieldElement({self.field.name}, {[str(c) for c in self.coords]})"

    def _check(self, other):
        if not isinstance(other, FieldElement) or other.field is not self.field:
            raise ValueError("elements belong to different fields")

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def is_integral(self):
        return all(c.denominator == 1 for c in self.coords)

    def theta_poly(self):
        """Exact polynomial in theta (ascending) representing this element."""
        return self.field.coords_to_theta(self.coords)


class NumberField:
    """Totally complex field of degree 2k with a fixed integral basis.

    Immutable after construction; safe for concurrent reads.
    """

    def __init__(self, name, min_poly, basis, disc_expected=None, suboptimal=False):
        self.name = name
        self.min_poly = tuple(int(c) for c in min_poly)
        if self.min_poly[-1] != 1:
            raise CatalogInconsistent(f"{name}: min_poly must be monic")
        self.degree = len(self.min_poly) - 1
        if self.degree % 2 != 0:
            raise NotTotallyComplex(f"{name}: odd degree field cannot be totally complex")
        self.k = self.degree // 2
        self.basis = tuple(tuple(Fraction(c) for c in b) for b in basis)
        if len(self.basis) != self.degree:
            raise CatalogInconsistent(f"{name}: integral basis must have {self.degree} elements")
        self.disc_expected = disc_expected
        self.suboptimal = suboptimal

        self._check_irreducible()
        self.roots = self._find_roots()
        self.chosen = self._choose_embeddings()

        # change of basis: column j = theta-power coefficients of basis[j]
        n = self.degree
        mat = [[Fraction(0)] * n for _ in range(n)]
        for j, b in enumerate(self.basis):
            for i, c in enumerate(b):
                if i >= n:
                    raise CatalogInconsistent(f"{name}: basis polynomial degree too high")
                mat[i][j] = c
        self._basis_mat = mat
        try:
            self._basis_mat_inv = invert_exact(mat)
        except ZeroDivisionError:
            raise CatalogInconsistent(f"{name}: integral basis is not linearly independent")
        self._theta_traces = power_sums([Fraction(c) for c in self.min_poly], 2 * (n - 1))
        self._disc = None
        # complex values of each basis element at every root (2k x 2k)
        self._basis_values = np.array(
            [[_eval_poly(b, r) for b in self.basis] for r in self.roots])

    # -- construction checks ------------------------------------------------

    def _check_irreducible(self):
        p = self.min_poly
        a0 = p[0]
        if a0 == 0:
            raise CatalogInconsistent(f"{self.name}: min_poly has root 0")
        # monic integer polynomial: any rational root is an integer divisor of a0
        for d in _divisors(abs(a0)):
            for r in (d, -d):
                if _eval_int_poly(p, r) == 0:
                    raise CatalogInconsistent(f"{self.name}: min_poly has rational root {r}")
        if self.degree == 4 and _quartic_splits(p):
            raise CatalogInconsistent(f"{self.name}: min_poly factors into two quadratics")
        if self.degree > 4:
            warnings.warn(
                f"{self.name}: irreducibility of degree-{self.degree} min_poly "
                "trusted from catalog", stacklevel=3)

    def _find_roots(self):
        # companion-matrix eigenvalues, then Newton polishing
        coeffs_desc = list(reversed(self.min_poly))
        roots = np.roots(coeffs_desc)
        deriv_desc = [c * (len(coeffs_desc) - 1 - i) for i, c in enumerate(coeffs_desc[:-1])]
        for _ in range(50):
            vals = np.polyval(coeffs_desc, roots)
            if np.max(np.abs(vals)) < ROOT_RESIDUAL_TOL:
                break
            dvals = np.polyval(deriv_desc, roots)
            roots = roots - vals / dvals
        residual = np.max(np.abs(np.polyval(coeffs_desc, roots)))
        if residual > ROOT_RESIDUAL_TOL:
            raise CatalogInconsistent(
                f"{self.name}: root polishing stalled at residual {residual:.2e}")
        if np.min(np.abs(roots.imag)) < REAL_ROOT_TOL:
            raise NotTotallyComplex(f"{self.name}: min_poly has a real root")
        return roots

    def _choose_embeddings(self):
        """Pick the positive-imaginary root of each conjugate pair and order
        the full root list as [chosen..., conjugates...]."""
        upper = [r for r in self.roots if r.imag > 0]
        lower = [r for r in self.roots if r.imag < 0]
        if len(upper) != self.k:
            raise NotTotallyComplex(f"{self.name}: roots do not split into conjugate pairs")
        upper.sort(key=lambda z: (z.real, z.imag))
        paired = []
        pool = list(lower)
        for r in upper:
            match = min(pool, key=lambda z: abs(z - r.conjugate()))
            if abs(match - r.conjugate()) > 1e-8:
                raise NotTotallyComplex(f"{self.name}: unpaired complex root {r}")
            pool.remove(match)
            paired.append(match)
        self.roots = np.array(upper + paired)
        return list(range(self.k))

    # -- element plumbing ---------------------------------------------------

    def element(self, coords):
        return FieldElement(self, coords)

    def zero(self):
        return FieldElement(self, [0] * self.degree)

    def one(self):
        return self.from_theta_poly([Fraction(1)])

    def theta(self):
        return self.from_theta_poly([Fraction(0), Fraction(1)])

    def rational(self, q):
        return self.from_theta_poly([Fraction(q)])

    def coords_to_theta(self, coords):
        n = self.degree
        out = [Fraction(0)] * n
        for j, c in enumerate(coords):
            if c == 0:
                continue
            for i in range(n):
                out[i] += self._basis_mat[i][j] * c
        return poly_trim(out)

    def from_theta_poly(self, poly):
        poly = poly_mod([Fraction(c) for c in poly], [Fraction(c) for c in self.min_poly])
        n = self.degree
        padded = list(poly) + [Fraction(0)] * (n - len(poly))
        coords = [sum(self._basis_mat_inv[j][i] * padded[i] for i in range(n))
                  for j in range(n)]
        return FieldElement(self, coords)

    def mul(self, a, b):
        prod = poly_mul(a.theta_poly(), b.theta_poly())
        return self.from_theta_poly(prod)

    def trace(self, x):
        """Exact Tr_{K/Q}(x) as a Fraction."""
        poly = x.theta_poly()
        return sum(c * self._theta_traces[i] for i, c in enumerate(poly))

    def norm(self, x):
        """Exact N_{K/Q}(x): determinant of multiplication by x in the theta
        power basis."""
        n = self.degree
        poly = x.theta_poly()
        cols = []
        current = list(poly)
        mp = [Fraction(c) for c in self.min_poly]
        for _ in range(n):
            padded = list(current) + [Fraction(0)] * (n - len(current))
            cols.append(padded)
            current = poly_mod(poly_mul(current, [Fraction(0), Fraction(1)]), mp)
        matrix = [[cols[j][i] for j in range(n)] for i in range(n)]
        return bareiss_det(matrix)

    # -- embeddings ----------------------------------------------------------

    def embed_all(self, x):
        """Values of x at all 2k roots (chosen embeddings first)."""
        coords = np.array([float(c) for c in x.coords])
        return self._basis_values @ coords

    def canonical_embed(self, x):
        """Relative canonical embedding: one value per conjugate pair."""
        return self.embed_all(x)[:self.k]

    # -- invariants ----------------------------------------------------------

    def discriminant(self):
        """det(Tr(w_i w_j)) as an exact integer; cross-checked against the
        catalog value when one was supplied."""
        if self._disc is None:
            n = self.degree
            gram = [[self.trace(self.element(_unit(n, i)) * self.element(_unit(n, j)))
                     for j in range(n)] for i in range(n)]
            d = bareiss_det(gram)
            if d.denominator != 1:
                raise CatalogInconsistent(
                    f"{self.name}: trace form determinant {d} is not an integer; "
                    "basis is not an order")
            d = int(d)
            if self.disc_expected is not None and d != self.disc_expected:
                raise CatalogInconsistent(
                    f"{self.name}: computed discriminant {d} != catalog {self.disc_expected}")
            self._disc = d
        return self._disc

    def root_discriminant(self):
        return abs(self.discriminant()) ** (1.0 / self.degree)

    def table_target(self):
        """Best known root discriminant for this degree, or None."""
        return BEST_ROOT_DISC.get(self.k)

    def meets_table_target(self, tol=1e-3):
        target = self.table_target()
        if target is None:
            return None
        return self.root_discriminant() <= target + tol

    def __repr__(self):
        return f"NumberField({self.name}, degree={self.degree})"


def _unit(n, i):
    coords = [0] * n
    coords[i] = 1
    return coords


def _eval_poly(coeffs, z):
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * z + complex(float(c))
    return acc


def _eval_int_poly(coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _divisors(n):
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            out.append(n // d)
        d += 1
    return sorted(set(out))


def _quartic_splits(p):
    """Check whether a monic integer quartic factors into two monic integer
    quadratics (x^2+ax+b)(x^2+cx+d)."""
    _, c1, c2, c3, _ = (p[0], p[1], p[2], p[3], p[4])
    p0 = p[0]
    for b in _signed_divisors(p0):
        if p0 % b != 0:
            continue
        d = p0 // b
        # a+c = c3, b+d+ac = c2, ad+bc = c1
        s = c3
        prod = c2 - b - d
        # a, c are roots of t^2 - s t + prod
        disc = s * s - 4 * prod
        if disc < 0:
            continue
        r = _isqrt(disc)
        if r * r != disc:
            continue
        for num in (s + r, s - r):
            if num % 2 != 0:
                continue
            a = num // 2
            c = s - a
            if a * d + b * c == c1:
                return True
    return False


def _signed_divisors(n):
    ds = _divisors(abs(n))
    return [d for x in ds for d in (x, -x)]


def _isqrt(n):
    import math
    return math.isqrt(n)
