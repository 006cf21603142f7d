"""Cyclic algebras (E/K, sigma, gamma), natural orders, and their embeddings.

E is represented as K[eta]/(rel_poly); algebra elements are x_0 + u x_1 +
... + u^{n-1} x_{n-1} with coefficients in E and relations x u = u sigma(x),
u^n = gamma.  All coefficient arithmetic is exact over the rationals; only
the final embeddings into complex matrices use doubles.
"""

from fractions import Fraction
from itertools import permutations

import numpy as np

from .errors import CatalogInconsistent, PrecisionFailure
from .exact import bareiss_det, invert_exact


class AlgebraElement:
    """Element of a cyclic algebra: tuple of n E-coefficients, each a tuple
    of n elements of the center."""

    __slots__ = ("algebra", "coords")

    def __init__(self, algebra, coords):
        self.algebra = algebra
        self.coords = tuple(tuple(c) for c in coords)

    def __add__(self, other):
        alg = self.algebra
        return AlgebraElement(alg, [alg.e_add(a, b)
                                    for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        alg = self.algebra
        return AlgebraElement(alg, [alg.e_add(a, alg.e_neg(b))
                                    for a, b in zip(self.coords, other.coords)])

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return self.algebra.mul(self, other)
        return AlgebraElement(self.algebra,
                              [tuple(c * other for c in e) for e in self.coords])

    __rmul__ = __mul__

    def is_zero(self):
        return all(c.is_zero() for e in self.coords for c in e)

    def __repr__(self):
        return f"AlgebraElement({self.algebra.name})"


class CyclicAlgebra:
    """(E/K, sigma, gamma) of degree n over a totally complex center K.

    Immutable after construction; embedding evaluation is pure.
    """

    def __init__(self, name, center, n, rel_poly, sigma_eta, gamma, rel_basis,
                 division_asserted=False):
        self.name = name
        self.center = center
        self.n = n
        self.k = center.k
        if rel_poly[-1] != center.one():
            raise CatalogInconsistent(f"{name}: rel_poly must be monic")
        self.rel_poly = tuple(rel_poly)
        self.sigma_eta = tuple(sigma_eta)
        self.gamma = gamma
        if gamma.is_zero():
            raise CatalogInconsistent(f"{name}: gamma must be nonzero")
        self.rel_basis = tuple(tuple(e) for e in rel_basis)
        self.division_asserted = division_asserted

        self._sigma_eta_pows = self._powers(self.sigma_eta)
        self._check_sigma()
        self._eta_roots = self._choose_eta_roots()

    # -- E = K[eta]/(rel_poly) arithmetic -------------------------------------

    def e_zero(self):
        return tuple(self.center.zero() for _ in range(self.n))

    def e_one(self):
        out = [self.center.zero() for _ in range(self.n)]
        out[0] = self.center.one()
        return tuple(out)

    def e_eta(self):
        if self.n == 1:
            # E = K and eta = 1 (rel_poly is y - 1 up to normalization)
            return self.e_scalar(self.center.zero() - self.rel_poly[0])
        out = [self.center.zero() for _ in range(self.n)]
        out[1] = self.center.one()
        return tuple(out)

    def e_scalar(self, x):
        out = [self.center.zero() for _ in range(self.n)]
        out[0] = x
        return tuple(out)

    def e_add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def e_neg(self, a):
        return tuple(-x for x in a)

    def e_scale(self, a, c):
        """Scale an E-element by a K-element."""
        return tuple(x * c for x in a)

    def e_mul(self, a, b):
        n = self.n
        prod = [self.center.zero() for _ in range(2 * n - 1)]
        for i, x in enumerate(a):
            if x.is_zero():
                continue
            for j, y in enumerate(b):
                if y.is_zero():
                    continue
                prod[i + j] = prod[i + j] + x * y
        # reduce modulo the monic rel_poly
        for deg in range(2 * n - 2, n - 1, -1):
            lead = prod[deg]
            if lead.is_zero():
                continue
            for i in range(n + 1):
                prod[deg - n + i] = prod[deg - n + i] - lead * self.rel_poly[i]
        return tuple(prod[:n])

    def e_equal(self, a, b):
        return all((x - y).is_zero() for x, y in zip(a, b))

    def _powers(self, e):
        pows = [self.e_one()]
        for _ in range(self.n - 1):
            pows.append(self.e_mul(pows[-1], e))
        return pows

    def sigma(self, x):
        """Apply sigma once: K-linear extension of eta -> sigma_eta."""
        out = self.e_zero()
        for j, c in enumerate(x):
            if c.is_zero():
                continue
            out = self.e_add(out, self.e_scale(self._sigma_eta_pows[j], c))
        return out

    def sigma_pow(self, x, t):
        for _ in range(t % self.n):
            x = self.sigma(x)
        return x

    def _check_sigma(self):
        # sigma must send eta to another root of rel_poly ...
        acc = self.e_zero()
        for i, c in enumerate(self.rel_poly[:-1]):
            acc = self.e_add(acc, self.e_scale(self._sigma_eta_pows[i] if i < self.n
                                               else self.e_one(), c))
        top = self.e_mul(self._sigma_eta_pows[self.n - 1], self.sigma_eta) \
            if self.n > 1 else self.e_one()
        acc = self.e_add(acc, top)
        if not all(c.is_zero() for c in acc):
            raise CatalogInconsistent(f"{self.name}: sigma_eta is not a root of rel_poly")
        # ... and have order dividing n (applied literally n times)
        e = self.e_eta()
        img = e
        for _ in range(self.n):
            img = self.sigma(img)
        if not self.e_equal(img, e):
            raise CatalogInconsistent(f"{self.name}: sigma^n is not the identity")

    # -- embeddings ------------------------------------------------------------

    def _choose_eta_roots(self):
        """One deterministic root of the embedded rel_poly per chosen
        embedding of K (sorted by descending imaginary, then descending real
        part, after rounding out float noise)."""
        roots = []
        for i in range(self.k):
            coeffs = [complex(self.center.canonical_embed(c)[i]) for c in self.rel_poly]
            if self.n == 1:
                roots.append(-coeffs[0])
                continue
            cand = np.roots(list(reversed(coeffs)))
            for _ in range(40):
                vals = np.polyval(list(reversed(coeffs)), cand)
                if np.max(np.abs(vals)) < 1e-13:
                    break
                dcoeffs = [c * j for j, c in enumerate(coeffs)][1:]
                cand = cand - vals / np.polyval(list(reversed(dcoeffs)), cand)
            cand = sorted(cand, key=lambda z: (-round(z.imag, 9), -round(z.real, 9)))
            roots.append(complex(cand[0]))
        return roots

    def embed_e(self, x, i):
        """Value of an E-element at the i-th chosen embedding."""
        eta = self._eta_roots[i]
        acc = 0j
        for j in reversed(range(self.n)):
            acc = acc * eta + complex(self.center.canonical_embed(x[j])[i])
        return acc

    # -- algebra elements -------------------------------------------------------

    def element(self, coords):
        return AlgebraElement(self, coords)

    def one(self):
        coords = [self.e_zero() for _ in range(self.n)]
        coords[0] = self.e_one()
        return AlgebraElement(self, coords)

    def u(self):
        if self.n == 1:
            return AlgebraElement(self, [self.e_scalar(self.gamma)])
        coords = [self.e_zero() for _ in range(self.n)]
        coords[1] = self.e_one()
        return AlgebraElement(self, coords)

    def mul(self, a, b):
        """Exact product via u^r x u^s y = u^{r+s} sigma^s(x) y and u^n = gamma."""
        n = self.n
        out = [self.e_zero() for _ in range(n)]
        for r, xr in enumerate(a.coords):
            if all(c.is_zero() for c in xr):
                continue
            for s, ys in enumerate(b.coords):
                if all(c.is_zero() for c in ys):
                    continue
                term = self.e_mul(self.sigma_pow(xr, s), ys)
                power, wrap = (r + s) % n, (r + s) // n
                for _ in range(wrap):
                    term = self.e_scale(term, self.gamma)
                out[power] = self.e_add(out[power], term)
        return AlgebraElement(self, out)

    def phi_entries(self, a):
        """Left-regular matrix of a with exact E-element entries: entry (r, c)
        is sigma^c(x_{(r-c) mod n}), multiplied by gamma above the diagonal."""
        n = self.n
        rows = []
        for r in range(n):
            row = []
            for c in range(n):
                x = a.coords[(r - c) % n]
                entry = self.sigma_pow(x, c)
                if r < c:
                    entry = self.e_scale(entry, self.gamma)
                row.append(entry)
            rows.append(row)
        return rows

    def left_regular(self, a, i):
        """alpha_i(phi(a)) as an n x n complex matrix, 0 <= i < k."""
        entries = self.phi_entries(a)
        return np.array([[self.embed_e(entries[r][c], i) for c in range(self.n)]
                         for r in range(self.n)])

    def multiblock_embed(self, a):
        """(alpha_1(A), ..., alpha_k(A)) as an array of k blocks of shape n x n."""
        entries = self.phi_entries(a)
        blocks = np.empty((self.k, self.n, self.n), dtype=complex)
        for i in range(self.k):
            for r in range(self.n):
                for c in range(self.n):
                    blocks[i, r, c] = self.embed_e(entries[r][c], i)
        return blocks

    def reduced_trace(self, a):
        """Trd(a) = Tr_{E/K}(x_0) as an exact element of K."""
        acc = self.e_zero()
        for c in range(self.n):
            acc = self.e_add(acc, self.sigma_pow(a.coords[0], c))
        for coeff in acc[1:]:
            if not coeff.is_zero():
                raise PrecisionFailure(f"{self.name}: reduced trace did not land in K")
        return acc[0]

    def reduced_norm(self, a):
        """Nrd(a) = det(phi(a)) as an exact element of K (Leibniz expansion,
        fine for the catalog degrees n <= 3)."""
        entries = self.phi_entries(a)
        acc = self.e_zero()
        for perm in permutations(range(self.n)):
            sign = _perm_sign(perm)
            term = self.e_one()
            for r in range(self.n):
                term = self.e_mul(term, entries[r][perm[r]])
            if sign < 0:
                term = self.e_neg(term)
            acc = self.e_add(acc, term)
        for coeff in acc[1:]:
            if not coeff.is_zero():
                raise PrecisionFailure(f"{self.name}: reduced norm did not land in K")
        return acc[0]

    def __repr__(self):
        return f"CyclicAlgebra({self.name}, n={self.n}, center={self.center.name})"


class NaturalOrder:
    """The Z-order O_E + u O_E + ... + u^{n-1} O_E with its 2kn^2-element
    Z-basis u^j (w_a e_b)."""

    def __init__(self, algebra):
        self.algebra = algebra
        K = algebra.center
        n, deg = algebra.n, K.degree
        self.rank = deg * n * n
        basis = []
        for j in range(n):
            for e in algebra.rel_basis:
                for a_idx in range(deg):
                    w = K.element([1 if t == a_idx else 0 for t in range(deg)])
                    coords = [algebra.e_zero() for _ in range(n)]
                    coords[j] = algebra.e_scale(e, w)
                    basis.append(AlgebraElement(algebra, coords))
        self.z_basis = tuple(basis)
        flat = [self.flatten(b) for b in self.z_basis]
        mat = [[flat[j][i] for j in range(self.rank)] for i in range(self.rank)]
        try:
            self._flat_inv = invert_exact(mat)
        except ZeroDivisionError:
            raise CatalogInconsistent(f"{algebra.name}: z-basis is not linearly independent")
        self._zdisc = None

    def flatten(self, a):
        """All rational coordinates of an algebra element, in z-basis order."""
        out = []
        for e in a.coords:
            for x in e:
                out.extend(x.coords)
        return out

    def coordinates(self, a):
        """Exact coordinates of a over the z-basis."""
        flat = self.flatten(a)
        return [sum(self._flat_inv[i][j] * flat[j] for j in range(self.rank))
                for i in range(self.rank)]

    def contains(self, a):
        return all(c.denominator == 1 for c in self.coordinates(a))

    def element_from_z(self, zcoords):
        alg = self.algebra
        acc = alg.element([alg.e_zero() for _ in range(alg.n)])
        for z, b in zip(zcoords, self.z_basis):
            if z:
                acc = acc + b * Fraction(z)
        return acc

    def z_discriminant(self):
        """Exact determinant of the reduced-trace form summed over all 2k
        embeddings of the center, i.e. det Tr_{K/Q}(Trd(b_i b_j))."""
        if self._zdisc is None:
            alg, K = self.algebra, self.algebra.center
            r = self.rank
            trd = {}
            gram = [[Fraction(0)] * r for _ in range(r)]
            for i in range(r):
                for j in range(i, r):
                    val = K.trace(alg.reduced_trace(alg.mul(self.z_basis[i],
                                                            self.z_basis[j])))
                    gram[i][j] = gram[j][i] = val
            d = bareiss_det(gram)
            if d.denominator != 1:
                raise PrecisionFailure(
                    f"{alg.name}: order discriminant {d} is not an integer")
            self._zdisc = int(d)
        return self._zdisc


def order_lattice(order):
    """Multiblock embedding of the natural order as a 2kn^2-dimensional
    matrix lattice (raises DegenerateLattice through the constructor if the
    Gram matrix is numerically rank deficient)."""
    from .lattice import MatrixLattice
    alg = order.algebra
    blocks = np.array([alg.multiblock_embed(b) for b in order.z_basis])
    return MatrixLattice(blocks)


def trivial_algebra(field):
    """Degree-1 algebra: the center itself, phi(a) the 1x1 matrix (a)."""
    one = field.one()
    return CyclicAlgebra(
        name=f"trivial_{field.name}",
        center=field,
        n=1,
        rel_poly=[-one, one],
        sigma_eta=(one,),
        gamma=one,
        rel_basis=[(one,)],
        division_asserted=True,
    )


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign
