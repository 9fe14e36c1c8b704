"""Exact linear algebra over Q and Q(theta) for integer matrices.

Provides characteristic polynomials, primary (block) decomposition over
the rationals, Perron eigendata in the number field generated by the
dominant eigenvalue, and the decision procedure `large_component`, which
tests whether a row functional lies in the span of the generalized left
eigenspaces with eigenvalue of magnitude strictly below one.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from math import gcd

from .field import NumberField, NumberFieldElement, RatInterval
from .poly import IntPolynomial, factor_int_poly, isolate_real_roots, refine_root_interval
from .roots import RootClass, classify_roots
from .scalars import is_zero, sgn


# ---------------------------------------------------------------------------
# generic dense matrix helpers (tuples of row tuples)

def identity(n, one=1, zero=0):
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def transpose(a):
    return tuple(zip(*a))


def mat_mul(a, b):
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_add(a, b):
    return tuple(tuple(x + y for x, y in zip(r1, r2)) for r1, r2 in zip(a, b))


def mat_scale(a, c):
    return tuple(tuple(c * x for x in row) for row in a)


def mat_vec(a, v):
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def row_mat(r, a):
    return tuple(sum(x * y for x, y in zip(r, col)) for col in transpose(a))


def dot(u, v):
    return sum(x * y for x, y in zip(u, v))


def mat_pow(a, k):
    n = len(a)
    result = identity(n)
    base = a
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return result


def mat_int_pow(a, k):
    """a^k for integer k; negative powers require an invertible matrix."""
    if k >= 0:
        return mat_pow(a, k)
    inv = mat_inverse_fraction(a)
    if inv is None:
        raise ZeroDivisionError("matrix is singular, negative power undefined")
    return mat_pow(inv, -k)


def rref(rows):
    """Reduced row echelon form in place semantics; returns (rows, pivots).

    Entries must support exact /, *, - and an exact zero test.
    """
    rows = [list(r) for r in rows]
    m = len(rows)
    n = len(rows[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n):
        pivot = None
        for i in range(r, m):
            if not is_zero(rows[i][c]):
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(m):
            if i != r and not is_zero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return rows, pivots


def nullspace(a, one=Fraction(1), zero=Fraction(0)):
    """Basis of the right kernel, as a list of column tuples."""
    m = len(a)
    n = len(a[0])
    rows, pivots = rref(a)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        vec = [zero] * n
        vec[fc] = one
        for ri, pc in enumerate(pivots):
            vec[pc] = -rows[ri][fc]
        basis.append(tuple(vec))
    return basis


def rank(a):
    _, pivots = rref(a)
    return len(pivots)


def mat_inverse_fraction(a):
    """Exact inverse of a rational matrix, or None if singular."""
    n = len(a)
    aug = [list(Fraction(x) for x in row) + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(a)]
    rows, pivots = rref(aug)
    if pivots != list(range(n)):
        return None
    return tuple(tuple(row[n:]) for row in rows)


def solve_right(a, b):
    """One solution x of a x = b over an exact field, or None."""
    n = len(a[0])
    aug = [list(row) + [bv] for row, bv in zip(a, b)]
    rows, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for ri, pc in enumerate(pivots):
        x[pc] = rows[ri][n]
    return tuple(x)


def char_poly(m):
    """Characteristic polynomial of an integer matrix (Faddeev-LeVerrier).

    Monic with integer coefficients, returned ascending.
    """
    n = len(m)
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    a = m
    c = -sum(a[i][i] for i in range(n))
    coeffs[n - 1] = c
    b = mat_add(a, mat_scale(identity(n), c))
    for k in range(2, n + 1):
        a = mat_mul(m, b)
        tr = sum(a[i][i] for i in range(n))
        c, rem = divmod(-tr, k)
        if rem:
            raise AssertionError("Faddeev-LeVerrier trace division not exact")
        coeffs[n - k] = c
        b = mat_add(a, mat_scale(identity(n), c))
    return IntPolynomial.from_coeffs(coeffs)


def char_poly_fraction(m):
    """Characteristic polynomial of a rational matrix (Fraction coefficients)."""
    n = len(m)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    a = m
    c = -sum(a[i][i] for i in range(n))
    coeffs[n - 1] = c
    b = mat_add(a, mat_scale(identity(n, Fraction(1), Fraction(0)), c))
    for k in range(2, n + 1):
        a = mat_mul(m, b)
        c = -sum(a[i][i] for i in range(n)) / k
        coeffs[n - k] = c
        b = mat_add(a, mat_scale(identity(n, Fraction(1), Fraction(0)), c))
    return tuple(coeffs)


# ---------------------------------------------------------------------------
# primary decomposition


@dataclass(frozen=True)
class Block:
    """Rational invariant subspace for one irreducible factor."""

    factor: IntPolynomial
    multiplicity: int
    basis: tuple            # column tuples (Fractions), right generalized kernel
    root_class: RootClass
    start: int
    size: int


@dataclass(frozen=True)
class BlockDecomposition:
    matrix: tuple
    blocks: tuple
    change_of_basis: tuple   # columns are the concatenated block bases
    block_matrix: tuple      # C^-1 M C, exactly block diagonal
    perron_index: int
    b_pf: int
    s_pf: int

    @property
    def perron_block(self):
        return self.blocks[self.perron_index]

    def all_root_classes(self):
        return [b.root_class for b in self.blocks]


def _poly_of_matrix(p, m):
    n = len(m)
    acc = mat_scale(identity(n), 0)
    for c in reversed(p.coeffs):
        acc = mat_mul(acc, m)
        acc = mat_add(acc, mat_scale(identity(n), c))
    return acc


def _largest_real_root_interval(f):
    """Isolating interval of the largest real root of f, or None."""
    roots = isolate_real_roots(f)
    return roots[-1] if roots else None


def _perron_factor(factors):
    """The factor carrying the globally largest real root."""
    candidates = []
    for f, mult in factors:
        iv = _largest_real_root_interval(f)
        if iv is not None:
            candidates.append([f, mult, iv[0], iv[1]])
    if not candidates:
        raise ArithmeticError("no real eigenvalue; matrix cannot be primitive")
    while len(candidates) > 1:
        candidates.sort(key=lambda c: c[3], reverse=True)
        a, b = candidates[0], candidates[1]
        if a[2] > b[3]:
            del candidates[1:]
            break
        # overlapping intervals: refine both and retry
        for c in (a, b):
            c[2], c[3] = refine_root_interval(c[0], c[2], c[3], (c[3] - c[2]) / 2)
    f, mult, lo, hi = candidates[0]
    return f, mult, (lo, hi)


def block_decomposition(m):
    """Primary decomposition of an integer matrix over the rationals."""
    n = len(m)
    p = char_poly(m)
    factors = list(factor_int_poly(p))
    blocks = []
    columns = []
    perron_factor, perron_mult, perron_iv = _perron_factor(factors)
    perron_index = -1
    start = 0
    for f, mult in factors:
        fm = _poly_of_matrix(f, m)
        km = mat_pow(fm, mult)
        basis = nullspace([[Fraction(x) for x in row] for row in km])
        if len(basis) != f.degree * mult:
            raise AssertionError("generalized kernel has unexpected dimension")
        rc = classify_roots(f)
        if f == perron_factor:
            rc = replace(rc, conjugate_to_perron=True)
            perron_index = len(blocks)
        blocks.append(Block(factor=f, multiplicity=mult, basis=tuple(basis),
                            root_class=rc, start=start, size=len(basis)))
        columns.extend(basis)
        start += len(basis)
    c = transpose(columns)  # column tuples become matrix columns
    cinv = mat_inverse_fraction(c)
    if cinv is None:
        raise AssertionError("block basis is not invertible")
    bmat = mat_mul(cinv, mat_mul(tuple(tuple(Fraction(x) for x in row) for row in m), c))
    _verify_block_structure(bmat, blocks)
    if perron_index < 0:
        raise AssertionError("Perron factor not among the blocks")
    # b_pf / s_pf are meaningful for primitive matrices (simple dominant root),
    # but the decomposition itself works for any integer matrix
    prc = blocks[perron_index].root_class
    return BlockDecomposition(
        matrix=m,
        blocks=tuple(blocks),
        change_of_basis=c,
        block_matrix=bmat,
        perron_index=perron_index,
        b_pf=prc.large + prc.unit,
        s_pf=prc.small,
    )


def _verify_block_structure(bmat, blocks):
    n = len(bmat)
    spans = []
    for blk in blocks:
        spans.append((blk.start, blk.start + blk.size))
    for i in range(n):
        for j in range(n):
            same = any(s <= i < e and s <= j < e for s, e in spans)
            if not same and bmat[i][j] != 0:
                raise AssertionError("conjugated matrix is not block diagonal")
    for blk in blocks:
        sub = tuple(tuple(bmat[i][j] for j in range(blk.start, blk.start + blk.size))
                    for i in range(blk.start, blk.start + blk.size))
        want = (blk.factor ** blk.multiplicity).fraction_coeffs()
        got = char_poly_fraction(sub)
        if tuple(got) != tuple(want):
            raise AssertionError("block characteristic polynomial mismatch")


# ---------------------------------------------------------------------------
# Perron data


@dataclass(frozen=True)
class PerronData:
    """Exact dominant eigendata of a primitive integer matrix."""

    matrix: tuple
    factor: IntPolynomial
    field: object            # NumberField, or None when the eigenvalue is rational
    eigenvalue: object       # NumberFieldElement or Fraction
    left: tuple              # row vector, first entry 1, all entries positive
    right: tuple             # column vector, first entry 1, all entries positive

    def left_dot(self, v):
        return dot(self.left, v)

    def right_frequencies(self):
        """Right eigenvector rescaled to sum 1 (letter frequency vector)."""
        total = sum(self.right, start=self.right[0] * 0)
        return tuple(x / total for x in self.right)


def _eigen_nullspace(m, lam, field, power=1):
    """Basis of ker (M - lam I)^power over the field of lam."""
    n = len(m)
    if field is None:
        a = [[Fraction(m[i][j]) - (lam if i == j else 0) for j in range(n)]
             for i in range(n)]
        one, zero = Fraction(1), Fraction(0)
    else:
        a = [[field.from_rational(m[i][j]) - (lam if i == j else field.from_rational(0))
              for j in range(n)] for i in range(n)]
        one, zero = field.one(), field.zero()
    acc = a
    for _ in range(power - 1):
        acc = mat_mul(acc, a)
    return nullspace(acc, one=one, zero=zero)


def perron_data(m):
    """Left and right Perron eigenvectors, exact in Q(lambda_PF)."""
    p = char_poly(m)
    factors = list(factor_int_poly(p))
    f, mult, iv = _perron_factor(factors)
    if mult != 1:
        raise ArithmeticError("dominant eigenvalue is not simple; matrix not primitive")
    if f.degree == 1:
        field = None
        lam = Fraction(-f.coeffs[0], f.coeffs[1])
    else:
        field = NumberField(f, iv)
        lam = field.gen()
    left_basis = _eigen_nullspace(transpose(m), lam, field)
    right_basis = _eigen_nullspace(m, lam, field)
    if len(left_basis) != 1 or len(right_basis) != 1:
        raise ArithmeticError("Perron eigenspace is not one dimensional")

    def normalize(vec):
        v0 = vec[0]
        if is_zero(v0):
            raise ArithmeticError("Perron eigenvector has a zero entry")
        out = tuple(x / v0 for x in vec)
        for x in out:
            if sgn(x) <= 0:
                raise ArithmeticError("Perron eigenvector is not positive")
        return out

    left = normalize(left_basis[0])
    right = normalize(right_basis[0])
    # exact residual check
    lm = row_mat(left, m)
    for got, want in zip(lm, (lam * x for x in left)):
        if not is_zero(got - want):
            raise AssertionError("left eigen equation failed")
    mr = mat_vec(m, right)
    for got, want in zip(mr, (lam * x for x in right)):
        if not is_zero(got - want):
            raise AssertionError("right eigen equation failed")
    return PerronData(matrix=m, factor=f, field=field, eigenvalue=lam,
                      left=left, right=right)


# ---------------------------------------------------------------------------
# membership in the span of small generalized eigenspaces


@dataclass(frozen=True)
class LargeComponentResult:
    status: str              # "zero", "nonzero", "undecided"
    witness: object = None
    notes: tuple = ()

    @property
    def is_zero(self):
        return self.status == "zero"


def _squarefree_part(n):
    """Squarefree part of a nonzero integer; None if the factor search gives up."""
    n = abs(n)
    out = 1
    d = 2
    while d * d <= n:
        if d > 1_000_000:
            return None
        while n % (d * d) == 0:
            n //= d * d
        if n % d == 0:
            out *= d
            n //= d
        d += 1
    return out * n


def _roots_in_field(f, field):
    """(roots of f expressible in the field, completeness flag)."""
    if field is None:
        return [], True  # irreducible of degree >= 2 has no rational roots
    if f.coeffs == field.minpoly.coeffs:
        theta = field.gen()
        if f.degree == 2:
            s = Fraction(-f.coeffs[1], f.coeffs[2])
            return [theta, field.from_rational(s) - theta], True
        return [theta], False
    if f.degree == 2 and field.degree == 2:
        a, b, c = f.coeffs[2], f.coeffs[1], f.coeffs[0]
        disc = b * b - 4 * a * c
        if disc == 0:
            raise AssertionError("irreducible quadratic with zero discriminant")
        m = field.minpoly
        mdisc = m.coeffs[1] ** 2 - 4 * m.coeffs[2] * m.coeffs[0]
        sq_f = _squarefree_part(disc) if disc > 0 else None
        sq_m = _squarefree_part(mdisc) if mdisc > 0 else None
        if disc < 0:
            return [], True  # complex roots, real field cannot contain them
        if sq_f is None or sq_m is None:
            return [], False
        if sq_f != sq_m:
            return [], True
        # sqrt(disc) = (s_f / s_m) * (2 m2 theta + m1), sign fixed below
        s_f = _int_sqrt_exact(disc // sq_f)
        s_m = _int_sqrt_exact(mdisc // sq_m)
        root_m = field.element([m.coeffs[1], 2 * m.coeffs[2]])  # = +-sqrt(mdisc)
        if root_m.sign() < 0:
            root_m = -root_m
        sqrt_disc = root_m * Fraction(s_f, s_m)
        r1 = (sqrt_disc - b) / Fraction(2 * a)
        r2 = (-sqrt_disc - b) / Fraction(2 * a)
        return [r1, r2], True
    return [], False


def _int_sqrt_exact(n):
    from math import isqrt

    r = isqrt(n)
    if r * r != n:
        raise AssertionError("expected a perfect square")
    return r


def _pairing_interval_nonzero(r_vec, w_vec, max_bits=220):
    """Certify sum(r_i * w_i) != 0 across two real fields by refinement."""
    bits = 16
    while bits <= max_bits:
        width = Fraction(1, 2**bits)
        total = RatInterval(0, 0)
        for a, b in zip(r_vec, w_vec):
            ia = a.interval(width) if isinstance(a, NumberFieldElement) else RatInterval(a, a)
            ib = b.interval(width) if isinstance(b, NumberFieldElement) else RatInterval(b, b)
            total = total + ia * ib
        if not total.contains_zero():
            return True
        bits *= 2
    return False


def _is_large_tag(tag):
    return tag in ("large", "unit")


def large_component(r, m, decomposition=None):
    """Decide whether the row vector r lies in the span of the generalized
    left eigenspaces of M with eigenvalue magnitude strictly less than 1.

    Exact verdicts come from rational block pairings, from pairings in the
    field of the entries of r, and from a linear-disjointness argument for
    blocks whose degree is coprime to the field degree. Real eigenvalues
    outside the field get certified interval tests for nonzero pairings; a
    pairing that cannot be resolved yields "undecided".
    """
    if all(is_zero(x) for x in r):
        return LargeComponentResult("zero")
    dec = decomposition if decomposition is not None else block_decomposition(m)
    field = None
    for x in r:
        if isinstance(x, NumberFieldElement):
            field = x.field
            break
    t = field.degree if field is not None else 1
    notes = []
    undecided = False
    for blk in dec.blocks:
        rc = blk.root_class
        if rc.all_small():
            continue
        pairings = [dot(r, col) for col in blk.basis]
        if all(is_zero(p) for p in pairings):
            continue
        if rc.small == 0:
            # every root of this factor has magnitude >= 1
            return LargeComponentResult(
                "nonzero",
                witness={"factor": str(blk.factor), "reason": "all-large block pairing"},
                notes=tuple(notes))
        # mixed block
        if gcd(blk.factor.degree, t) == 1:
            # coprime degrees: a field-rational functional meets the small
            # part of this block only at zero
            return LargeComponentResult(
                "nonzero",
                witness={"factor": str(blk.factor),
                         "reason": "mixed block, coprime-degree disjointness"},
                notes=tuple(notes))
        known, complete = _roots_in_field(blk.factor, field)
        handled_large = 0
        large_total = rc.large + rc.unit
        for lam in known:
            if _field_root_is_small(lam):
                continue
            handled_large += 1
            basis = _eigen_nullspace(m, lam, field, power=blk.multiplicity)
            if not basis:
                raise AssertionError("empty generalized eigenspace")
            for w in basis:
                val = dot(_lift_to_field(r, field), w)
                if not is_zero(val):
                    return LargeComponentResult(
                        "nonzero",
                        witness={"factor": str(blk.factor),
                                 "reason": "nonzero pairing with in-field eigenvector"},
                        notes=tuple(notes))
        if handled_large == large_total:
            continue  # all large directions of this block pair to zero
        remaining = _real_large_roots_outside_field(blk, known, field, m, r)
        if remaining == "nonzero":
            return LargeComponentResult(
                "nonzero",
                witness={"factor": str(blk.factor),
                         "reason": "certified interval pairing with a real eigenvector"},
                notes=tuple(notes))
        if remaining == "undecided":
            undecided = True
            notes.append(f"factor {blk.factor}: large directions not fully resolved")
    if undecided:
        return LargeComponentResult("undecided", notes=tuple(notes))
    return LargeComponentResult("zero", notes=tuple(notes))


def _lift_to_field(r, field):
    if field is None:
        return r
    return tuple(x if isinstance(x, NumberFieldElement) else field.from_rational(x)
                 for x in r)


def _field_root_is_small(lam):
    """Magnitude test for an in-field real root: |lam| < 1 exactly."""
    return lam > -1 and lam < 1


def _real_large_roots_outside_field(blk, known, field, m, r):
    """Interval-certify pairings with real large roots not in the field.

    Returns "nonzero", "zero-like" (nothing detected) or "undecided".
    """
    f = blk.factor
    rc = blk.root_class
    complex_large_pairs = (rc.large + rc.unit
                           - sum(1 for t, _ in rc.real_roots if _is_large_tag(t)))
    saw_unresolved = complex_large_pairs > 0
    for tag, (lo, hi) in rc.real_roots:
        if not _is_large_tag(tag):
            continue
        # a known in-field root sitting inside this bracket was handled already;
        # the comparisons are exact sign tests in the field
        if any(isinstance(lam, NumberFieldElement) and lam > lo and lam < hi
               for lam in known):
            continue
        if any(not isinstance(lam, NumberFieldElement) and lo < lam < hi
               for lam in known):
            continue
        lam_field = NumberField(f, (lo, hi))
        basis = _eigen_nullspace(m, lam_field.gen(), lam_field, power=blk.multiplicity)
        pair_nonzero = False
        for w in basis:
            if _pairing_interval_nonzero(r, w):
                pair_nonzero = True
                break
        if pair_nonzero:
            return "nonzero"
        saw_unresolved = True  # could not certify zero, only failed to refute
    if saw_unresolved:
        return "undecided"
    return "zero-like"
