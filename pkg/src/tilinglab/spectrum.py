"""Point spectrum classification for substitution tiling flows.

The central criterion: k belongs to the point spectrum iff for every
recurrence vector v the numbers (k/2pi) * L M^m v converge to 0 mod 1.
Candidate verification runs this test exactly over Q or Q(theta) with a
bounded m and a documented refutation threshold; the classifiers combine
the eigenvalue magnitude census of M with exact rationality tests on
tile length ratios, and the two-letter constant length case gets its
closed-form sandwich. Reports always carry the never-mixing note, since
no primitive aperiodic substitution tiling flow is strongly mixing.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd

import numpy as np

from .errors import BudgetExceeded, PreconditionError
from .exact.field import NumberField, NumberFieldElement
from .exact.linalg import (
    block_decomposition,
    mat_int_pow,
    mat_mul,
    mat_vec,
    perron_data,
    row_mat,
)
from .exact.scalars import (
    as_fraction,
    dist_to_integers,
    is_integer,
    is_rational,
    is_zero,
    sgn,
    to_float,
)
from .words import (
    aperiodicity_check,
    fixed_point,
    is_full,
    is_primitive,
    recurrence_vector_set,
)

NEVER_MIXING_NOTE = (
    "The translation flow of a primitive aperiodic substitution tiling space "
    "is never strongly mixing, for any choice of tile lengths; the overlap "
    "estimator illustrates the positive liminf of cylinder self-overlaps and "
    "is not itself a proof.")

REFUTE_THRESHOLD = Fraction(1, 10)
REFUTE_WINDOW = 6
REFUTE_NEED = 3


@dataclass(frozen=True)
class LengthVector:
    """Row vector of certified-positive exact tile lengths."""

    entries: tuple
    field: object = None          # NumberField or None for rational entries
    provenance: tuple = ()

    def __post_init__(self):
        if not self.entries:
            raise ValueError("empty length vector")
        for x in self.entries:
            if isinstance(x, NumberFieldElement):
                if self.field is None or x.field._key != self.field._key:
                    raise ValueError("length entry outside the declared field")
            if sgn(x) <= 0:
                raise ValueError("tile lengths must be certified positive")
        if not self.provenance:
            object.__setattr__(self, "provenance", tuple("input" for _ in self.entries))

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def scalar(self, q):
        """Lift a rational into the vector's scalar domain."""
        if self.field is None:
            return Fraction(q)
        return self.field.from_rational(q)

    def all_rational(self):
        return all(is_rational(x) for x in self.entries)


@dataclass(frozen=True)
class CylinderSet:
    """[w] x I with I inside the first tile of w."""

    word: str
    lo: object
    hi: object

    def length(self):
        return self.hi - self.lo


@dataclass(frozen=True)
class CandidateResult:
    k_over_2pi: object
    display: str
    verdict: str               # consistent | refuted | degenerate | inconclusive
    rho_fit: float = None
    exact_integral_tail: bool = False
    witness: dict = None
    traces: tuple = ()

    def as_dict(self):
        out = {
            "k_over_2pi": None if self.k_over_2pi is None else str(self.k_over_2pi),
            "display": self.display,
            "verdict": self.verdict,
            "rho_fit": self.rho_fit,
            "exact_integral_tail": self.exact_integral_tail,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        out["traces"] = [
            {"vector": list(v), "dist_mod_1": d} for v, d in self.traces]
        return out


@dataclass(frozen=True)
class SpectrumReport:
    case: str
    detail: dict
    applied_criteria: tuple
    hypotheses: dict
    candidates: tuple = ()
    notes: tuple = ()
    never_mixing: str = NEVER_MIXING_NOTE

    def as_dict(self):
        return {
            "case": self.case,
            "detail": self.detail,
            "applied_criteria": list(self.applied_criteria),
            "hypotheses": self.hypotheses,
            "candidates": [c.as_dict() for c in self.candidates],
            "notes": list(self.notes),
            "never_mixing": self.never_mixing,
        }


def default_recurrence_vectors(sigma, prefix_len=100_000, max_word_len=40, cap=64):
    """Deduplicated recurrence vectors plus their first n iterates under M."""
    found = recurrence_vector_set(sigma, prefix_len, max_word_len)
    m = sigma.matrix()
    vectors = set(found.keys())
    for v in list(vectors):
        cur = v
        for _ in range(sigma.n):
            cur = tuple(int(x) for x in mat_vec(m, cur))
            vectors.add(cur)
    ordered = sorted(vectors, key=lambda v: (sum(v), v))
    return ordered[:cap]


def _length_rows(L, m, m_max):
    rows = [tuple(L.entries)]
    for _ in range(m_max):
        rows.append(row_mat(rows[-1], m))
    return rows


def verify_eigenvalue_candidate(k_over_2pi, L, sigma, m_max=40, vectors=None,
                                display=None, threshold=REFUTE_THRESHOLD,
                                window=REFUTE_WINDOW, need=REFUTE_NEED,
                                trace_cap=8):
    """Exact mod-1 test of a point spectrum candidate.

    k_over_2pi is the candidate divided by 2pi, as an exact scalar (floats
    are converted to the exact dyadic rational they denote). Refutation:
    at least `need` of the last `window` values of dist(t_m, Z) exceed the
    threshold for some recurrence vector. Consistency: on every vector the
    tail distances either vanish exactly or decay with a fitted geometric
    ratio below one (each consecutive ratio within a factor two of the fit).
    """
    if m_max < window + 2 or m_max > 64:
        raise ValueError("m_max must lie between the window size and 64")
    if isinstance(k_over_2pi, float):
        k_over_2pi = Fraction(k_over_2pi)
    if isinstance(k_over_2pi, int):
        k_over_2pi = Fraction(k_over_2pi)
    disp = display if display is not None else f"2*pi*({k_over_2pi})"
    if is_zero(k_over_2pi):
        return CandidateResult(k_over_2pi, disp, "degenerate",
                               rho_fit=0.0, exact_integral_tail=True)
    if vectors is None:
        vectors = default_recurrence_vectors(sigma)
    if not vectors:
        raise PreconditionError("no recurrence vectors supplied")
    m = sigma.matrix()
    rows = _length_rows(L, m, m_max)

    def dist_at(v, mm):
        t = k_over_2pi * sum(r * x for r, x in zip(rows[mm], v))
        return dist_to_integers(t)

    def full_trace(v):
        return [to_float(dist_at(v, mm)) for mm in range(m_max + 1)]

    worst_rho = 0.0
    all_fit = True
    exact_tail = True
    for v in vectors:
        window_dists = [dist_at(v, mm) for mm in range(m_max - window + 1, m_max + 1)]
        bad = sum(1 for d in window_dists if d > threshold)
        if bad >= need:
            witness = {
                "vector": list(v),
                "tail_dists": [to_float(d) for d in window_dists],
                "bad_points": bad,
            }
            return CandidateResult(k_over_2pi, disp, "refuted", witness=witness,
                                   traces=((v, full_trace(v)),))
        head = [dist_at(v, mm) for mm in range(m_max - 9, m_max - window + 1)]
        fit_tail = head + window_dists
        if all(is_zero(d) for d in fit_tail):
            continue
        exact_tail = False
        vals = [to_float(d) for d in fit_tail]
        if any(val == 0.0 for val in vals):
            all_fit = False
            continue
        rho = (vals[-1] / vals[0]) ** (1.0 / (len(vals) - 1))
        ratios = [b / a for a, b in zip(vals, vals[1:])]
        if rho >= 1.0 or any(r > 2 * rho or r < rho / 2 for r in ratios):
            all_fit = False
        worst_rho = max(worst_rho, rho)
    traces = tuple((v, full_trace(v)) for v in vectors[:trace_cap])
    if all_fit:
        return CandidateResult(k_over_2pi, disp, "consistent",
                               rho_fit=worst_rho,
                               exact_integral_tail=exact_tail,
                               traces=traces)
    return CandidateResult(k_over_2pi, disp, "inconclusive", traces=traces)


# ---------------------------------------------------------------------------
# constant length two-letter closed form


def constant_length_parameters(sigma):
    """(n, n_a, n_b) when the two-letter constant-length analysis applies."""
    if sigma.n != 2:
        return None
    a = sigma.alphabet[0]
    img_a, img_b = sigma.images
    if len(img_a) != len(img_b):
        return None
    n = len(img_a)
    n_a = img_a.count(a)
    n_b = img_b.count(a)
    if not (1 <= n_a <= n - 1 and 1 <= n_b <= n - 1):
        return None
    if n_a == n_b:
        return None
    return n, n_a, n_b


def _sandwich_case2_constants(n, n_a, n_b, ratio):
    """Integers (N1, N2) with N1 Z[1/z] in N2 L1 spec / 2pi in Z[1/z]."""
    p, q = ratio.numerator, ratio.denominator
    big_n = n + n_b - n_a
    b2 = n_b * p + (n - n_a) * q
    n2 = abs(p - q) * (n - n_a) * b2
    g = gcd(gcd(b2, abs(p - q) * (n - n_a)), abs(p - q) * n_b)
    n1 = n2 * p * big_n // g
    return n1, n2, g


def constant_length_spectrum(sigma, L, candidates=None, m_max=40,
                             vectors=None, hypotheses=None):
    """Closed-form spectrum sandwich for two-letter constant-length rules.

    Case 1 (equal lengths): N Z[1/n] in N L1 spec/2pi in Z[1/n] with
    N = n + n_b - n_a. Case 2 (rational ratio != 1): an integer sandwich
    in Z[1/z] with z = gcd(n, n_a - n_b). Case 3 (irrational ratio): the
    spectrum is trivial.
    """
    params = constant_length_parameters(sigma)
    if params is None:
        raise PreconditionError(
            "constant-length analysis needs two letters, equal image lengths "
            "and distinct letter counts; use classify_spectrum instead")
    n, n_a, n_b = params
    z = gcd(n, abs(n_a - n_b))
    big_n = n + n_b - n_a
    l1, l2 = L[0], L[1]
    detail = {"n": n, "n_a": n_a, "n_b": n_b, "z": z, "N": big_n}
    eq1 = (f"k*(L1 - L2)*({n_a - n_b})^m = 2*pi/({n - n_a}) * ({n}*t_m - t_(m+1))")
    eq2 = (f"k*({n_b}*L1 + {n - n_a}*L2)*{n}^m = 2*pi*(({n_b - n_a})*t_m + t_(m+1))")
    detail["constraint_equations"] = [eq1, eq2]
    hyp = dict(hypotheses or {})
    hyp["constant_length"] = {"n": n, "n_a": n_a, "n_b": n_b}
    applied = ("two-letter constant-length classification",)
    if is_zero(l1 - l2):
        detail["case"] = 1
        detail["sandwich"] = (f"{big_n}*Z[1/{n}] <= {big_n}*L1*spec/(2*pi) <= Z[1/{n}]")
        case = "rational_sandwich"
    elif is_rational(l1 / l2):
        ratio = as_fraction(l1 / l2)
        n1, n2, g = _sandwich_case2_constants(n, n_a, n_b, ratio)
        detail["case"] = 2
        detail["ratio"] = str(ratio)
        detail["N1"] = n1
        detail["N2"] = n2
        detail["sandwich"] = (f"{n1}*Z[1/{z}] <= {n2}*L1*spec/(2*pi) <= Z[1/{z}]")
        if z == 1:
            detail["z_one_note"] = (
                "z = 1 collapses the sandwich to a discrete 2*pi-rational scale "
                "group: the spectrum lies in (2*pi/(N2*L1))*Z and contains "
                "(2*pi*N1/(N2*L1))*Z")
        case = "rational_sandwich"
    else:
        detail["case"] = 3
        detail["ratio"] = "irrational"
        case = "trivial"
        applied = applied + ("irrational-ratio weak mixing conclusion",)
    cands = _run_candidates(sigma, L, candidates, m_max, vectors)
    return SpectrumReport(case=case, detail=detail, applied_criteria=applied,
                          hypotheses=hyp, candidates=cands)


def default_candidates(L):
    """Sample spectrum candidates: small 2*pi-rationals and 1/L1 multiples."""
    out = []
    seen = set()
    for q in (Fraction(1), Fraction(1, 2), Fraction(1, 3)):
        out.append((q if L.field is None else L.scalar(q), f"2*pi*({q})"))
        seen.add(str(q))
    inv_l1 = 1 / L[0]
    for q in (Fraction(1), Fraction(1, 2)):
        k = inv_l1 * q
        if str(k) not in seen:
            out.append((k, f"2*pi*({q})/L1"))
            seen.add(str(k))
    return out


def _run_candidates(sigma, L, candidates, m_max, vectors):
    if candidates is None:
        candidates = default_candidates(L)
    if vectors is None:
        vectors = default_recurrence_vectors(sigma)
    out = []
    for item in candidates:
        if isinstance(item, tuple):
            k, disp = item
        else:
            k, disp = item, None
        out.append(verify_eigenvalue_candidate(
            k, L, sigma, m_max=m_max, vectors=vectors, display=disp))
    return tuple(out)


# ---------------------------------------------------------------------------
# general classification


def _spectrum_hypotheses(sigma, L, decomposition, prim, aper):
    root_summary = []
    for blk in decomposition.blocks:
        rc = blk.root_class
        root_summary.append({
            "factor": str(blk.factor),
            "multiplicity": blk.multiplicity,
            "small": rc.small,
            "unit": rc.unit,
            "large": rc.large,
            "conjugate_to_perron": rc.conjugate_to_perron,
        })
    return {
        "matrix": [list(r) for r in sigma.matrix()],
        "primitive_power": prim.power,
        "aperiodicity": aper.status,
        "lengths": [str(x) for x in L.entries],
        "length_field": None if L.field is None else str(L.field.minpoly),
        "eigenvalue_census": root_summary,
        "unit_modulus_present": any(b.root_class.unit for b in decomposition.blocks),
    }


def _find_full_vector(sigma, vectors):
    m = sigma.matrix()
    for v in vectors:
        if any(v) and is_full(v, m):
            return v
    return None


def classify_spectrum(sigma, L, candidates=None, m_max=40,
                      prefix_len=100_000, max_word_len=40,
                      require_aperiodic=True):
    """Decision tree over the eigenvalue census and recurrence structure.

    Constant-length two-letter rules get the sandwich classification.
    Otherwise: with a full recurrence vector and no small eigenvalues the
    spectrum is trivial or contained in 2*pi*Q/L1 depending on exact
    rationality of the length ratios; with small eigenvalues present the
    spectrum satisfies the rational-plus-small-eigenspace constraint; with
    no full vector found only the Perron block bounds are reported.
    """
    prim = is_primitive(sigma)
    if not prim:
        raise PreconditionError("spectrum classification requires a primitive substitution")
    aper = aperiodicity_check(sigma)
    if require_aperiodic and aper.status != "aperiodic_evidence":
        raise PreconditionError(
            f"aperiodicity gate failed with status {aper.status!r}; "
            "pass an explicit override to proceed")
    m = sigma.matrix()
    dec = block_decomposition(m)
    hyp = _spectrum_hypotheses(sigma, L, dec, prim, aper)
    notes = []
    if hyp["unit_modulus_present"]:
        notes.append("unit-modulus eigenvalues present; they are grouped with "
                     "the large eigenvalues throughout")
    vectors = default_recurrence_vectors(sigma, prefix_len, max_word_len)

    params = constant_length_parameters(sigma)
    if params is not None:
        report = constant_length_spectrum(sigma, L, candidates=candidates,
                                          m_max=m_max, vectors=vectors,
                                          hypotheses=hyp)
        extra = list(report.notes) + notes
        detail = dict(report.detail)
        full_v = _find_full_vector(sigma, vectors)
        all_large = all(b.root_class.small == 0 for b in dec.blocks)
        if full_v is not None and all_large and _all_ratios_rational(L):
            detail["also_contained_in_2piQ_over_L1"] = True
            extra.append("the all-large-eigenvalue containment in 2*pi*Q/L1 "
                         "also applies to this system")
        return SpectrumReport(case=report.case, detail=detail,
                              applied_criteria=report.applied_criteria,
                              hypotheses=report.hypotheses,
                              candidates=report.candidates,
                              notes=tuple(extra))

    full_v = _find_full_vector(sigma, vectors)
    all_large = all(b.root_class.small == 0 for b in dec.blocks)
    d_b = sum((b.root_class.large + b.root_class.unit) * 1
              for b in dec.blocks for _ in range(b.multiplicity))
    detail = {
        "b_pf": dec.b_pf,
        "s_pf": dec.s_pf,
        "d_b": d_b,
        "dimension_bound": dec.s_pf + 1,
        "codimension_note": f"length vectors with nontrivial spectrum lie in a "
                            f"countable union of subspaces of codimension >= {dec.b_pf - 1}",
    }
    cands = (_run_candidates(sigma, L, candidates, m_max, vectors)
             if candidates is not None else ())

    if full_v is not None:
        detail["full_recurrence_vector"] = list(full_v)
        if all_large:
            irr = _first_irrational_ratio(L)
            if irr is not None:
                i, j = irr
                detail["irrational_ratio"] = f"L{i + 1}/L{j + 1}"
                if candidates is None:
                    cands = _run_candidates(sigma, L, None, m_max, vectors)
                return SpectrumReport(
                    case="trivial", detail=detail,
                    applied_criteria=("all-eigenvalues-large classification",),
                    hypotheses=hyp, candidates=cands, notes=tuple(notes))
            detail["containment"] = "spectrum <= 2*pi*Q/L1"
            detail["L1"] = str(L[0])
            return SpectrumReport(
                case="contained_in_2piQ_over_L1", detail=detail,
                applied_criteria=("all-eigenvalues-large classification",),
                hypotheses=hyp, candidates=cands, notes=tuple(notes))
        # small eigenvalues present
        detail["constraint"] = ("k*L/(2*pi) lies in Q^n + S, with S the span of "
                                "the generalized left eigenspaces of magnitude "
                                "below one")
        detail["small_space"] = _small_space_description(dec)
        detail["tuning_note"] = (
            f"nontrivial spectrum requires tuning {max(d_b - 1, 0)} parameters "
            "of the length vector to a countable set of values")
        return SpectrumReport(
            case="constrained", detail=detail,
            applied_criteria=("small-eigenspace constraint", "perron-block bound"),
            hypotheses=hyp, candidates=cands, notes=tuple(notes))

    detail["full_recurrence_vector"] = None
    notes.append(f"no full recurrence vector found within the search budget "
                 f"(prefix {prefix_len}, word length {max_word_len})")
    return SpectrumReport(
        case="dimension_bound", detail=detail,
        applied_criteria=("perron-block bound",),
        hypotheses=hyp, candidates=cands, notes=tuple(notes))


def _all_ratios_rational(L):
    return _first_irrational_ratio(L) is None


def _first_irrational_ratio(L):
    n = len(L.entries)
    for i in range(n):
        for j in range(i + 1, n):
            if not is_rational(L[i] / L[j]):
                return i, j
    return None


def _small_space_description(dec):
    out = []
    for blk in dec.blocks:
        rc = blk.root_class
        if rc.all_small():
            out.append({"factor": str(blk.factor), "kind": "all-small block",
                        "dimension": blk.size})
        elif rc.small:
            out.append({"factor": str(blk.factor), "kind": "mixed block",
                        "small_roots": rc.small})
    return out


# ---------------------------------------------------------------------------
# supertile eigenfunctions (constant length)


@dataclass(frozen=True)
class EigenfunctionValue:
    phase: Fraction            # in [0, 1): value is exp(2*pi*i*phase)
    value: complex
    endpoint_coordinate: object
    modulus: object

    def close_to(self, other, tol=1e-12):
        return abs(self.value - other.value) < tol


def supertile_eigenfunction(sigma, L, j, m, x, segment_tiles=None):
    """Evaluate the order-m supertile eigenfunction at a tiling point.

    x = (tile_index, offset) inside the fixed point tiling. Case 1 uses
    modulus n^m L1; rational-ratio case 2 uses c z^m with c the certified
    common divisor of the order-m supertile lengths. The value only uses
    the coordinate of the enclosing order-m supertile's left endpoint, and
    the evaluation double-checks endpoint independence.
    """
    params = constant_length_parameters(sigma)
    if params is None:
        raise PreconditionError("supertile eigenfunctions need the two-letter "
                                "constant-length setting")
    n, n_a, n_b = params
    tile_index, offset = x
    if tile_index < 0:
        raise ValueError("tile index must be nonnegative")
    l1, l2 = L[0], L[1]
    if is_zero(l1 - l2):
        modulus = l1 * (n ** m)
    elif is_rational(l1 / l2):
        ratio = as_fraction(l1 / l2)
        z = gcd(n, abs(n_a - n_b))
        big_n = n + n_b - n_a
        p, q = ratio.numerator, ratio.denominator
        b2 = n_b * p + (n - n_a) * q
        g = gcd(gcd(b2, abs(p - q) * (n - n_a)), abs(p - q) * n_b)
        c = l1 * Fraction(g, p * big_n)
        modulus = c * (z ** m)
    else:
        raise PreconditionError("eigenfunctions exist only for rational length ratios")
    block = n ** m
    need = max(tile_index + 1, block * (tile_index // block + 2))
    if segment_tiles is not None and need > segment_tiles:
        raise BudgetExceeded(f"order-{m} evaluation needs {need} tiles, "
                             f"segment has {segment_tiles}")
    prefix = fixed_point(sigma).prefix(need)
    coords = _coordinates(prefix, sigma, L)
    start = (tile_index // block) * block
    p_coord = coords[start]
    phase = _reduced_phase(j, p_coord, modulus)
    # endpoint independence: the next order-m boundary gives the same value
    alt = _reduced_phase(j, coords[start + block], modulus)
    if phase != alt:
        raise AssertionError("supertile endpoints disagree; eigenfunction ill defined")
    import cmath

    val = cmath.exp(2j * cmath.pi * float(phase))
    return EigenfunctionValue(phase=phase, value=val,
                              endpoint_coordinate=p_coord, modulus=modulus)


def _coordinates(prefix, sigma, L):
    lengths = {a: L[i] for i, a in enumerate(sigma.alphabet)}
    coords = [L.scalar(0)]
    for ch in prefix:
        coords.append(coords[-1] + lengths[ch])
    return coords


def _reduced_phase(j, coordinate, modulus):
    ratio = (coordinate * j) / modulus
    if not is_rational(ratio):
        raise PreconditionError("eigenfunction phase is not rational; "
                                "check the case preconditions")
    r = as_fraction(ratio)
    return r - (r.numerator // r.denominator)


# ---------------------------------------------------------------------------
# frequencies, cylinder measures, overlap diagnostics


def letter_frequencies(sigma, validate_prefix=1_000_000, tolerance=1e-3):
    """Right Perron eigenvector normalized to sum one, exact in Q(lambda).

    Cross-validated against empirical frequencies in a long prefix.
    """
    pd = perron_data(sigma.matrix())
    freqs = pd.right_frequencies()
    if validate_prefix:
        prefix = fixed_point(sigma).prefix(validate_prefix)
        total = len(prefix)
        for a, fr in zip(sigma.alphabet, freqs):
            emp = prefix.count(a) / total
            if abs(emp - to_float(fr)) > tolerance:
                raise AssertionError(
                    f"empirical frequency of {a!r} ({emp:.6f}) deviates from the "
                    f"exact value {to_float(fr):.6f} beyond {tolerance}")
    return freqs


@dataclass(frozen=True)
class MeasureResult:
    value: object
    exact: bool
    word_frequency: object
    prefix_len: int = 0

    def __float__(self):
        return to_float(self.value)


def measure_cylinder(sigma, L, cylinder, prefix_len=1_000_000):
    """mu([w] x I) = mu'([w]) |I| / sum_i mu'([a_i]) f(a_i).

    Exact when |w| = 1 (letter frequencies are exact Perron data); longer
    words use empirical frequencies from a prefix scan and are flagged.
    """
    w = cylinder.word
    if not w:
        raise ValueError("cylinder word must be nonempty")
    if sgn(cylinder.lo) < 0 or sgn(cylinder.hi - cylinder.lo) < 0:
        raise ValueError("cylinder interval must satisfy 0 <= lo <= hi")
    first_len = L[sigma.index(w[0])]
    if sgn(cylinder.hi - first_len) > 0:
        raise ValueError("cylinder interval must fit inside the first tile")
    freqs = letter_frequencies(sigma, validate_prefix=0)
    denom = sum(fr * x for fr, x in zip(freqs, L.entries))
    if len(w) == 1:
        wf = freqs[sigma.index(w[0])]
        return MeasureResult(value=wf * cylinder.length() / denom, exact=True,
                             word_frequency=wf)
    prefix = fixed_point(sigma).prefix(prefix_len)
    count = _count_occurrences(prefix, w)
    positions = len(prefix) - len(w) + 1
    wf = Fraction(count, positions)
    return MeasureResult(value=wf * cylinder.length() / denom, exact=False,
                         word_frequency=wf, prefix_len=len(prefix))


def _count_occurrences(prefix, w):
    codes = np.frombuffer(prefix.encode("ascii"), dtype=np.uint8)
    n = len(prefix) - len(w) + 1
    if n <= 0:
        return 0
    mask = np.ones(n, dtype=bool)
    for off, ch in enumerate(w):
        mask &= codes[off:off + n] == ord(ch)
    return int(mask.sum())


def _occurrence_positions(prefix, w):
    codes = np.frombuffer(prefix.encode("ascii"), dtype=np.uint8)
    n = len(prefix) - len(w) + 1
    mask = np.ones(n, dtype=bool)
    for off, ch in enumerate(w):
        mask &= codes[off:off + n] == ord(ch)
    return np.flatnonzero(mask)


def mixing_overlap_estimate(sigma, L, cylinder, vector, m_range=range(0, 9),
                            prefix_len=1_000_000, m_cap=12):
    """Occupation-time estimates of mu(C and T_{-t_m} C) along t_m = L M^m v.

    An illustration of the overlap lower bound behind the never-mixing
    statement; rational lengths run in exact integer arithmetic on a
    common denominator, field lengths fall back to floats.
    """
    for m in m_range:
        if m > m_cap:
            raise BudgetExceeded(f"m = {m} beyond the overlap cap {m_cap}")
    mu_c = measure_cylinder(sigma, L, cylinder, prefix_len=prefix_len)
    prefix = fixed_point(sigma).prefix(prefix_len)
    positions = _occurrence_positions(prefix, cylinder.word)
    if positions.size == 0:
        raise PreconditionError(f"word {cylinder.word!r} does not occur in the prefix")
    mat = sigma.matrix()
    rational = L.all_rational() and is_rational(cylinder.lo) and is_rational(cylinder.hi)
    if rational:
        dens = [as_fraction(x).denominator for x in L.entries]
        dens += [as_fraction(cylinder.lo).denominator,
                 as_fraction(cylinder.hi).denominator]
        scale = 1
        for d in dens:
            scale = scale * d // gcd(scale, d)
        lens = np.array([int(as_fraction(x) * scale) for x in L.entries],
                        dtype=np.int64)
        lo = int(as_fraction(cylinder.lo) * scale)
        hi = int(as_fraction(cylinder.hi) * scale)
    else:
        scale = None
        lens = np.array([to_float(x) for x in L.entries])
        lo = to_float(cylinder.lo)
        hi = to_float(cylinder.hi)
    codes = np.frombuffer(prefix.encode("ascii"), dtype=np.uint8)
    letter_len = np.zeros(128, dtype=lens.dtype)
    for i, a in enumerate(sigma.alphabet):
        letter_len[ord(a)] = lens[i]
    tile_lens = letter_len[codes]
    coords = np.concatenate([[0], np.cumsum(tile_lens)])
    total_span = coords[-1]
    starts = coords[positions] + lo
    ell = hi - lo
    rows = []
    for m in m_range:
        t = row_vec_pow_dot(L, mat, m, vector)
        t_scaled = int(as_fraction(t) * scale) if rational else to_float(t)
        if 2 * t_scaled > total_span:
            raise BudgetExceeded(f"segment too short for m = {m}")
        usable = total_span - t_scaled
        src = starts[starts + ell <= usable]
        shifted = src + t_scaled
        overlap = _uniform_interval_overlap(starts, shifted, ell)
        estimate = float(overlap) / float(usable)
        rows.append({
            "m": m,
            "t_m": to_float(t),
            "estimate": estimate,
            "ratio_to_mu": estimate / to_float(mu_c.value),
        })
    return {"mu_cylinder": to_float(mu_c.value), "mu_exact": mu_c.exact,
            "rows": rows, "prefix_len": len(prefix),
            "note": NEVER_MIXING_NOTE}


def row_vec_pow_dot(L, mat, m, vector):
    row = tuple(L.entries)
    for _ in range(m):
        row = row_mat(row, mat)
    return sum(r * x for r, x in zip(row, vector))


def _uniform_interval_overlap(starts, shifted, ell):
    """Total overlap length between two families of disjoint intervals of
    the same length ell with the given sorted start arrays."""
    idx = np.searchsorted(starts, shifted)
    total = 0
    n = len(starts)
    for cand in (idx - 1, idx):
        valid = (cand >= 0) & (cand < n)
        a = starts[cand[valid]]
        b = shifted[valid]
        gap = np.abs(a - b)
        ov = ell - gap
        ov = ov[ov > 0]
        total += int(ov.sum()) if ov.dtype.kind in "iu" else float(ov.sum())
    return total
