"""Substitution rules, fixed points, languages and recurrence structure.

Alphabet letters are single ASCII characters, words are plain strings,
population vectors are integer tuples indexed in alphabet order. The
substitution matrix follows the column convention: entry (i, j) counts
occurrences of letter i in the image of letter j, so population vectors
transform as v -> M v and tile length rows as L -> L M.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BudgetExceeded, ParseError, PreconditionError

MAX_ALPHABET = 8
MAX_IMAGE_LEN = 64
APPLY_CAP = 10_000_000


@dataclass(frozen=True)
class Substitution:
    """A map from letters to nonempty words, with a fixed alphabet order."""

    alphabet: tuple
    images: tuple

    def __post_init__(self):
        if not (1 <= len(self.alphabet) <= MAX_ALPHABET):
            raise ParseError(f"alphabet size must be between 1 and {MAX_ALPHABET}")
        seen = set(self.alphabet)
        if len(seen) != len(self.alphabet):
            raise ParseError("duplicate letter declaration")
        for a, img in zip(self.alphabet, self.images):
            if not img:
                raise ParseError(f"empty image for letter {a!r}")
            if len(img) > MAX_IMAGE_LEN:
                raise ParseError(f"image of {a!r} longer than {MAX_IMAGE_LEN}")
            for ch in img:
                if ch not in seen:
                    raise ParseError(f"unknown letter {ch!r} in the image of {a!r}")

    @property
    def n(self):
        return len(self.alphabet)

    def image(self, letter):
        return self.images[self.alphabet.index(letter)]

    def index(self, letter):
        return self.alphabet.index(letter)

    def translate_table(self):
        return {ord(a): img for a, img in zip(self.alphabet, self.images)}

    def matrix(self):
        """Column-per-letter substitution matrix."""
        cols = []
        for img in self.images:
            cols.append(tuple(img.count(a) for a in self.alphabet))
        return tuple(tuple(cols[j][i] for j in range(self.n)) for i in range(self.n))

    def compose(self, other):
        """The substitution w -> self(other(w)); alphabets must agree."""
        if self.alphabet != other.alphabet:
            raise ParseError("cannot compose substitutions over different alphabets")
        table = self.translate_table()
        return Substitution(self.alphabet,
                            tuple(img.translate(table) for img in other.images))

    def power(self, k):
        if k < 1:
            raise ValueError("power must be at least 1")
        out = self
        for _ in range(k - 1):
            out = out.compose(self)
        return out

    def rule_text(self):
        return ", ".join(f"{a} -> {img}" for a, img in zip(self.alphabet, self.images))

    def __str__(self):
        return self.rule_text()


_RULE_RE = re.compile(r"^\s*(\S)\s*(?:->|→)\s*(\S+)\s*$")


def parse_substitution(text):
    """Parse rules like "a -> ab" separated by commas or newlines."""
    chunks = []
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        chunks.extend(part for part in line.split(",") if part.strip())
    if not chunks:
        raise ParseError("no substitution rules found")
    alphabet = []
    images = []
    for chunk in chunks:
        m = _RULE_RE.match(chunk)
        if not m:
            raise ParseError(f"cannot parse rule {chunk.strip()!r}")
        letter, img = m.group(1), m.group(2)
        if not (letter.isascii() and letter.isalnum()):
            raise ParseError(f"letters must be ASCII alphanumerics, got {letter!r}")
        if letter in alphabet:
            raise ParseError(f"duplicate letter declaration {letter!r}")
        alphabet.append(letter)
        images.append(img)
    return Substitution(tuple(alphabet), tuple(images))


def substitution_matrix(sigma):
    return sigma.matrix()


def apply(sigma, word, times=1, cap=APPLY_CAP):
    """Apply the substitution letterwise `times` times."""
    if times < 0:
        raise ValueError("times must be nonnegative")
    table = sigma.translate_table()
    out = word
    for _ in range(times):
        if out and len(out) * max(len(i) for i in sigma.images) > cap:
            raise BudgetExceeded(f"apply would exceed the {cap} letter cap")
        out = out.translate(table)
    return out


def population_vector(word, alphabet):
    return tuple(word.count(a) for a in alphabet)


@dataclass(frozen=True)
class PrimitivityResult:
    status: str          # "primitive", "not_primitive", "inconclusive"
    power: int = 0

    def __bool__(self):
        return self.status == "primitive"


def wielandt_bound(n):
    return n * n - 2 * n + 2 if n > 1 else 1


def is_primitive(sigma_or_matrix, max_power=None):
    """Definitive primitivity test via boolean matrix powers.

    With the default Wielandt bound the answer is never inconclusive: a
    zero pattern that repeats before the bound proves non-primitivity.
    """
    m = sigma_or_matrix.matrix() if isinstance(sigma_or_matrix, Substitution) else sigma_or_matrix
    n = len(m)
    bound = max_power if max_power is not None else wielandt_bound(n)
    if bound < 1:
        raise ValueError("max_power must be at least 1")
    pattern = tuple(tuple(bool(x) for x in row) for row in m)
    base = pattern
    seen = {pattern}
    for k in range(1, bound + 1):
        if k > 1:
            pattern = _bool_mul(pattern, base)
        if all(all(row) for row in pattern):
            return PrimitivityResult("primitive", k)
        if k > 1 and pattern in seen:
            return PrimitivityResult("not_primitive")
        seen.add(pattern)
    if max_power is None:
        return PrimitivityResult("not_primitive")
    return PrimitivityResult("inconclusive")


def _bool_mul(a, b):
    n = len(a)
    return tuple(
        tuple(any(a[i][k] and b[k][j] for k in range(n)) for j in range(n))
        for i in range(n))


class FixedPointHandle:
    """Lazy right-infinite fixed point of sigma^power starting from seed.

    Prefixes are memoized behind a lock so handles can be shared between
    threads; prefix(l1) is always a prefix of prefix(l2) for l1 < l2.
    """

    def __init__(self, sigma, seed, power, two_sided_seed=None):
        self.sigma = sigma
        self.seed = seed
        self.power = power
        self.two_sided_seed = two_sided_seed
        self._lock = threading.Lock()
        self._prefix = seed
        self._step = sigma.power(power)

    def prefix(self, length, cap=APPLY_CAP):
        if length > cap:
            raise BudgetExceeded(f"prefix request beyond the {cap} letter cap")
        with self._lock:
            table = self._step.translate_table()
            while len(self._prefix) < length:
                nxt = self._prefix.translate(table)
                if len(nxt) <= len(self._prefix):
                    # single-letter loop; the fixed point is periodic
                    nxt = self._prefix + self._prefix.translate(table)
                if not nxt.startswith(self._prefix):
                    raise AssertionError("fixed point prefixes failed to nest")
                self._prefix = nxt
            return self._prefix[:length]

    def left_suffix(self, length):
        """Suffix of the left half, available when a two-sided seed exists."""
        if self.two_sided_seed is None:
            raise PreconditionError("no two-sided seed was found for this substitution")
        left, _ = self.two_sided_seed
        step = self._step.translate_table()
        word = left
        while len(word) < length:
            nxt = word.translate(step)
            if len(nxt) <= len(word):
                nxt = word.translate(step) + word
            if not nxt.endswith(word):
                raise AssertionError("left fixed point suffixes failed to nest")
            word = nxt
        return word[-length:]


def fixed_point(sigma):
    """Smallest power and seed with sigma^p(seed) starting with seed."""
    if not is_primitive(sigma):
        raise PreconditionError("fixed_point requires a primitive substitution")
    n = sigma.n
    bound = n * max(len(img) for img in sigma.images)
    first = {a: sigma.image(a)[0] for a in sigma.alphabet}
    seed = power = None
    for p in range(1, bound + 1):
        for a in sigma.alphabet:
            letter = a
            for _ in range(p):
                letter = first[letter]
            if letter == a:
                seed, power = a, p
                break
        if seed is not None:
            break
    if seed is None:
        raise PreconditionError(
            f"no letter is fixed by any power up to {bound}; cannot build a fixed point")
    two_sided = _find_two_sided_seed(sigma, bound)
    return FixedPointHandle(sigma, seed, power, two_sided)


def _find_two_sided_seed(sigma, bound):
    """A pair (a, b) with sigma^p(a) ending in a, sigma^p(b) starting with b,
    and ab admissible; None if none exists within the power bound."""
    last = {a: sigma.image(a)[-1] for a in sigma.alphabet}
    first = {a: sigma.image(a)[0] for a in sigma.alphabet}
    pairs = language(sigma, 2) if is_primitive(sigma) else set()
    for p in range(1, bound + 1):
        enders = []
        starters = []
        for a in sigma.alphabet:
            x = a
            for _ in range(p):
                x = last[x]
            if x == a:
                enders.append(a)
            y = a
            for _ in range(p):
                y = first[y]
            if y == a:
                starters.append(a)
        for a in enders:
            for b in starters:
                if a + b in pairs:
                    return (a, b)
    return None


def language(sigma, max_len, max_iters=64):
    """The set of admissible words of length <= max_len.

    Iterates the substitution on a seed letter until the factor set is
    stable on two consecutive rounds, which certifies stabilization for
    primitive substitutions at this cutoff.
    """
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    if not is_primitive(sigma):
        raise PreconditionError("language requires a primitive substitution")
    word = sigma.alphabet[0]
    table = sigma.translate_table()
    prev = None
    stable_rounds = 0
    for _ in range(max_iters):
        word = word.translate(table)
        if len(word) > APPLY_CAP:
            raise BudgetExceeded("language iteration exceeded the letter cap")
        factors = _factor_set(word, max_len)
        if factors == prev:
            stable_rounds += 1
            if stable_rounds >= 2 and len(word) >= 2 * max_len:
                return factors
        else:
            stable_rounds = 0
        prev = factors
    raise BudgetExceeded(
        f"language did not stabilize within {max_iters} iterations")


def _factor_set(word, max_len):
    out = set()
    n = len(word)
    for ell in range(1, max_len + 1):
        for i in range(n - ell + 1):
            out.add(word[i:i + ell])
    return out


@dataclass(frozen=True)
class RecurrenceVector:
    """Population vector of a word u_r..u_s with u_{s+1} == u_r."""

    vector: tuple
    word: str
    position: int
    letter: str

    def verify(self, prefix):
        end = self.position + len(self.word)
        if end >= len(prefix):
            return False
        return (prefix[self.position:end] == self.word
                and prefix[end] == prefix[self.position] == self.letter)


def _prefix_array(sigma, prefix):
    codes = np.frombuffer(prefix.encode("ascii"), dtype=np.uint8)
    return codes


def recurrence_vector_set(sigma, prefix_len, max_word_len, handle=None):
    """Distinct recurrence vectors in a fixed point prefix, with one witness
    (position, length) per vector. Vectorized scan, exact integer counts."""
    handle = handle or fixed_point(sigma)
    prefix = handle.prefix(prefix_len)
    codes = _prefix_array(sigma, prefix)
    n = len(prefix)
    base = max_word_len + 1
    cums = []
    for a in sigma.alphabet:
        eq = (codes == ord(a)).astype(np.int64)
        cums.append(np.concatenate([[0], np.cumsum(eq)]))
    # pack per-letter counts into one integer key per position (counts <= d)
    packed = np.zeros(n + 1, dtype=np.int64)
    mult = 1
    for c in cums:
        packed += c * mult
        mult *= base
    found = {}
    weights = [base**i for i in range(sigma.n)]
    for d in range(1, min(max_word_len, n - 1) + 1):
        match = codes[: n - d] == codes[d:]
        positions = np.flatnonzero(match)
        if positions.size == 0:
            continue
        keys = packed[positions + d] - packed[positions]
        uniq, idx = np.unique(keys, return_index=True)
        for key, where in zip(uniq, positions[idx]):
            k = int(key)
            vec = []
            for w in reversed(weights):
                vec.append(k // w)
                k %= w
            vec = tuple(reversed(vec))
            if vec not in found:
                found[vec] = (int(where), d)
    return found


def recurrence_vectors(sigma, prefix_len, max_word_len):
    """All recurrence vectors witnessed in the prefix, deduplicated by vector."""
    handle = fixed_point(sigma)
    found = recurrence_vector_set(sigma, prefix_len, max_word_len, handle)
    prefix = handle.prefix(prefix_len)
    out = []
    for vec, (pos, d) in sorted(found.items(), key=lambda kv: (sum(kv[0]), kv[0])):
        word = prefix[pos:pos + d]
        out.append(RecurrenceVector(vector=vec, word=word, position=pos,
                                    letter=prefix[pos]))
    return out


def is_full(vector, matrix):
    """True iff v, Mv, ..., M^(n-1)v span Q^n."""
    if not any(vector):
        raise ValueError("is_full requires a nonzero vector")
    n = len(matrix)
    cols = []
    v = tuple(Fraction(x) for x in vector)
    for _ in range(n):
        cols.append(v)
        v = tuple(sum(Fraction(matrix[i][j]) * v[j] for j in range(n)) for i in range(n))
    from .exact.linalg import rank

    return rank(list(zip(*cols))) == n


@dataclass(frozen=True)
class AperiodicityResult:
    status: str              # "aperiodic_evidence", "periodic", "inconclusive"
    period_word: str = ""
    complexity_samples: tuple = ()

    def __bool__(self):
        return self.status == "aperiodic_evidence"


def _smallest_period(word):
    """Smallest p with word[i] == word[i+p] for all valid i (failure function)."""
    n = len(word)
    fail = [0] * n
    k = 0
    for i in range(1, n):
        while k and word[i] != word[k]:
            k = fail[k - 1]
        if word[i] == word[k]:
            k += 1
        fail[i] = k
    return n - fail[-1]


def aperiodicity_check(sigma, depth=10_000):
    """Periodicity gate: exact confirmation of periodic fixed points, and a
    complexity-growth certificate p(l) > l as aperiodicity evidence."""
    if not is_primitive(sigma):
        raise PreconditionError("aperiodicity_check requires a primitive substitution")
    handle = fixed_point(sigma)
    prefix = handle.prefix(depth)
    depth = len(prefix)
    period = _smallest_period(prefix)
    if period <= depth // 4:
        word = prefix[:period]
        if _confirm_periodic(sigma, word):
            return AperiodicityResult("periodic", period_word=word)
    samples = []
    ell = 1
    cutoff = max(4, depth // 4)
    ok = True
    while ell <= cutoff:
        count = _distinct_factor_count(prefix, ell, ell + 2)
        samples.append((ell, count))
        if count <= ell:
            ok = False
            break
        ell *= 2
    if ok:
        return AperiodicityResult("aperiodic_evidence", complexity_samples=tuple(samples))
    return AperiodicityResult("inconclusive", complexity_samples=tuple(samples))


def _distinct_factor_count(prefix, ell, cap):
    """Number of distinct factors of length ell, early exit above cap."""
    seen = set()
    for i in range(len(prefix) - ell + 1):
        seen.add(prefix[i:i + ell])
        if len(seen) > cap:
            break
    return len(seen)


def _confirm_periodic(sigma, word):
    """Exact check that the subshift language is the periodic word's language."""
    q = len(word)
    lang = language(sigma, 2 * q)
    doubled = word * 3
    periodic_factors = {doubled[i:i + 2 * q] for i in range(q)}
    for w in lang:
        if len(w) == 2 * q and w not in periodic_factors:
            return False
    return True
