"""
Substitution rules, two-sided fixed points, geometric realisations with
natural tile lengths, and the catalogue of named rules.
"""
import csv
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .algebra import AlgebraicNumber, IntegerMatrix, QuadraticOrder, spectral_data
from .conf import get_setting
from .exceptions import ConfigurationError, MemoryBudgetError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SubstitutionRule:
    """Letter images over a small alphabet."""
    name: str
    alphabet: tuple
    images: tuple
    default_seed: str = 'a|a'
    seed_power: int = 2
    projection: tuple = None

    def __post_init__(self):
        if len(self.alphabet) != len(self.images) or not self.alphabet:
            raise ConfigurationError(f"{self.name}: one image per letter required")
        for letter, image in zip(self.alphabet, self.images):
            if not image:
                raise ConfigurationError(f"{self.name}: empty image for {letter}")
            unknown = set(image) - set(self.alphabet)
            if unknown:
                raise ConfigurationError(f"{self.name}: image of {letter} uses unknown letters {sorted(unknown)}")

    @property
    def d(self):
        return len(self.alphabet)

    def index(self, letter):
        return self.alphabet.index(letter)

    def encode(self, word):
        return np.array([self.index(c) for c in word], dtype=np.int8)

    def decode(self, codes):
        return ''.join(self.alphabet[c] for c in codes)

    @cached_property
    def matrix(self):
        """M[i][j] = number of letter i in the image of letter j."""
        return IntegerMatrix(tuple(
            tuple(image.count(letter) for image in self.images)
            for letter in self.alphabet
        ))

    @cached_property
    def spectral(self):
        return spectral_data(self.matrix)

    @property
    def pf_eigenvalue(self):
        return self.spectral.pf_eigenvalue

    @cached_property
    def natural_lengths(self):
        return tuple(float(x) for x in self.spectral.left)

    @property
    def is_constant_length(self):
        return len({len(image) for image in self.images}) == 1

    @cached_property
    def order(self):
        """Quadratic order containing the PF eigenvalue of a binary rule."""
        if self.d != 2 or self.is_constant_length:
            return None
        M = self.matrix
        trace = M.rows[0][0] + M.rows[1][1]
        order = QuadraticOrder(trace, -M.determinant)
        root = math.isqrt(order.discriminant)
        if root * root == order.discriminant:
            return None
        return order

    @cached_property
    def exact_lengths(self):
        """Natural lengths as AlgebraicNumbers (binary irrational rules only)."""
        order = self.order
        if order is None:
            return None
        M = self.matrix
        theta = order.element(0, 1)
        lengths = (order.element(M.rows[1][0]), theta - M.rows[0][0])
        shortest = min(lengths)
        try:
            return tuple(length.exact_divide(shortest) for length in lengths)
        except ValueError:
            logger.warning("%s: natural lengths not normalisable inside %s", self.name, order)
            return None

    @cached_property
    def image_table(self):
        width = max(len(image) for image in self.images)
        table = np.zeros((self.d, width), dtype=np.int8)
        for j, image in enumerate(self.images):
            table[j, :len(image)] = self.encode(image)
        sizes = np.array([len(image) for image in self.images], dtype=np.int64)
        return table, sizes

    def image_offsets(self, j, lengths):
        """Left endpoints of the tiles inside the inflated tile of letter j."""
        offsets = [0 * lengths[0]]
        for letter in self.images[j][:-1]:
            offsets.append(offsets[-1] + lengths[self.index(letter)])
        return offsets


def apply(rule, codes, max_letters=None):
    """
    One substitution step on an encoded word.

    Args:
        rule: SubstitutionRule
        codes: int8 array of letter indices
        max_letters: budget for the resulting word

    Returns:
        Encoded image word
    """
    table, sizes = rule.image_table
    if codes.size == 0:
        return codes.copy()
    max_letters = max_letters or get_setting('MAX_LETTERS')
    total = int(sizes[codes].sum())
    if total > max_letters:
        raise MemoryBudgetError(f"{rule.name}: word of {total} letters exceeds the budget of {max_letters}")
    rows = table[codes]
    mask = np.arange(table.shape[1]) < sizes[codes][:, None]
    return rows[mask]


def legal_words(rule):
    """All legal two-letter words of a primitive rule."""
    def pairs(word):
        return {word[i:i + 2] for i in range(len(word) - 1)}

    legal = set()
    for image in rule.images:
        legal |= pairs(image)
    frontier = set(legal)
    while frontier:
        found = set()
        for word in frontier:
            images = rule.images[rule.index(word[0])] + rule.images[rule.index(word[1])]
            found |= pairs(images) - legal
        legal |= found
        frontier = found
    return frozenset(legal)


@dataclass(frozen=True, eq=False)
class TwoSidedWord:
    """Word around a marked origin; the left half is stored reversed."""
    rule: SubstitutionRule
    left_reversed: np.ndarray
    right: np.ndarray

    @property
    def left(self):
        return self.left_reversed[::-1]

    def __len__(self):
        return len(self.left_reversed) + len(self.right)

    def letter_counts(self):
        codes = np.concatenate([self.left_reversed, self.right])
        return np.bincount(codes, minlength=self.rule.d)

    def __str__(self):
        return f"{self.rule.decode(self.left)}|{self.rule.decode(self.right)}"


def _parse_seed(rule, seed):
    if isinstance(seed, str):
        parts = seed.split('|')
    else:
        parts = list(seed)
    if len(parts) != 2 or any(len(part) != 1 for part in parts):
        raise ConfigurationError(f"seed must be two letters around '|', got {seed!r}")
    for letter in parts:
        if letter not in rule.alphabet:
            raise ConfigurationError(f"seed letter {letter!r} is not in the alphabet {rule.alphabet}")
    return parts


def substitute_word(rule, word, max_letters=None):
    """Apply the rule once to both halves of a two-sided word."""
    left = apply(rule, word.left, max_letters)[::-1]
    right = apply(rule, word.right, max_letters)
    return TwoSidedWord(rule, left.copy(), right)


def fixed_point_word(rule, seed=None, n=0, power=None, max_letters=None):
    """
    Iterate the rule on a legal two-letter seed.

    Args:
        rule: SubstitutionRule
        seed: 'x|y' (default rule.default_seed)
        n: number of iterations of rule**power
        power: substitution power per iteration (default rule.seed_power, 2
            for every catalogued rule except the plastic one)
        max_letters: letter budget

    Returns:
        TwoSidedWord
    """
    if n < 0:
        raise ConfigurationError(f"iteration count must be >= 0, got {n}")
    seed = seed or rule.default_seed
    power = power or rule.seed_power
    left, right = _parse_seed(rule, seed)
    if left + right not in legal_words(rule):
        raise ConfigurationError(f"illegal seed {left}|{right}: word '{left + right}' never occurs in {rule.name}")

    word = TwoSidedWord(rule, rule.encode(left), rule.encode(right))
    for _ in range(n):
        for _ in range(power):
            word = substitute_word(rule, word, max_letters)

    if n:
        reference = TwoSidedWord(rule, rule.encode(left), rule.encode(right))
        for _ in range(power):
            reference = substitute_word(rule, reference, max_letters)
        if reference.left_reversed[0] != word.left_reversed[0] or reference.right[0] != word.right[0]:
            logger.warning("%s: seed %s|%s is not fixed by the rule to power %d", rule.name, left, right, power)
    logger.debug("%s: %d letters after %d iterations", rule.name, len(word), n)
    return word


@dataclass(frozen=True, eq=False)
class TypedPatch:
    """Sorted typed point set; optional exact coordinates a + b*theta."""
    positions: np.ndarray
    types: np.ndarray
    lengths: tuple
    radius: float
    alphabet: tuple = ('a', 'b')
    order: QuadraticOrder = None
    coeff_a: np.ndarray = field(default=None, repr=False)
    coeff_b: np.ndarray = field(default=None, repr=False)

    def __len__(self):
        return len(self.positions)

    @property
    def is_exact(self):
        return self.coeff_a is not None

    def gaps(self):
        return np.diff(self.positions)

    def exact_gaps(self):
        """Distinct consecutive differences as (a, b) coefficient pairs."""
        return set(zip(np.diff(self.coeff_a).tolist(), np.diff(self.coeff_b).tolist()))

    def coefficient_set(self):
        return set(zip(self.coeff_a.tolist(), self.coeff_b.tolist()))

    def restrict(self, R):
        keep = np.abs(self.positions) <= R
        return TypedPatch(
            positions=self.positions[keep],
            types=self.types[keep],
            lengths=self.lengths,
            radius=min(R, self.radius),
            alphabet=self.alphabet,
            order=self.order,
            coeff_a=None if self.coeff_a is None else self.coeff_a[keep],
            coeff_b=None if self.coeff_b is None else self.coeff_b[keep],
        )

    def exact_positions(self):
        return [AlgebraicNumber(int(a), int(b), self.order) for a, b in zip(self.coeff_a, self.coeff_b)]

    def write_csv(self, handle):
        """CSV `position,type[,a,b]` with 17 significant digits."""
        writer = csv.writer(handle, lineterminator='\n')
        header = ['position', 'type'] + (['a', 'b'] if self.is_exact else [])
        writer.writerow(header)
        for i, x in enumerate(self.positions):
            row = [f"{x:.17g}", self.alphabet[self.types[i]]]
            if self.is_exact:
                row += [int(self.coeff_a[i]), int(self.coeff_b[i])]
            writer.writerow(row)


def _partial_sums(codes, per_letter, left):
    steps = per_letter[codes]
    if steps.size == 0:
        return steps
    if left:
        return -np.cumsum(steps)
    return np.concatenate([[0], np.cumsum(steps)[:-1]]).astype(steps.dtype)


def geometric_patch(word, lengths=None):
    """
    Left endpoints of the tiles of a two-sided word.

    Args:
        word: TwoSidedWord
        lengths: one length per letter (floats or AlgebraicNumbers); default
            the rule's exact lengths when available, else natural lengths

    Returns:
        TypedPatch with the origin at the marked seed vertex
    """
    rule = word.rule
    if lengths is None:
        lengths = rule.exact_lengths or rule.natural_lengths
    if len(lengths) != rule.d:
        raise ConfigurationError(f"{rule.name}: need {rule.d} lengths, got {len(lengths)}")
    exact = all(isinstance(x, AlgebraicNumber) for x in lengths)
    if any((x.sign() if exact else (x > 0) - (x < 0)) <= 0 for x in lengths):
        raise ConfigurationError("tile lengths must be strictly positive")

    types = np.concatenate([word.left_reversed[::-1], word.right]).astype(np.int8)
    float_lengths = np.array([float(x) for x in lengths])
    order = coeff_a = coeff_b = None
    if exact:
        order = lengths[0].order
        la = np.array([x.a for x in lengths], dtype=np.int64)
        lb = np.array([x.b for x in lengths], dtype=np.int64)
        coeff_a = np.concatenate([_partial_sums(word.left_reversed, la, True)[::-1], _partial_sums(word.right, la, False)])
        coeff_b = np.concatenate([_partial_sums(word.left_reversed, lb, True)[::-1], _partial_sums(word.right, lb, False)])
        positions = coeff_a + coeff_b * order.theta
    else:
        positions = np.concatenate([
            _partial_sums(word.left_reversed, float_lengths, True)[::-1],
            _partial_sums(word.right, float_lengths, False),
        ])
    extent_right = float(float_lengths[word.right].sum())
    extent_left = float(float_lengths[word.left_reversed].sum())
    return TypedPatch(
        positions=positions,
        types=types,
        lengths=tuple(float(x) for x in float_lengths),
        radius=min(extent_left, extent_right),
        alphabet=rule.alphabet,
        order=order,
        coeff_a=coeff_a,
        coeff_b=coeff_b,
    )


def patch_of_radius(rule, R, seed=None, max_letters=None):
    """Fixed-point patch iterated until it covers [-R, R], then cut to it."""
    if R <= 0:
        raise ConfigurationError(f"radius must be positive, got {R}")
    n = 0
    while True:
        patch = geometric_patch(fixed_point_word(rule, seed, n, max_letters=max_letters))
        if patch.radius >= R:
            return patch.restrict(R)
        n += 1


def inflate_patch(rule, patch):
    """
    Inflate a patch by the PF eigenvalue and dissect each tile by the rule.

    Exact when the patch carries coefficients in the rule's order.
    """
    lengths = rule.exact_lengths if patch.is_exact else rule.natural_lengths
    positions, types, coeff_a, coeff_b = [], [], [], []
    for j in range(rule.d):
        mask = patch.types == j
        offsets = rule.image_offsets(j, lengths)
        image = rule.encode(rule.images[j])
        for letter, offset in zip(image, offsets):
            types.append(np.full(np.count_nonzero(mask), letter, dtype=np.int8))
            if patch.is_exact:
                t, n = patch.order.trace, patch.order.norm
                a, b = patch.coeff_a[mask], patch.coeff_b[mask]
                coeff_a.append(b * n + offset.a)
                coeff_b.append(a + b * t + offset.b)
            else:
                positions.append(patch.positions[mask] * rule.pf_eigenvalue + offset)
    types = np.concatenate(types)
    if patch.is_exact:
        coeff_a = np.concatenate(coeff_a)
        coeff_b = np.concatenate(coeff_b)
        positions = coeff_a + coeff_b * patch.order.theta
    else:
        positions = np.concatenate(positions)
    order = np.argsort(positions, kind='stable')
    return TypedPatch(
        positions=positions[order],
        types=types[order],
        lengths=patch.lengths,
        radius=patch.radius * rule.pf_eigenvalue,
        alphabet=patch.alphabet,
        order=patch.order,
        coeff_a=coeff_a[order] if patch.is_exact else None,
        coeff_b=coeff_b[order] if patch.is_exact else None,
    )


# ==================== Catalogue ====================

CATALOGUE = (
    'fibonacci',
    'noble',
    'period-doubling',
    'limit-quasiperiodic',
    'kolakoski',
    'plastic',
    'thue-morse',
    'gtm',
    'rudin-shapiro',
)


def _require_positive(name, **params):
    for key, value in params.items():
        if value is None or int(value) != value or value < 1:
            raise ConfigurationError(f"{name}: parameter {key} must be an integer >= 1, got {value}")


def catalogue(name, p=None, q=None):
    """
    Named substitution rule.

    Args:
        name: one of CATALOGUE (underscores accepted)
        p, q: integer parameters for 'noble' (p) and 'gtm' (p, q)

    Returns:
        SubstitutionRule
    """
    key = name.lower().replace('_', '-')
    if key == 'fibonacci':
        return SubstitutionRule('fibonacci', ('a', 'b'), ('ab', 'a'))
    if key == 'noble':
        _require_positive(key, p=p)
        return SubstitutionRule(f'noble({p})', ('a', 'b'), ('a' * p + 'b', 'a'))
    if key == 'period-doubling':
        return SubstitutionRule('period-doubling', ('a', 'b'), ('ab', 'aa'))
    if key == 'limit-quasiperiodic':
        return SubstitutionRule('limit-quasiperiodic', ('a', 'b'), ('aab', 'abab'), default_seed='b|a')
    if key == 'kolakoski':
        return SubstitutionRule('kolakoski(3,1)', ('a', 'b', 'c'), ('abc', 'ab', 'b'), default_seed='b|a')
    if key == 'plastic':
        return SubstitutionRule('plastic', ('a', 'b', 'c'), ('b', 'c', 'ab'), default_seed='c|a', seed_power=6)
    if key == 'thue-morse':
        return catalogue('gtm', 1, 1)
    if key == 'gtm':
        _require_positive(key, p=p, q=q)
        name = 'thue-morse' if p == q == 1 else f'gtm({p},{q})'
        return SubstitutionRule(name, ('a', 'b'), ('a' * p + 'b' * q, 'b' * p + 'a' * q), default_seed='b|a')
    if key == 'rudin-shapiro':
        return SubstitutionRule(
            'rudin-shapiro', ('a', 'b', 'c', 'd'), ('ab', 'ac', 'db', 'dc'),
            default_seed='c|a', projection=(1, 1, -1, -1),
        )
    raise ConfigurationError(f"unknown substitution {name!r}; known: {', '.join(CATALOGUE)}")


def rudin_shapiro_weights(n):
    """First n weights of the Rudin-Shapiro sequence, as an int8 array of +-1."""
    if n < 1:
        raise ConfigurationError(f"length must be >= 1, got {n}")
    rule = catalogue('rudin-shapiro')
    codes = rule.encode('a')
    while len(codes) < n:
        codes = apply(rule, codes, max_letters=max(2 * n, 2))
    projection = np.array(rule.projection, dtype=np.int8)
    return projection[codes[:n]]


def bernoullise(weights, p, rng):
    """Flip each sign independently with probability p."""
    if not 0 <= p <= 1:
        raise ConfigurationError(f"flip probability must lie in [0, 1], got {p}")
    weights = np.asarray(weights)
    flips = rng.random(weights.shape[0]) < p
    return np.where(flips, -weights, weights).astype(weights.dtype)
