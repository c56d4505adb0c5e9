"""
Probability core: validated construction and manipulation of joint tables.

Implements:
    - make_distribution / make_joint / make_base / make_kernel (validation)
    - marginal / joint_marginal / condition / group_conditional
    - from_samples (plug-in frequency estimate of a dataset)
    - apply_model (product of a base table with a Pr[Yp | Yo, Z] kernel)
    - relabel / swap_groups (label maps used by transforms and invariance checks)
    - random_distribution / random_joint / random_kernel / derive_seed (seeded generators)
    - records_from_distribution (exact n-fold replication as a dataset)

Every function is pure; generators take explicit seeds.
"""
from __future__ import annotations

import itertools
import logging
import math
import zlib
from collections import Counter, defaultdict
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from src.audit.arithmetic import (
    Label,
    Number,
    is_exact,
    normalize_label,
    parse_number,
    rational_from_float,
    to_mode,
    zero,
)
from src.config.constants import (
    CONSTRUCT_PLACEHOLDER,
    FLOAT_TOL,
    GROUPS,
    MODE_FLOAT,
    MODE_RATIONAL,
    PREDICTION_PLACEHOLDER,
    RATIONAL_DRAW_DENOMINATOR,
    SEED_MODULUS,
    VAR_INDEX,
    VAR_YC,
    VAR_YO,
    VAR_YP,
    VAR_Z,
    VARIABLES,
)
from src.models.errors import (
    EmptyGroup,
    InvalidParameter,
    MassNotOne,
    MissingKernelRow,
    MixedConstructPresence,
    NegativeProbability,
    UnknownLabel,
    ZeroMassCondition,
)
from src.models.probability import (
    Cell,
    Distribution,
    JointDistribution,
    ModelKernel,
    SampleRecord,
    Support,
)

logger = logging.getLogger(__name__)

SupportsInput = Mapping[str, object]


# ==========================================================================
# Validation helpers
# ==========================================================================

def _as_support(value: object) -> Support:
    if isinstance(value, Support):
        return value
    if isinstance(value, (str, bytes)) or not isinstance(value, Iterable):
        raise InvalidParameter(f"A support must be a list of labels, got {value!r}")
    return Support.of(value)


def normalize_supports(supports: SupportsInput) -> Dict[str, Support]:
    """
    Canonical supports for all four variables.

    Z is always {0, 1}; a missing Yc or Yp collapses to its placeholder label.
    """
    unknown = sorted(set(supports) - set(VARIABLES))
    if unknown:
        raise InvalidParameter(f"Unknown variables {unknown}; expected a subset of {list(VARIABLES)}")
    if VAR_YO not in supports:
        raise InvalidParameter("The Yo support is required")

    z_support = _as_support(supports.get(VAR_Z, GROUPS))
    if z_support.labels != GROUPS:
        raise InvalidParameter(f"Z support must be [0, 1], got {list(z_support.labels)}")

    yc = supports.get(VAR_YC)
    yp = supports.get(VAR_YP)
    return {
        VAR_Z: z_support,
        VAR_YC: _as_support(yc) if yc is not None else Support((CONSTRUCT_PLACEHOLDER,)),
        VAR_YO: _as_support(supports[VAR_YO]),
        VAR_YP: _as_support(yp) if yp is not None else Support((PREDICTION_PLACEHOLDER,)),
    }


def _infer_mode(values: Iterable[object]) -> str:
    """Float as soon as one value is a float; strings and Fractions are exact."""
    for value in values:
        if isinstance(value, float):
            return MODE_FLOAT
    return MODE_RATIONAL


def _checked_value(cell: object, raw: object, mode: str) -> Number:
    value = parse_number(raw, mode)
    if value < 0:
        if mode == MODE_FLOAT and value >= -FLOAT_TOL:
            return 0.0
        raise NegativeProbability(cell, value)
    return value


def _check_mass(total: Number, mode: str) -> None:
    if mode == MODE_RATIONAL:
        if total != 1:
            raise MassNotOne(total)
    elif abs(float(total) - 1.0) > FLOAT_TOL:
        raise MassNotOne(total)


# ==========================================================================
# Constructors
# ==========================================================================

def make_distribution(
    support: object,
    probabilities: Mapping[object, object],
    mode: Optional[str] = None,
    variable: str = "label",
) -> Distribution:
    """
    Validated single-variable law.

    Args:
        support: Support or iterable of labels.
        probabilities: label -> probability (number, decimal text or 'n/d').
            Labels left out have probability 0.
        mode: Arithmetic mode; inferred from the values when None.
        variable: Variable name used in UnknownLabel diagnostics.

    Returns:
        Distribution holding the positive entries only.
    """
    sup = _as_support(support)
    mode = mode or _infer_mode(probabilities.values())
    probs: Dict[Label, Number] = {}
    total = zero(mode)
    for raw_label, raw_value in probabilities.items():
        label = normalize_label(raw_label)
        if label not in sup:
            raise UnknownLabel(variable, label)
        if label in probs:
            raise InvalidParameter(f"Label {label!r} listed twice")
        value = _checked_value(label, raw_value, mode)
        total += value
        if value > 0:
            probs[label] = value
    _check_mass(total, mode)
    return Distribution(support=sup, probabilities=probs, mode=mode)


def make_joint(
    supports: SupportsInput,
    table: Mapping[Sequence[object], object],
    mode: Optional[str] = None,
) -> JointDistribution:
    """
    Validated joint table over (Z, Yc, Yo, Yp).

    Args:
        supports: Variable name -> labels. Yo is required; Z defaults to
            {0, 1}; Yc / Yp default to their placeholders.
        table: (z, yc, yo, yp) -> probability. Missing cells are zeros.
        mode: Arithmetic mode; inferred from the values when None.

    Raises:
        UnknownLabel, NegativeProbability, MassNotOne, EmptyGroup.
    """
    sups = normalize_supports(supports)
    mode = mode or _infer_mode(table.values())

    cells: Dict[Cell, Number] = {}
    total = zero(mode)
    group_mass = {z: zero(mode) for z in GROUPS}
    for raw_cell, raw_value in table.items():
        if len(raw_cell) != len(VARIABLES):
            raise InvalidParameter(f"Cell {raw_cell!r} must assign all of {list(VARIABLES)}")
        cell = tuple(normalize_label(x) for x in raw_cell)
        for var, label in zip(VARIABLES, cell):
            if label not in sups[var]:
                raise UnknownLabel(var, label)
        if cell in cells:
            raise InvalidParameter(f"Cell {cell!r} listed twice")
        value = _checked_value(cell, raw_value, mode)
        total += value
        group_mass[cell[0]] += value
        if value > 0:
            cells[cell] = value  # type: ignore[index]

    _check_mass(total, mode)
    for z in GROUPS:
        if group_mass[z] <= 0:
            raise EmptyGroup(z)
    return JointDistribution(supports=sups, table=cells, mode=mode)


def make_base(
    supports: SupportsInput,
    cells: Mapping[Tuple[object, object, object], object],
    mode: Optional[str] = None,
) -> JointDistribution:
    """Joint table without a model: (z, yc, yo) cells, Yp fixed to its placeholder."""
    base_supports = {var: labels for var, labels in supports.items() if var != VAR_YP}
    table = {(z, yc, yo, PREDICTION_PLACEHOLDER): p for (z, yc, yo), p in cells.items()}
    return make_joint(base_supports, table, mode)


def make_kernel(
    yp_support: object,
    rows: Mapping[Tuple[object, int], Mapping[object, object]],
    mode: Optional[str] = None,
) -> ModelKernel:
    """Validated Pr[Yp | Yo, Z] kernel from {(yo, z): {yp: prob}}."""
    sup = _as_support(yp_support)
    validated: Dict[Tuple[Label, int], Distribution] = {}
    for (yo, z), row in rows.items():
        validated[(normalize_label(yo), int(z))] = make_distribution(sup, row, mode, variable=VAR_YP)
    return ModelKernel(yp_support=sup, rows=validated)


def _rebuild(
    dist: JointDistribution,
    table: Mapping[Cell, Number],
    supports: Optional[Mapping[str, Support]] = None,
) -> JointDistribution:
    return make_joint(supports or dist.supports, table, dist.mode)


# ==========================================================================
# Marginals & conditionals
# ==========================================================================

def joint_marginal(dist: JointDistribution, variables: Sequence[str]) -> Dict[Tuple[Label, ...], Number]:
    """Projection onto several variables: assignment tuple -> probability (positive only)."""
    idx = [VAR_INDEX[v] for v in variables]
    out: Dict[Tuple[Label, ...], Number] = defaultdict(lambda: zero(dist.mode))
    for cell, p in dist.cells():
        out[tuple(cell[i] for i in idx)] += p
    return dict(out)


def marginal(dist: JointDistribution, var: str) -> Distribution:
    if var not in VAR_INDEX:
        raise InvalidParameter(f"Unknown variable '{var}'")
    projected = joint_marginal(dist, [var])
    return Distribution(
        support=dist.support(var),
        probabilities={key[0]: p for key, p in projected.items()},
        mode=dist.mode,
    )


def condition(dist: JointDistribution, target: str, assignments: Mapping[str, object]) -> Distribution:
    """
    Law of `target` given a partial assignment of the other variables.

    Raises:
        ZeroMassCondition: the conditioning event has probability 0.
    """
    if target not in VAR_INDEX:
        raise InvalidParameter(f"Unknown variable '{target}'")
    fixed = {VAR_INDEX[var]: normalize_label(label) for var, label in assignments.items()}
    t = VAR_INDEX[target]
    acc: Dict[Label, Number] = defaultdict(lambda: zero(dist.mode))
    total = zero(dist.mode)
    for cell, p in dist.cells():
        if all(cell[i] == label for i, label in fixed.items()):
            acc[cell[t]] += p
            total += p
    if total <= 0:
        raise ZeroMassCondition(dict(assignments))
    return Distribution(
        support=dist.support(target),
        probabilities={label: p / total for label, p in acc.items()},
        mode=dist.mode,
    )


def group_conditional(dist: JointDistribution, var: str, z: int) -> Distribution:
    """Law of `var` within group Z=z."""
    return condition(dist, var, {VAR_Z: z})


# ==========================================================================
# Datasets
# ==========================================================================

def from_samples(
    records: Sequence[SampleRecord],
    declared_supports: Optional[SupportsInput] = None,
    mode: str = MODE_FLOAT,
) -> JointDistribution:
    """
    Maximum-likelihood frequency table of a dataset.

    Supports are the observed labels, except for the variables named in
    `declared_supports`; a declared support keeps its zero-mass labels and
    rejects records outside it. A declared Z is ignored, and so is a declared
    Yc when the records carry no construct.
    Records without y_construct leave Yc as its placeholder.

    Raises:
        EmptyGroup, UnknownLabel, MixedConstructPresence.
    """
    if not records:
        raise EmptyGroup(0)
    with_construct = sum(1 for r in records if r.y_construct is not None)
    if 0 < with_construct < len(records):
        raise MixedConstructPresence()
    has_construct = with_construct == len(records)

    counts: Counter = Counter()
    for record in records:
        z = normalize_label(record.z)
        if z not in GROUPS:
            raise UnknownLabel(VAR_Z, record.z)
        yc = normalize_label(record.y_construct) if has_construct else CONSTRUCT_PLACEHOLDER
        counts[(z, yc, normalize_label(record.y_obs), normalize_label(record.y_pred))] += 1

    for z in GROUPS:
        if not any(cell[0] == z for cell in counts):
            raise EmptyGroup(z)

    observed: Dict[str, set] = {
        VAR_YO: {cell[2] for cell in counts},
        VAR_YP: {cell[3] for cell in counts},
    }
    if has_construct:
        observed[VAR_YC] = {cell[1] for cell in counts}
    declared = dict(declared_supports or {})
    declared.pop(VAR_Z, None)
    if not has_construct:
        declared.pop(VAR_YC, None)
    supports = {var: declared.get(var, labels) for var, labels in observed.items()}

    n = len(records)
    table = {cell: to_mode(Fraction(c, n), mode) for cell, c in counts.items()}
    logger.debug("Estimated joint table from %d records (%d distinct cells)", n, len(table))
    return make_joint(supports, table, mode)


def records_from_distribution(dist: JointDistribution, copies: int = 1) -> List[SampleRecord]:
    """
    Exact replication of a rational distribution as dataset rows.

    Each cell appears p * N times with N = lcm(denominators) * copies, so
    from_samples on the result gives back `dist` exactly.
    """
    if dist.mode != MODE_RATIONAL:
        raise InvalidParameter("Only rational distributions can be replicated exactly")
    if not dist.has_model:
        raise InvalidParameter("Cannot write a dataset without a prediction variable")
    if copies < 1:
        raise InvalidParameter(f"copies must be >= 1, got {copies}")

    n = math.lcm(*(Fraction(p).denominator for _, p in dist.cells())) * copies
    rows: List[SampleRecord] = []
    for (z, yc, yo, yp), p in dist.cells():
        count = Fraction(p) * n
        construct = yc if dist.construct_available else None
        rows.extend(SampleRecord(z=int(z), y_obs=yo, y_pred=yp, y_construct=construct) for _ in range(int(count)))
    return rows


# ==========================================================================
# Models
# ==========================================================================

def apply_model(base: JointDistribution, kernel: ModelKernel) -> JointDistribution:
    """
    Draw Yp from `kernel` given (Yo, Z), replacing any Yp already in `base`.

    The (Z, Yc, Yo) marginal of the result equals the base's, and Yp is
    conditionally independent of Yc given (Yo, Z).

    Raises:
        MissingKernelRow: a (yo, z) with positive base mass has no row.
    """
    mode = base.mode
    if any(row.mode != MODE_RATIONAL for row in kernel.rows.values()):
        mode = MODE_FLOAT

    table: Dict[Cell, Number] = defaultdict(lambda: zero(mode))
    for (z, yc, yo), mass in joint_marginal(base, [VAR_Z, VAR_YC, VAR_YO]).items():
        row = kernel.row(yo, z)  # type: ignore[arg-type]
        if row is None:
            raise MissingKernelRow(yo, z)  # type: ignore[arg-type]
        for yp, q in row.items():
            if q > 0:
                table[(z, yc, yo, yp)] += to_mode(mass, mode) * to_mode(q, mode)

    supports = dict(base.supports)
    supports[VAR_YP] = kernel.yp_support
    return make_joint(supports, dict(table), mode)


def relabel(
    dist: JointDistribution,
    var: str,
    mapping: Callable[[Label], object],
    new_support: Optional[Iterable[object]] = None,
) -> JointDistribution:
    """
    Rename the labels of `var` through `mapping`; labels sent to the same
    value merge their mass. `mapping` is only called on labels with positive
    mass when `new_support` is given.
    """
    i = VAR_INDEX[var]
    table: Dict[Cell, Number] = defaultdict(lambda: zero(dist.mode))
    for cell, p in dist.cells():
        new = list(cell)
        new[i] = normalize_label(mapping(cell[i]))
        table[tuple(new)] += p  # type: ignore[index]
    supports = dict(dist.supports)
    if new_support is None:
        new_support = {normalize_label(mapping(label)) for label in dist.support(var)}
    supports[var] = Support.of(set(normalize_label(x) for x in new_support))
    return _rebuild(dist, dict(table), supports)


def swap_groups(dist: JointDistribution) -> JointDistribution:
    """Exchange the roles of Z=0 and Z=1."""
    return relabel(dist, VAR_Z, lambda z: 1 - int(z))  # type: ignore[arg-type]


# ==========================================================================
# Seeded generators
# ==========================================================================

def derive_seed(seed: int, *keys: object) -> int:
    """
    Stable sub-seed for (seed, keys...).

    Integer keys enter as-is (mod 2^64), string keys through CRC-32.
    """
    entropy = [int(seed) % SEED_MODULUS]
    for key in keys:
        if isinstance(key, int):
            entropy.append(key % SEED_MODULUS)
        else:
            entropy.append(zlib.crc32(str(key).encode("utf-8")))
    state = np.random.SeedSequence(entropy).generate_state(1, dtype=np.uint64)
    return int(state[0])


def make_rng(seed: int, *keys: object) -> np.random.Generator:
    return np.random.default_rng(derive_seed(seed, *keys))


def simplex_weights(rng: np.random.Generator, size: int, mode: str) -> List[Number]:
    """
    Uniform draw from the probability simplex (normalized standard-exponential
    variates). Rational draws are rounded to a bounded denominator, kept
    strictly positive, then renormalized exactly.
    """
    raw = rng.standard_exponential(size)
    if mode == MODE_FLOAT:
        weights = raw / raw.sum()
        return [float(w) for w in weights]
    floor = Fraction(1, RATIONAL_DRAW_DENOMINATOR)
    approx = [max(rational_from_float(float(w), RATIONAL_DRAW_DENOMINATOR), floor) for w in raw]
    total = sum(approx, Fraction(0))
    return [w / total for w in approx]


def random_distribution(support: object, rng: np.random.Generator, mode: str = MODE_RATIONAL) -> Distribution:
    sup = _as_support(support)
    weights = simplex_weights(rng, len(sup), mode)
    return Distribution(support=sup, probabilities=dict(zip(sup.labels, weights)), mode=mode)


def random_joint(supports: SupportsInput, seed: int, mode: str = MODE_RATIONAL) -> JointDistribution:
    """Simplex-uniform joint table over the product of the supports, deterministic in `seed`."""
    sups = normalize_supports(supports)
    cells = list(itertools.product(*(sups[var].labels for var in VARIABLES)))
    weights = simplex_weights(make_rng(seed, "joint"), len(cells), mode)
    return make_joint(sups, dict(zip(cells, weights)), mode)


def random_kernel(supports: SupportsInput, seed: int, mode: str = MODE_RATIONAL) -> ModelKernel:
    """Independent simplex-uniform Yp row for every (yo, z)."""
    sups = normalize_supports(supports)
    rng = make_rng(seed, "kernel")
    rows = {
        (yo, z): random_distribution(sups[VAR_YP], rng, mode)
        for yo in sups[VAR_YO]
        for z in GROUPS
    }
    return ModelKernel(yp_support=sups[VAR_YP], rows=rows)


def mix(p: Distribution, q: Distribution, weight: Number) -> Distribution:
    """weight * p + (1 - weight) * q over the union of the supports."""
    support = p.support.union(q.support)
    exact = p.mode == MODE_RATIONAL and q.mode == MODE_RATIONAL and is_exact(weight)
    mode = MODE_RATIONAL if exact else MODE_FLOAT
    w = to_mode(weight, mode)
    probs = {}
    for label in support:
        value = w * to_mode(p.prob(label), mode) + (1 - w) * to_mode(q.prob(label), mode)
        if value > 0:
            probs[label] = value
    return Distribution(support=support, probabilities=probs, mode=mode)


def point_mass(support: object, label: object, mode: str = MODE_RATIONAL) -> Distribution:
    sup = _as_support(support)
    return make_distribution(sup, {label: 1}, mode)
