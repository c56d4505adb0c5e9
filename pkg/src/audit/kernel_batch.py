"""
Vectorized premise kernels for the accuracy-ceiling suites.

A batch holds `count` kernels in one float array of shape
(count, 2, |Yo|, |Yp|): axis 1 is the group Z, rows follow the canonical Yo
order and columns the Yp labels of the batch. Scoring a batch is one einsum
against the float (Z, Yo, Yc) law of the base distribution, so hundreds of
kernels cost about as much as one exact apply_model.

Implements:
    - base_arrays (float view of a base distribution)
    - dem_parity_kernel_batch (shared output law per kernel, passes demographic parity)
    - alpha_disparity_kernel_batch (random rows shrunk into the α budget)
    - batch_output_laws / batch_output_disparity / batch_construct_accuracy
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from src.audit.arithmetic import Label, Number
from src.audit.probability import joint_marginal
from src.config.constants import GROUPS, VAR_YC, VAR_YO, VAR_Z
from src.models.errors import EmptyGroup, InvalidParameter
from src.models.probability import JointDistribution, Support

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BaseArrays:
    """
    Float view of a base distribution.

    observed[z, i]     = Pr[Yo = yo_i | Z = z]
    agreement[z, i, j] = Pr[Yo = yo_i, Yc = yp_j | Z = z]  (zero without a construct)
    """

    yo_labels: Tuple[Label, ...]
    yp_labels: Tuple[Label, ...]
    observed: np.ndarray
    agreement: np.ndarray

    def observed_disparity(self) -> float:
        return float(0.5 * np.abs(self.observed[0] - self.observed[1]).sum())


def base_arrays(dist: JointDistribution, yp_labels: Sequence[object]) -> BaseArrays:
    """Float group laws of `dist` with Yp columns in canonical order of `yp_labels`."""
    yo = tuple(dist.support(VAR_YO).labels)
    yp = tuple(Support.of(yp_labels).labels)
    yo_index = {label: i for i, label in enumerate(yo)}
    yp_index = {label: j for j, label in enumerate(yp)}

    observed = np.zeros((len(GROUPS), len(yo)))
    agreement = np.zeros((len(GROUPS), len(yo), len(yp)))
    with_construct = dist.construct_available
    variables = [VAR_Z, VAR_YO, VAR_YC] if with_construct else [VAR_Z, VAR_YO]
    for key, p in joint_marginal(dist, variables).items():
        z, i = int(key[0]), yo_index[key[1]]
        observed[z, i] += float(p)
        if with_construct and key[2] in yp_index:
            agreement[z, i, yp_index[key[2]]] += float(p)

    mass = observed.sum(axis=1)
    for z in GROUPS:
        if mass[z] <= 0:
            raise EmptyGroup(z)
    return BaseArrays(
        yo_labels=yo,
        yp_labels=yp,
        observed=observed / mass[:, None],
        agreement=agreement / mass[:, None, None],
    )


# ======================================================================
# Samplers
# ======================================================================

def _north_west_batch(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """
    North-west couplings of row-aligned mass vectors a (count, n) and b (count, m).

    Cell (i, j) carries the overlap of the cumulative intervals of a_i and b_j.
    """
    upper_a = np.cumsum(a, axis=1)
    upper_b = np.cumsum(b, axis=1)
    lower_a = upper_a - a
    lower_b = upper_b - b
    flow = np.minimum(upper_a[:, :, None], upper_b[:, None, :]) - np.maximum(lower_a[:, :, None], lower_b[:, None, :])
    return np.clip(flow, 0.0, None)


def _random_orders(rng: np.random.Generator, count: int, size: int) -> np.ndarray:
    return np.argsort(rng.random((count, size)), axis=1)


def dem_parity_kernel_batch(arrays: BaseArrays, rng: np.random.Generator, count: int) -> np.ndarray:
    """
    `count` random kernels, each passing demographic parity on the base.

    Per kernel one output law π is drawn; per group the rows mix π with a
    north-west coupling of Yo|Z=z onto π in random label orders, so the
    output law of both groups is π.
    """
    if count < 1:
        raise InvalidParameter(f"count must be >= 1, got {count}")
    n_yo, n_yp = len(arrays.yo_labels), len(arrays.yp_labels)
    pi = rng.dirichlet(np.ones(n_yp), size=count)
    kernels = np.empty((count, len(GROUPS), n_yo, n_yp))

    for z in GROUPS:
        obs = np.broadcast_to(arrays.observed[z], (count, n_yo))
        order_o = _random_orders(rng, count, n_yo)
        order_p = _random_orders(rng, count, n_yp)
        flow = _north_west_batch(np.take_along_axis(obs, order_o, axis=1), np.take_along_axis(pi, order_p, axis=1))
        # back to canonical label order
        flow = np.take_along_axis(flow, np.argsort(order_o, axis=1)[:, :, None], axis=1)
        flow = np.take_along_axis(flow, np.argsort(order_p, axis=1)[:, None, :], axis=2)

        mass = arrays.observed[z][None, :, None]
        rows = np.broadcast_to(pi[:, None, :], flow.shape).copy()
        np.divide(flow, mass, out=rows, where=mass > 0)
        rows /= rows.sum(axis=2, keepdims=True)
        weight = rng.random(count)[:, None, None]
        kernels[:, z] = weight * rows + (1 - weight) * pi[:, None, :]
    return kernels


def alpha_disparity_kernel_batch(
    arrays: BaseArrays,
    alpha: Number,
    rng: np.random.Generator,
    count: int,
) -> np.ndarray:
    """
    `count` random kernels, each passing the α-disparity test on the base.

    Random rows K are shrunk toward a constant row π with
    λ = min(1, α·tv(Yo..) / tv_K), halved at random for half of the batch.
    """
    if count < 1:
        raise InvalidParameter(f"count must be >= 1, got {count}")
    n_yo, n_yp = len(arrays.yo_labels), len(arrays.yp_labels)
    raw = rng.dirichlet(np.ones(n_yp), size=(count, len(GROUPS), n_yo))
    spread = batch_output_disparity(arrays, raw)
    budget = float(alpha) * arrays.observed_disparity()

    lam = np.ones(count)
    over = spread > budget
    lam[over] = budget / spread[over]
    shrink = rng.random(count) < 0.5
    lam = np.where(shrink, lam * rng.random(count), lam)

    pi = rng.dirichlet(np.ones(n_yp), size=count)
    return lam[:, None, None, None] * raw + (1 - lam)[:, None, None, None] * pi[:, None, None, :]


# ======================================================================
# Scores
# ======================================================================

def batch_output_laws(arrays: BaseArrays, kernels: np.ndarray) -> np.ndarray:
    """(count, 2, |Yp|): Pr[Yp | Z=z] under every kernel."""
    return np.einsum("zi,kzij->kzj", arrays.observed, kernels)


def batch_output_disparity(arrays: BaseArrays, kernels: np.ndarray) -> np.ndarray:
    laws = batch_output_laws(arrays, kernels)
    return 0.5 * np.abs(laws[:, 0] - laws[:, 1]).sum(axis=1)


def batch_construct_accuracy(arrays: BaseArrays, kernels: np.ndarray) -> np.ndarray:
    """½ Σ_z Pr[Yp = Yc | Z=z] for every kernel."""
    return 0.5 * np.einsum("zij,kzij->k", arrays.agreement, kernels)
