"""
Random feasible points of lifted problem templates.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from itertools import product

import numpy as np

from src.geometry import Pose, random_rotation
from src.linalg import FloatArray, lifted_outer, vec
from src.problems import (
    BlockKind,
    VariableLayout,
    lift_slam,
    localization_layout,
    rotation_layout,
    slam_layout,
)

log = logging.getLogger(__name__)


class TemplateKind(str, Enum):
    ROTATION = "rotation"
    WAHBA = "wahba"
    TRANSLATION = "translation"
    SLAM = "slam"


@dataclass(frozen=True)
class ProblemTemplate:
    """
    Shape of a lifted problem to sample from.

    Args:
        kind (TemplateKind): Variable structure.
        n_poses (int): Poses (SLAM only).
        n_landmarks (int): Landmarks, each observed by every pose (SLAM only).
        scale (float): Spread of translations and landmarks (m).
    """

    kind: TemplateKind
    n_poses: int = 1
    n_landmarks: int = 2
    scale: float = 1.0

    def layout(self) -> VariableLayout:
        kind = TemplateKind(self.kind)
        if kind == TemplateKind.ROTATION:
            return rotation_layout()
        if kind == TemplateKind.WAHBA:
            return localization_layout(1)
        if kind == TemplateKind.TRANSLATION:
            return VariableLayout(
                [("t0", BlockKind.TRANSLATION), ("w", BlockKind.HOMOGENIZING)]
            )
        edges = list(product(range(self.n_poses), range(self.n_landmarks)))
        return slam_layout(self.n_poses, self.n_landmarks, edges)


@dataclass(frozen=True)
class FeasibleSampleSet:
    """
    Args:
        rows (FloatArray): (count, n(n+1)/2) matrix of svec(z zᵀ).
        layout (VariableLayout): Layout of every z.
        lifts (FloatArray): (count, n) generating vectors z.
    """

    rows: FloatArray
    layout: VariableLayout
    lifts: FloatArray

    @property
    def count(self) -> int:
        return self.rows.shape[0]


def _sample_lift(
    template: ProblemTemplate, layout: VariableLayout, rng: np.random.Generator
) -> FloatArray:
    kind = TemplateKind(template.kind)
    if kind == TemplateKind.TRANSLATION:
        return np.concatenate([template.scale * rng.standard_normal(3), [1.0]])
    if kind == TemplateKind.ROTATION:
        return np.concatenate([vec(random_rotation(rng)), [1.0]])
    if kind == TemplateKind.WAHBA:
        c = random_rotation(rng)
        t = template.scale * rng.standard_normal(3)
        return np.concatenate([vec(c), t, [1.0]])
    poses = [
        Pose(random_rotation(rng), template.scale * rng.standard_normal(3))
        for _ in range(template.n_poses)
    ]
    landmarks = template.scale * rng.uniform(-1.0, 1.0, (template.n_landmarks, 3))
    return lift_slam(poses, landmarks, layout)


def sample_feasible(
    template: ProblemTemplate, n_samples: int, rng: np.random.Generator
) -> FeasibleSampleSet:
    """
    Draw n_samples feasible lifts and their half-vectorized outer products.

    Args:
        template (ProblemTemplate): Problem shape.
        n_samples (int): Number of samples.
        rng (np.random.Generator): Random source.
    """
    layout = template.layout()
    lifts = np.array([_sample_lift(template, layout, rng) for _ in range(n_samples)])
    rows = np.array([lifted_outer(z) for z in lifts])
    log.debug(
        f"Sampled {n_samples} {TemplateKind(template.kind).value} lifts, "
        f"dim={layout.dim}"
    )
    return FeasibleSampleSet(rows=rows, layout=layout, lifts=lifts)
