"""
Variable layouts of the lifted vector z.

Localization: z = [c_0, t_0, ..., c_{N-1}, t_{N-1}, w] with c_i = vec(C_i)
(column-major). SLAM appends world landmarks m_k and one substitution block
m_i^k per landmark edge before w.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Sequence, Tuple

BLOCK_SIZES = {
    "rotation": 9,
    "translation": 3,
    "landmark": 3,
    "substitution": 3,
    "homogenizing": 1,
}


class BlockKind(str, Enum):
    ROTATION = "rotation"
    TRANSLATION = "translation"
    LANDMARK = "landmark"
    SUBSTITUTION = "substitution"
    HOMOGENIZING = "homogenizing"


@dataclass(frozen=True)
class Block:
    name: str
    kind: BlockKind
    start: int

    @property
    def size(self) -> int:
        return BLOCK_SIZES[self.kind.value]

    @property
    def stop(self) -> int:
        return self.start + self.size


class VariableLayout:
    """
    Ordered, contiguous blocks of the lifted variable.

    Args:
        blocks (Sequence[tuple[str, BlockKind]]): Block names and kinds in
            order; exactly one homogenizing block, placed last.
    """

    def __init__(self, blocks: Sequence[Tuple[str, BlockKind]]):
        kinds = [BlockKind(k) for _, k in blocks]
        n_homog = kinds.count(BlockKind.HOMOGENIZING)
        if n_homog != 1 or kinds[-1] != BlockKind.HOMOGENIZING:
            raise ValueError("layout needs exactly one homogenizing block, placed last")
        self.blocks: List[Block] = []
        self._by_name: Dict[str, Block] = {}
        start = 0
        for (name, _), kind in zip(blocks, kinds):
            if name in self._by_name:
                raise ValueError(f"duplicate block name {name}")
            block = Block(name, kind, start)
            self.blocks.append(block)
            self._by_name[name] = block
            start = block.stop
        self.dim = start

    def __eq__(self, other: object) -> bool:
        return isinstance(other, VariableLayout) and self.blocks == other.blocks

    def __repr__(self) -> str:
        return f"VariableLayout(dim={self.dim}, blocks={len(self.blocks)})"

    def __getitem__(self, name: str) -> Block:
        return self._by_name[name]

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def slice(self, name: str) -> slice:
        block = self._by_name[name]
        return slice(block.start, block.stop)

    @property
    def w(self) -> int:
        return self.dim - 1

    @property
    def n_poses(self) -> int:
        return sum(b.kind == BlockKind.ROTATION for b in self.blocks)

    def rotation(self, i: int) -> int:
        return self._by_name[f"c{i}"].start

    def translation(self, i: int) -> int:
        return self._by_name[f"t{i}"].start

    def landmark(self, k: int) -> int:
        return self._by_name[f"m{k}"].start

    def substitution(self, i: int, k: int) -> int:
        return self._by_name[f"m{i}_{k}"].start

    def c_entry(self, i: int, row: int, col: int) -> int:
        """Index of C_i[row, col] (column-major vec)."""
        return self.rotation(i) + row + 3 * col

    def describe(self) -> List[dict]:
        return [
            {"name": b.name, "kind": b.kind.value, "start": b.start, "size": b.size}
            for b in self.blocks
        ]

    @classmethod
    def from_description(cls, blocks: Sequence[dict]) -> "VariableLayout":
        return cls([(b["name"], BlockKind(b["kind"])) for b in blocks])


def pose_blocks(n_poses: int) -> List[Tuple[str, BlockKind]]:
    blocks: List[Tuple[str, BlockKind]] = []
    for i in range(n_poses):
        blocks.append((f"c{i}", BlockKind.ROTATION))
        blocks.append((f"t{i}", BlockKind.TRANSLATION))
    return blocks


def localization_layout(n_poses: int) -> VariableLayout:
    return VariableLayout(pose_blocks(n_poses) + [("w", BlockKind.HOMOGENIZING)])


def rotation_layout() -> VariableLayout:
    """Layout of a single rotation lift (vec(C), w)."""
    return VariableLayout([("c0", BlockKind.ROTATION), ("w", BlockKind.HOMOGENIZING)])


def slam_layout(
    n_poses: int, n_landmarks: int, edges: Sequence[Tuple[int, int]]
) -> VariableLayout:
    """
    Layout for landmark SLAM.

    Args:
        n_poses (int): Number of poses.
        n_landmarks (int): Number of world landmarks.
        edges (Sequence[tuple[int, int]]): (pose, landmark) pairs, one
            substitution block each, in the given order.
    """
    blocks = pose_blocks(n_poses)
    blocks += [(f"m{k}", BlockKind.LANDMARK) for k in range(n_landmarks)]
    blocks += [(f"m{i}_{k}", BlockKind.SUBSTITUTION) for i, k in edges]
    blocks.append(("w", BlockKind.HOMOGENIZING))
    return VariableLayout(blocks)
