"""Published census rows and isometry matrices that runs are compared against."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class CensusRow:
    title: str
    preset: str | None
    order: int
    signature: tuple[int, int, int, int]
    genus: int
    classes: int | None
    orbit_sizes: tuple[int, ...] | None
    slow: bool = False

    @property
    def computed(self) -> bool:
        return self.preset is not None and self.classes is not None


CENSUS = (
    CensusRow("Sym(3)", "sym3", 6, (2, 2, 3, 3), 2, 2, (2,)),
    CensusRow("Cyclic(13)", "cyclic:13", 13, (13, 13, 13, 13), 12, 133,
              (3, 4, 6, 12, 12, 12, 12, 12, 12, 24, 24)),
    CensusRow("SG(21,1)", "sg21_1", 21, (3, 3, 7, 7), 12, 12, (6, 6)),
    CensusRow("Alt(5)", "alt5", 60, (2, 2, 2, 3), 6, 9, (9,)),
    CensusRow("Alt(5)", "alt5", 60, (2, 3, 3, 5), 20, 20, (20,)),
    CensusRow("Alt(5)", "alt5", 60, (5, 5, 5, 5), 37, 47, (6, 10, 15, 16)),
    CensusRow("PSL(2,7)", "psl2_7", 168, (2, 2, 3, 3), 29, 15, (15,), slow=True),
    CensusRow("PSL(2,7)", "psl2_7", 168, (7, 7, 7, 7), 121, 95, (6, 7, 16, 24, 42), slow=True),
    # listed for completeness; far beyond desk scale
    CensusRow("PSL(2,11)", None, 660, (5, 5, 5, 5), 397, 4906, None, slow=True),
)

# (preset, periods, cut) -> matrix in class-index order, cayley-distance selection
MATRICES = {
    ("sym3", (2, 2, 3, 3), "E4"): (
        (6, 2),
        (1, 6),
    ),
    ("alt5", (2, 2, 2, 3), "E4"): (
        (60, 36, 36, 35, 35, 35, 36, 36, 36),
        (37, 60, 37, 39, 42, 37, 37, 42, 39),
        (35, 35, 60, 44, 44, 35, 35, 35, 35),
        (36, 36, 42, 60, 42, 36, 36, 36, 36),
        (33, 44, 44, 44, 60, 33, 33, 44, 33),
        (37, 34, 37, 37, 34, 60, 34, 34, 37),
        (38, 38, 36, 36, 36, 36, 60, 38, 38),
        (38, 44, 38, 38, 44, 38, 38, 60, 38),
        (35, 39, 35, 39, 35, 35, 35, 35, 60),
    ),
}


def published_matrix(preset: str, periods, cut_id: str):
    return MATRICES.get((preset, tuple(periods), cut_id))


def matrix_diff(computed, published) -> list[tuple[int, int, int | None, int]]:
    """Cells where the computed matrix differs: (row, column, computed, published)."""
    if len(computed) != len(published):
        raise ValueError(f"Matrix sizes differ: {len(computed)} vs {len(published)}")
    return [
        (i, j, computed[i][j], expected)
        for i, row in enumerate(published)
        for j, expected in enumerate(row)
        if computed[i][j] != expected
    ]
