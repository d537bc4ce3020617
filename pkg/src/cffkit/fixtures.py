"""Bundled example data.

The walkthrough matrix is a hand-checked 2-cover-free 9x12 design shipped as
literal data (it is input to the decoder demos and tests, not the output of
any construction here).  With items 3 and 12 defective (1-based), tests
3, 5, 7, 8, 9 fail, which is the outcome string below.
"""

from importlib import resources

from .cff import IncidenceMatrix, Outcome

WALKTHROUGH_OUTCOME = "001010111"
WALKTHROUGH_DEFECTIVES_1BASED = (3, 12)


def walkthrough_text() -> str:
    return (
        resources.files("cffkit").joinpath("data/walkthrough_2cff_9_12.txt").read_text()
    )


def walkthrough_matrix() -> IncidenceMatrix:
    matrix = IncidenceMatrix.from_text(walkthrough_text())
    matrix.provenance = {"construction": "external", "name": "walkthrough_2cff_9_12"}
    return matrix


def walkthrough_outcome() -> Outcome:
    return Outcome.from_string(WALKTHROUGH_OUTCOME)


def walkthrough_path() -> str:
    """Filesystem path of the bundled matrix file (for CLI use)."""
    return str(resources.files("cffkit").joinpath("data/walkthrough_2cff_9_12.txt"))
