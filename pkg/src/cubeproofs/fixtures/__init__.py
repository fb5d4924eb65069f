"""Bundled reference data.

Proof-words (all verified by the test suite):

``cwzw_8rel_xyz.pw``
    proves C^{WZw} as 8 conjugated cubes times an element of <x,y,z>,
    where C = [[x,y],[z,w]]; its residue is the 16-letter subgroup word
    beta = YZXzyxZxzXzXYxyZ.
``cwzw_14cubes_a.pw`` / ``cwzw_14cubes_b.pw``
    two pure products of 14 conjugated cubes equal to C^{WZw}.
``c_15cubes.pw``
    a product of 15 conjugated cubes equal to C itself; its base-words
    cover the 15 non-empty generator subsets.

Presentations:

``b13.pres`` / ``b23.pres`` / ``b33.pres``
    cube presentations of the free exponent-3 groups of ranks 1..3
    (orders 3, 27, 2187).
``b43_mod_xyz.pres``
    a randomly found cube presentation of the rank-4 group together with
    the subgroup <x,y,z>; enumerates to index 2187.
"""

from __future__ import annotations

from importlib.resources import files
from pathlib import Path

from ..presentations import Presentation, SubgroupSpec, read_presentation
from ..proofwords import ProofWord, parse_proofword

PROOFWORDS = (
    "cwzw_8rel_xyz.pw",
    "cwzw_14cubes_a.pw",
    "cwzw_14cubes_b.pw",
    "c_15cubes.pw",
)
PRESENTATIONS = ("b13.pres", "b23.pres", "b33.pres", "b43_mod_xyz.pres")


def fixture_path(name: str) -> Path:
    path = Path(str(files(__package__).joinpath(name)))
    if not path.exists():
        raise FileNotFoundError(f"no bundled fixture named {name!r}")
    return path


def load_proofword(name: str) -> ProofWord:
    return parse_proofword(fixture_path(name).read_text())


def load_presentation(name: str) -> tuple[Presentation, SubgroupSpec | None]:
    return read_presentation(fixture_path(name))


def burnside_presentation(rank: int) -> Presentation:
    """Bundled cube presentation of the free exponent-3 group of this rank."""
    if rank not in (1, 2, 3):
        raise ValueError("bundled presentations cover ranks 1..3")
    pres, _ = load_presentation(f"b{rank}3.pres")
    return pres
