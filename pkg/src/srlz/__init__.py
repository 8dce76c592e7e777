"""Successive-refinement and two-description LZ coding for individual
sequences, with the finite-state converse bounds and their verification
suites.

The public surface groups as:

- sequences and plain LZ: `Alphabet`, `Sequence`, `parse`, `rho_lz`,
  `lz_encode`, `lz_decode`, `product_sequence`
- conditional LZ: `joint_parse`, `rho_cond`, `cond_encode`, `cond_decode`
- two-stage refinement: `sr_encode`, `sr_decode_stage1`, `sr_decode_full`,
  `select_reproductions`, `hamming_spec`
- two descriptions: `egc_encode`/`zb_encode` and their decoders,
  `md_outer_region`, `split_rates`
- bounds and regions: `region_for_pair`, `blockwise_region`,
  `sr_outer_region`, `frontier`
- verification: `srlz.verify.SUITES`, `srlz.fsm`, `srlz.empirics`
"""

from . import bounds, corpus, empirics, fsm, mdc, regions, sr_codec, verify
from .cond_lz import cond_decode, cond_encode, joint_parse, rho_cond
from .container import (
    BudgetExceededError,
    InfeasibleError,
    ModeMismatchError,
    PointerRangeError,
    SideInfoMismatchError,
    StreamFormatError,
)
from .bitio import TruncatedStreamError
from .lz_core import (
    Alphabet,
    Sequence,
    lz_decode,
    lz_encode,
    parse,
    product_sequence,
    rho_lz,
)
from .mdc import (
    MdRegion,
    egc_decode0,
    egc_decode1,
    egc_decode2,
    egc_encode,
    empirical_mi,
    md_outer_region,
    split_rates,
    zb_decode0,
    zb_decode1,
    zb_decode2,
    zb_encode,
)
from .regions import (
    HalfPlaneRegion,
    RatePoint,
    RegionUnion,
    SearchBudget,
    blockwise_region,
    frontier,
    region_for_pair,
    sr_outer_region,
)
from .sr_codec import (
    DistortionSpec,
    PerLetterDistortion,
    SrEncoded,
    hamming_spec,
    select_reproductions,
    sr_decode_full,
    sr_decode_stage1,
    sr_encode,
)

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "Sequence",
    "parse",
    "rho_lz",
    "lz_encode",
    "lz_decode",
    "product_sequence",
    "joint_parse",
    "rho_cond",
    "cond_encode",
    "cond_decode",
    "sr_encode",
    "sr_decode_stage1",
    "sr_decode_full",
    "select_reproductions",
    "hamming_spec",
    "DistortionSpec",
    "PerLetterDistortion",
    "SrEncoded",
    "egc_encode",
    "egc_decode0",
    "egc_decode1",
    "egc_decode2",
    "zb_encode",
    "zb_decode0",
    "zb_decode1",
    "zb_decode2",
    "empirical_mi",
    "MdRegion",
    "md_outer_region",
    "split_rates",
    "HalfPlaneRegion",
    "RatePoint",
    "RegionUnion",
    "SearchBudget",
    "region_for_pair",
    "blockwise_region",
    "sr_outer_region",
    "frontier",
    "StreamFormatError",
    "PointerRangeError",
    "ModeMismatchError",
    "SideInfoMismatchError",
    "TruncatedStreamError",
    "BudgetExceededError",
    "InfeasibleError",
    "bounds",
    "corpus",
    "empirics",
    "fsm",
    "mdc",
    "regions",
    "sr_codec",
    "verify",
]
