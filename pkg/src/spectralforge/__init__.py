"""spectralforge: exact product-form Hadamard triples, cyclic tiling
conditions, and numerical verification of self-similar spectral measures.

The package splits into an exact layer (digitsets, cyclotomic, hadamard,
productform, cm_tiling), where every decision is integer arithmetic, and a
numerical layer (measure) for the transforms of the associated self-similar
measures; cli ties both to a single command-line tool.
"""

__version__ = "0.1.0"

from .digitsets import DigitSet, ResidueClassSet, canonicalize, gcd_normalize
from .hadamard import HadamardTriple, find_spectra, verify_triple
from .productform import KStageForm, OneStageForm

__all__ = [
    "DigitSet",
    "ResidueClassSet",
    "HadamardTriple",
    "OneStageForm",
    "KStageForm",
    "canonicalize",
    "gcd_normalize",
    "verify_triple",
    "find_spectra",
    "__version__",
]
