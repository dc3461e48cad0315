"""Order-3, 4 and 6 Dirichlet characters from residue symbols in Z[i] and Z[omega].

Exact ring arithmetic and residue symbols, Gauss sums, L-values, the
main-term constant C_j, double Dirichlet series checks, and the smoothed
first moment of central L-values over each family.
"""

from .characters import PrimitiveCharacter, enumerate_characters, evaluate, oracle_count
from .constants import ConstantBundle, main_constant
from .gauss_sums import gauss_gK, tau, verify_identity
from .lfun import LValue, central_value, dirichlet_L, fe_residual, hurwitz_zeta
from .moment_harness import MomentRow, first_moment, nonvanishing_report, scan
from .power_residue import RootOfUnity, residue_symbol, residue_symbol_fast
from .quadratic_ring import EISENSTEIN, GAUSSIAN, QInt, Ring, factor, normalize_primary, parse_qint

__version__ = "0.1.0"

__all__ = [
    "ConstantBundle", "EISENSTEIN", "GAUSSIAN", "LValue", "MomentRow", "PrimitiveCharacter", "QInt",
    "Ring", "RootOfUnity", "central_value", "dirichlet_L", "enumerate_characters", "evaluate", "factor",
    "fe_residual", "first_moment", "gauss_gK", "hurwitz_zeta", "main_constant", "nonvanishing_report",
    "normalize_primary", "oracle_count", "parse_qint", "residue_symbol", "residue_symbol_fast", "scan",
    "tau", "verify_identity",
]
