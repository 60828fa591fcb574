"""Exact arithmetic on a number line with infinitesimal and infinite
quantities, plus the small calculus and geometry that run on it.

The core value is a finite formal series in the infinitesimal unit eps
with rational coefficients and rational exponents, truncated to a
relative precision window.  On top of that: a tiny expression language,
differentiation through infinitesimal increments, canonical
rational-form identity checking, and a gallery of worked geometric
examples.
"""

from .calculus import (
    DiffResult,
    NotFinite,
    UnsupportedNode,
    derivative_at,
    differential_quotient,
    product_rule_report,
    symbolic_derivative,
)
from .core import (
    DEFAULT_PRECISION,
    Classification,
    DivisionByZero,
    InfiniteOperand,
    LCError,
    LCNumber,
    NegativeLeadingCoefficient,
    NonSquareLeadingCoefficient,
    add,
    agrees_to_guaranteed_order,
    big_h,
    classify,
    compare,
    eps,
    inverse,
    is_infinitely_close,
    make_monomial,
    make_real,
    mul,
    neg,
    power,
    sqrt,
    standard_part,
    sub,
    tlh_reduce,
)
from .dsl import (
    Expr,
    LexError,
    NonRationalNode,
    ParseError,
    TransferReport,
    UnboundVariable,
    canonicalize,
    evaluate,
    free_variables,
    identities_transfer_check,
    parse_text,
    to_source,
    tokenize,
)
from .gallery import (
    ChainBroken,
    ellipse_parabola_report,
    infinitesimal_equality_report,
    parabola_rows,
    parallel_lines_report,
    verify_conic_chain,
    write_parabola_csv,
)
from .poly import Polynomial, RationalForm
from .report import Claim, GalleryReport, merge_reports

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_PRECISION",
    "Classification",
    "DivisionByZero",
    "InfiniteOperand",
    "LCError",
    "LCNumber",
    "NegativeLeadingCoefficient",
    "NonSquareLeadingCoefficient",
    "add",
    "agrees_to_guaranteed_order",
    "big_h",
    "classify",
    "compare",
    "eps",
    "inverse",
    "make_monomial",
    "make_real",
    "mul",
    "neg",
    "power",
    "sqrt",
    "standard_part",
    "sub",
    "tlh_reduce",
    "is_infinitely_close",
    "Expr",
    "LexError",
    "NonRationalNode",
    "ParseError",
    "TransferReport",
    "UnboundVariable",
    "canonicalize",
    "evaluate",
    "free_variables",
    "identities_transfer_check",
    "parse_text",
    "to_source",
    "tokenize",
    "DiffResult",
    "NotFinite",
    "UnsupportedNode",
    "derivative_at",
    "differential_quotient",
    "product_rule_report",
    "symbolic_derivative",
    "ChainBroken",
    "ellipse_parabola_report",
    "infinitesimal_equality_report",
    "parabola_rows",
    "parallel_lines_report",
    "verify_conic_chain",
    "write_parabola_csv",
    "Polynomial",
    "RationalForm",
    "Claim",
    "GalleryReport",
    "merge_reports",
    "__version__",
]
