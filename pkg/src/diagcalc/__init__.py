"""Exact combinatorial calculus of boson normal ordering and diagram algebras.

The package has five layers:

- :mod:`diagcalc.weyl` -- normal ordering in the two-generator Weyl algebra,
  generalized Stirling matrices, rook boards of words;
- :mod:`diagcalc.egf` -- truncated exponential generating functions over the
  rationals, row-finite matrix transforms, substitution matrices and their
  one-parameter (including fractional) powers;
- :mod:`diagcalc.partitions` -- set partitions, types, Faa di Bruno
  coefficients, complete Bell polynomials, intersection matrices;
- :mod:`diagcalc.diag` -- packed matrices and diagram classes with the star
  product, the two subset coproducts, counit and antipode;
- :mod:`diagcalc.verify` -- brute-force cross-oracles (two independent
  expansions of the same identity, diagram multiplicities, axiom suite).

All arithmetic is exact: integers and :class:`fractions.Fraction`.
"""

from .errors import BoundError, ParseError
from .weyl import (
    NormalForm,
    RookBoard,
    StirlingMatrix,
    WeylWord,
    excess,
    normal_order,
    normal_order_by_rewriting,
    parse_word,
    rook_board,
    rook_normal_form,
    rook_numbers,
    stirling_matrix,
)
from .egf import (
    Egf,
    RowFiniteMatrix,
    SubstitutionMatrix,
    apply_matrix,
    exponential_formula,
    hadamard,
    matrix_log,
    one_param_power,
    parse_series,
    substitution_matrix,
)
from .partitions import (
    OrderedSetPartition,
    PartitionType,
    SetPartition,
    complete_bell,
    enumerate_ordered_partitions,
    enumerate_partitions,
    faa_di_bruno,
    intersection_matrix,
    matrix_class,
    type_of,
)
from .diag import (
    DiagElement,
    Diagram,
    EMPTY_DIAGRAM,
    EMPTY_MATRIX,
    Monomial,
    PackedMatrix,
    TensorElement,
    antipode,
    bitype,
    canonicalize,
    counit,
    delta_bs,
    delta_ws,
    diagrams_of_weight,
    double_variables,
    format_matrix,
    monomial,
    pack,
    packed_matrices_of_weight,
    parse_matrix,
    star,
    to_dot,
)
from .verify import (
    BiPolynomial,
    HopfReport,
    diagram_multiplicities,
    expand_by_diagrams,
    expand_direct,
    hopf_axiom_suite,
    multiplicity,
)

__version__ = "0.1.0"
