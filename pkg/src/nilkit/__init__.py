"""Algorithms for finitely generated nilpotent groups given by nilpotent presentations."""
from .builder import (ClassBoundError, FinitePresentation, PresentationConversion, QuotientPresentation,
                      build_nilpotent_presentation, parse_finite_presentation, quotient_presentation)
from .conjugacy import (ConjugacyOutcome, conjugate_commuting_tuples, conjugate_tuples, normalizer,
                        subgroup_conjugacy)
from .cosets import CosetIntersection, coset_intersection, subgroup_intersection
from .homs import Homomorphism, centralizer, conjugacy_element, direct_product, kernel, preimage
from .presentation import (NilpotentPresentation, check_consistency, collect, format_presentation,
                           parse_presentation)
from .subgroups import (FullFormSequence, SubgroupPresentation, full_form, intersect_series, join,
                        max_series_level, membership, series_term, subgroup_presentation)
from .torsion import TorsionData, isolator, torsion_order, torsion_subgroup
from .words import (BinExpWord, ParseError, StraightLineProgram, Word, parse_binexp, parse_slp,
                    parse_word)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
