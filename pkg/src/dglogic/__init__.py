"""Discussion graphs as models of first-order logic.

Annotated graphs carry string labels on nodes and edges; skeleton graphs may
use numbered placeholders and act as predicate denotations. On top of the
model checker sit an argumentation layer with equivalence-aware extension
semantics, generators for the formula families characterising them, and a
quantifier-expansion pipeline producing DIMACS CNF.
"""

from .characterise import (FAMILIES, MAX_GENERATION_SIZE, ValidationReport,
                           const_names, cross_validate, f_adm, f_cmp, f_cmps,
                           f_distinct, f_extension, f_k_cf, f_k_df, f_kl_cl,
                           f_kn_wcf, f_kn_wdf, std_environment)
from .dung import (EquivDungModel, ExtensionSpec, closure_sim, defends,
                   enumerate_extensions, grounded_via_lfp, is_admissible,
                   is_closed, is_conflict_free, is_extension, random_model)
from .errors import (ArityMismatch, BoundExceeded, CollisionError,
                     DecodeError, DegreeGapError, DglError, InvalidModelError,
                     MissingVar, NotClosedError, ParseError, TableMiss,
                     UnboundVariable, UnknownSymbol)
from .graphs import (AnnotatedGraph, Placeholder, SkeletonGraph, degree_of,
                     graph_from_dict, graph_to_dict, instantiates, leq,
                     match_tuples, substitute)
from .grounding import (decode_atom, encode_atom, eval_prop, expansion_bound,
                        ground, induced_valuation, prop_size, to_dimacs,
                        vars_of)
from .semantics import (Evaluation, Interpretation, Model, ModelChecker,
                        eval_term, eval_typed_graph, interpretation_from_dict,
                        interpretation_to_dict, satisfies, satisfies_closed)
from .syntax import (BOTTOM, TOP, And, Apply, Atom, Bottom, Equal, Exists,
                     Forall, Formula, Implies, Not, Or, SymbolRef, Term, Top,
                     TypedGraph, Variable, atom, big_and, big_or, constant,
                     format_formula, format_term, formula_size, free_vars,
                     is_well_formed, parse_formula, parse_graph_literal,
                     parse_term, symbols_of)

__version__ = "0.1.0"

__all__ = [
    "AnnotatedGraph", "Placeholder", "SkeletonGraph", "degree_of",
    "graph_from_dict", "graph_to_dict", "instantiates", "leq", "match_tuples",
    "substitute",
    "And", "Apply", "Atom", "BOTTOM", "Bottom", "Equal", "Exists", "Forall",
    "Formula", "Implies", "Not", "Or", "SymbolRef", "TOP", "Term", "Top",
    "TypedGraph", "Variable", "atom", "big_and", "big_or", "constant",
    "format_formula", "format_term", "formula_size", "free_vars",
    "is_well_formed", "parse_formula", "parse_graph_literal", "parse_term",
    "symbols_of",
    "Evaluation", "Interpretation", "Model", "ModelChecker", "eval_term",
    "eval_typed_graph", "interpretation_from_dict", "interpretation_to_dict",
    "satisfies", "satisfies_closed",
    "EquivDungModel", "ExtensionSpec", "closure_sim", "defends",
    "enumerate_extensions", "grounded_via_lfp", "is_admissible", "is_closed",
    "is_conflict_free", "is_extension", "random_model",
    "FAMILIES", "MAX_GENERATION_SIZE", "ValidationReport", "const_names",
    "cross_validate", "f_adm", "f_cmp", "f_cmps", "f_distinct", "f_extension",
    "f_k_cf", "f_k_df", "f_kl_cl", "f_kn_wcf", "f_kn_wdf", "std_environment",
    "decode_atom", "encode_atom", "eval_prop", "expansion_bound", "ground",
    "induced_valuation", "prop_size", "to_dimacs", "vars_of",
    "ArityMismatch", "BoundExceeded", "CollisionError", "DecodeError",
    "DegreeGapError", "DglError", "InvalidModelError", "MissingVar",
    "NotClosedError", "ParseError", "TableMiss", "UnboundVariable",
    "UnknownSymbol",
    "__version__",
]
