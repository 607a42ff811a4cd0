"""Grover-based eps-error algorithms for symmetric Boolean functions and their approximate degrees."""
from .branching import BranchTree, Dist, ResourceError, run_enumerated, run_sampled
from .degree import (approx_degree, lower_bound_check, minimax_error, paturi_ratio, theorem_band,
                     upper_bound_check)
from .grover import (PhaseOracle, SearchState, eps_error_grover, exact_grover, find_all, grover_iterate,
                     success_probability, usual_grover)
from .polyx import (MultilinearPoly, UnivariatePoly, acceptance_surface, exact_degree, mobius_transform,
                    poly_degree, symmetrize, univariate_degree)
from .qsym import (PromiseFunction, WeightClassification, classify_weight, compute_promise, compute_symmetric,
                   query_budget)
from .symfun import (Restriction, SymmetricFunction, embed_or, jump_parameter, make_named, restrict)

__version__ = "0.1.0"
