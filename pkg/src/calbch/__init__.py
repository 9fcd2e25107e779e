"""Exact computer algebra for commutative automorphic Lie triple systems and their formal loops."""
from .linear import LinComb, Rational, parse_rat, rat, rat_str
from .series import BiSeries, series_arith, series_coeff, series_div_exact, series_exp, series_log
from .calts import (A, B, E, FREE2, Free2, FreeKey, LtsStructure, adjoint_exp_triple, check_ca_axioms,
                    derived_series, free2_dim, free2_triple, nested_triple)
from .amodel import a_model_triple
from .env import (EnvAlgebra, EnvElement, LieStructure, antipode, coproduct, env_exp, env_log, free2_lie,
                  pbw_mul, primitive_part, standard_embedding)
from .bruck import BruckEnvelope, loop_jet_F
from .tables import CoeffTable, emit_table
from .bch import (alpha_recursion, bch_dot_direct, bch_symbolic, beta_from_alpha, beta_genfun, cross_validate,
                  xi_series)
from .matrix_model import matrix_model
from .identities import verify_identity

__version__ = "0.1.0"
