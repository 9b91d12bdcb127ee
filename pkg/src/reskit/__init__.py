"""Toolkit for layered resolution refutation statements, their
relativizations, constructive refutations of the reflection principle,
decision-tree machinery and refutation auditing."""

from .core import (Clause, Cnf, KDnf, Lit, clause, neg, pos,
                   assignments_compatible, restrict_cnf, restrict_dnf, resolve)
from .encodings import (ParamSet, RefVar, gen_php, gen_ref_f, gen_ref_nr,
                        gen_rkref_f, gen_rkref_nr, gen_sat, gamma_assignment,
                        tau_substitution, apply_substitution, home_pair,
                        mentioned_pairs, reflection_conjunction)

__all__ = [
    "Clause", "Cnf", "KDnf", "Lit", "clause", "neg", "pos",
    "assignments_compatible", "restrict_cnf", "restrict_dnf", "resolve",
    "ParamSet", "RefVar", "gen_php", "gen_ref_f", "gen_ref_nr",
    "gen_rkref_f", "gen_rkref_nr", "gen_sat", "gamma_assignment",
    "tau_substitution", "apply_substitution", "home_pair",
    "mentioned_pairs", "reflection_conjunction",
]
