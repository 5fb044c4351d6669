"""Weighted Orlicz convolution algebras on ascending chains of finite groups.

Desk-scale computability for the harmonic analysis of locally compact groups
that are increasing unions of compact open subgroups: weight constructions
and their axioms, Orlicz/Luxemburg norms, exact spectra and Gelfand
spectral-radius sequences, and a smooth periodic functional calculus with an
independent spectral oracle.
"""

__version__ = "0.1.0"

from .groups import (GroupChain, CyclicSumChain, LeptinHulanickiChain,
                     ShellModel, SizeError, ValidationError,
                     build_cyclic_sum, build_leptin_hulanicki, standardize,
                     shell_measures)
from .young import (YoungFunction, UnsupportedYoungError, p_power, exp_minus,
                    cosh_minus, xlog, delta2_constant,
                    young_inequality_margin)
from .weights import (Weight, ZWeight, SummableSeq, trivial_weight,
                      radial_weight, sharpen, sharpen_p, variation,
                      grs_sequence, uniform_grs_weight, lq_membership,
                      wfq_weight, geometric_seq, power_seq,
                      nonsubadditive_example, nonsubadd_witness_ratios,
                      check_axioms)
from .norms import (FinSuppFun, l1_norm, luxemburg_norm, orlicz_norm,
                    orlicz_norm_dual_sample, holder_sides)
from .convalg import (NormTag, norm_value, convolve, conv_power, involution,
                      is_self_adjoint, translate, random_finsupp,
                      regular_rep, pullback, spectrum_exact,
                      spectrum_general, spectral_radius, gelfand_sequence,
                      u_series, u_exact, desk_bound, growth_profile,
                      inequality_suite, radial_majorant_check)
from .calculus import (AGammaFunction, plateau, pointwise_product,
                       apply_series, apply_spectral, approx_identity_table)

__all__ = [name for name in dir() if not name.startswith("_")]
