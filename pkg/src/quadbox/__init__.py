"""Counting solutions of quadratic-form congruences in boxes.

Exact counters for Q(x,y) = lambda (mod p) over rectangular boxes, the
reduction of any nondegenerate form to a standard norm/product congruence,
its decomposition into generalized Pell equations, lattice-point machinery
for the conics x^2 - D*y^2 = n, and a deterministic experiment harness for
probing the known upper bounds empirically.
"""

from .boxcount import CountResult, count_exact, count_naive
from .conic import (LatticePoint, PellUnit, arc_length, enumerate_in_box_orbit,
                    enumerate_in_box_scan, fundamental_solution,
                    primitive_reduce, solve_xy_in_box, verify_small_arc_lemma)
from .decomp import (NormEquationInstance, PigeonholeData, choose_T, decompose,
                     find_pigeonhole, recompose, solve_instance)
from .harness import (ExperimentRecord, SweepSpec, fit_exponent,
                      parabola_sanity, parse_config, run_pipeline, sweep)
from .modmath import (PrimeModulus, count_class_in_interval, is_prime,
                      legendre, mod_inverse, signed_rep, sqrt_mod)
from .quadform import (AffineMap, Box, QuadraticForm, StandardInstance,
                       discriminant, is_absolutely_irreducible,
                       squarefree_extract, standardize)

__version__ = "0.1.0"
