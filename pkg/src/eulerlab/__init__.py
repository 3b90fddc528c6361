"""Numerical Euler products, prime zeta continuation and Goldbach-Waring counts."""

from .core import BaseSequence, EvalReport, SignSequence, TruncationPolicy
from .errors import (
    BranchGuardError,
    DegenerateInputError,
    DomainError,
    EulerlabError,
    GridResolutionError,
    PoleError,
    ResourceLimitError,
    SingularFactorError,
)
from .goldbach import (
    PowerSeriesTrunc,
    QuadSpec,
    RepTable,
    brute_force_counts,
    gk_series,
    goldbach_scan,
    majorization_probe,
    mellin_residual,
    power_counts,
)
from .identities import (
    SplitTree,
    assoc_defect,
    catalan,
    even_odd_quotient,
    interlace_check,
    jacobi_defect,
    leibniz_div,
    skew_bracket,
    split_children,
    split_factorization_residual,
)
from .primes import PrimeTable, SubseqLabel, mobius, nth_prime, residue_subsequence, sieve
from .products import (
    GeneralFactor,
    continued_product_eval,
    convergence_scan,
    derive_convergence_params,
    euler_product_eval,
    general_product_eval,
    regularized_exp_identity_residual,
    truncation_discrepancy_check,
)
from .series import (
    alternating_eval,
    dirichlet_eval,
    gamma_ref,
    prime_zeta_direct,
    prime_zeta_mobius,
    z_deformed_prime_zeta,
    zeta_ref,
)

__version__ = "0.1.0"
