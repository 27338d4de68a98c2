"""Binomial Weyl sums and their arithmetic-archimedean approximations.

Modules:
  exp_sums     complete exponential sums mod q (direct, multiplicative, fast paths)
  weyl         Weyl sums over full/dyadic ranges, second-moment diagnostics
  oscillatory  oscillatory integrals (closed forms and adaptive quadrature)
  approx       divisor-indexed main terms and defect diagnostics
  diophantine  continued fractions, Dirichlet approximation, exponent splitting
  extremal     lower-bound witnesses, sup search, growth-exponent regression
  pde_fractal  dispersive evolution of step data and fractal dimensions
  cli          the `binweyl` command-line front end
"""

__version__ = "0.1.0"
