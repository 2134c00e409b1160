"""Binary sum of digits: exact summatory values and the periodic fluctuations.

The summatory function of s_2(n) grows like (1/2) N log_2 N plus N times a
1-periodic function of log_2 N.  This script recovers both pieces from the
2-dimensional linear representation alone.
"""

import math

from qregular import evaluate, expansion, fourier_coefficients, sample_fluctuations, summatory_rep
from qregular.sequences import binary_sum_of_digits

rep = binary_sum_of_digits()
print("s_2(0..15):", [int(evaluate(rep, n)) for n in range(16)])

# Exact summatory values at huge N cost only O(log N) matrix-vector products.
srep = summatory_rep(rep)
N = 10 ** 30
print(f"sum of s_2(n) for n < 10^30 = {evaluate(srep, N)}")

exp = expansion(rep)
print("\nMain terms (eigenvalue, log power):", exp.term_keys())
print(f"Error term: O(N^{exp.error.exponent:.3f}) with the epsilon convention: {exp.error.epsilon_flag}")
print("Why epsilon:", exp.growth.reason)

estimates = sample_fluctuations(rep, exp, grid_size=64)
log_term = estimates[(2, 1)].row(24)
print(f"\nPhi_(2,1) on the grid at m=24: min {min(v.real for v in log_term):.9f}, "
      f"max {max(v.real for v in log_term):.9f}; 1/(2 ln 2) = {1 / (2 * math.log(2)):.9f}")

print("\nFourier coefficients of Phi_(2,0):")
for index, coefficient, gap in fourier_coefficients(estimates[(2, 0)], 3):
    print(f"  {index:+d}: {coefficient.real:+.6f} {coefficient.imag:+.6f}i   (scale gap {gap:.1e})")
print(f"Known mean: {math.log2(math.pi) / 2 - 1 / (2 * math.log(2)) - 0.25:+.6f}")
