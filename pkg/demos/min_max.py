"""Simultaneous minimum and maximum: x(n) = x(floor(n/2)) + x(ceil(n/2)) + 2.

The recurrence only holds from n = 3 on (x(1) = 0, x(2) = 1), so the forward
difference h carries two point corrections: h(2n) = h(n) + [n = 1] and
h(2n+1) = h(n) + [n = 0].
"""

from qregular import evaluate, expansion, minmax_fixture, sample_fluctuations
from qregular.summation import summatory_rep

rep, x = minmax_fixture()
print("x(0..16):", x[:17])
print("h matches x(n+1) - x(n) for n < 10^4:",
      all(evaluate(rep, n) == x[n + 1] - x[n] for n in range(0, 10 ** 4, 7)))

exp = expansion(rep)
print("\nMain terms:", exp.term_keys(), f"error exponent {exp.error.exponent:.3f} (+eps)")

est = sample_fluctuations(rep, exp, grid_size=32, m_list=(8, 12, 16, 20, 24))[(2, 0)]
print("\nPhi(0) by scale (x(2^m) = 3 * 2^(m-1) - 2, so Phi(0) -> 3/2):")
for m in est.m_list:
    print(f"  m={m:2d}: {est.value(0, m).real:.9f}")

print("\nPhi on a coarse grid at m=24:")
for i in range(0, 32, 4):
    print(f"  u={est.grid[i]:.3f}: {est.value(i, 24).real:.6f}")

N = 2 ** 40 + 12345
print(f"\nx({N}) = {evaluate(summatory_rep(rep), N)}")
