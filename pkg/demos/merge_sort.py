"""Worst-case comparisons of merge sort via the divide-and-conquer front end.

x(n) = x(floor(n/2)) + x(ceil(n/2)) + n - 1 with x(1) = 0.
"""

from qregular import DandCProblem, build_h_rep, classify, cross_check, dandc_oracle, evaluate
from qregular.summation import summatory_rep

problem = DandCProblem(alpha=1, beta=1, toll=(-1, 1), x1=0)
print("x(0..16):", [int(v) for v in dandc_oracle(problem, 17)])

c = classify(problem)
print(f"\nCase {c.case_tag}")
for term in c.main_terms:
    print(f"  main term n^{term.exponent_symbolic()} (log n)^{term.log_power} times a periodic function")
print(f"  error O(n^(log_2 {c.error.base}{' + eps' if c.error.epsilon else ''}) "
      f"(log n)^{c.error.log_power})")

# x is the summatory function of its forward difference h, which is 2-regular.
rep = build_h_rep(problem)
print(f"\nh representation has dimension {rep.dim}; matrices:")
for r, A in enumerate(rep.matrices):
    print(f"  A_{r} =", [[str(v) for v in row] for row in A.tolist()])
print("x(10^20) =", evaluate(summatory_rep(rep), 10 ** 20))

report = cross_check(problem, 4096)
print("\nCross-check against the generic engine and the recurrence:", report.summary())
