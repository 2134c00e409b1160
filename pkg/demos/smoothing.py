"""How many summations until an expansion has main terms.

The scalar representation A_0 = (0), A_1 = (2) describes x(n) = 2^j for
n = 2^j - 1 and x(n) = 0 otherwise.  Its summatory function grows no faster
than the error term allowed by the joint spectral radius, so one more
summation is needed.
"""

from qregular import TheoremHypothesisError, expansion, iterated_summatory_rep, smoothing_analysis
from qregular.sequences import (
    binary_sum_of_digits,
    nilpotent_example,
    thue_morse_pm,
    zero_two_scalar,
)

for name, rep in (("sum of digits", binary_sum_of_digits()), ("(0),(2) scalar", zero_two_scalar())):
    result = smoothing_analysis(rep)
    print(f"{name}: order {result.order}; dominant modulus {result.scaled_radius:g} "
          f"vs joint spectral radius {result.jsr:g}")

rep = zero_two_scalar()
print("\n(0),(2) scalar without smoothing, terms:", expansion(rep).term_keys())
print("after one extra summation, terms:", expansion(iterated_summatory_rep(rep, 1).rep).term_keys())

for name, rep in (("Thue-Morse +-1", thue_morse_pm()), ("nilpotent example", nilpotent_example())):
    try:
        smoothing_analysis(rep)
    except TheoremHypothesisError as exc:
        print(f"{name}: {exc}")
