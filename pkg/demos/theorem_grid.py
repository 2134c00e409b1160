"""Classify a grid of divide-and-conquer recurrences two ways and compare.

For each problem the closed-form case analysis is checked against the
generic expansion of the forward-difference representation and against the
recurrence itself for n < 1024.
"""

from collections import Counter

from qregular.dandc import cross_check, reference_grid

reports = [cross_check(p, 1024) for p in reference_grid()]
for report in reports:
    print(report.summary())

print("\nCases:", dict(sorted(Counter(r.classification.case_tag for r in reports).items())))
print("Mismatches:", sum(not r.agree for r in reports))
