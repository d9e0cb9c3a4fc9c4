"""One continued fraction, followed digit by digit.

Takes the quadratic irrational with periodic digits 1, 3, 1, 7, prints the
visit times of its Farey orbit to the right half of the interval, and checks
the straddling-digit identity at every horizon.

    python3 demos/straddling_digit.py
"""

from waitlaws.cf import hauptlemma_check, sigma
from waitlaws.exactreal import PeriodicStream, digits_until_sum_exceeds
from waitlaws.processes import visits_from_digits

digits = digits_until_sum_exceeds(PeriodicStream([1, 3, 1, 7]), 40)
print("digits:", digits)
print("visit times:", visits_from_digits(digits).upto(40))
for n in range(1, 20):
    rep = hauptlemma_check(digits, n)
    print(f"n={n:2d}  sigma={sigma(digits, n)}  via {rep.branch:>3} = {rep.expected}  "
          f"{'ok' if rep.passed else 'MISMATCH'}")
