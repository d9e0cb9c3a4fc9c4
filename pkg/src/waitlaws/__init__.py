"""Waiting-time processes of interval maps with an indifferent fixed point.

Exact continued-fraction digit engines, orbit engines, distorted processes,
their analytic limit laws, and seeded Monte Carlo experiments that check
the limit theorems at desk scale.
"""

from .exactreal import DyadicStream, ExplicitStream, PeriodicStream, cf_digits
from .limits import LimitLaw, cdf, limit_law, pdf
from .maps import FAREY, GAUSS, LASOTA_YORKE, THALER0, get_map
from .processes import VisitTimes, WaitingRecord, visits_from_digits, visits_from_orbit, waiting_record

__version__ = "0.1.0"

__all__ = [
    "DyadicStream",
    "ExplicitStream",
    "PeriodicStream",
    "cf_digits",
    "LimitLaw",
    "limit_law",
    "pdf",
    "cdf",
    "FAREY",
    "GAUSS",
    "LASOTA_YORKE",
    "THALER0",
    "get_map",
    "VisitTimes",
    "WaitingRecord",
    "visits_from_digits",
    "visits_from_orbit",
    "waiting_record",
]
