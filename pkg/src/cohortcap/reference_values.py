"""Reference figures from the dialysis clinic case study, used by the
``reproduce`` command and the acceptance tests."""

from cohortcap.domain import PatientType

T1, T3, T4 = PatientType.ACUTE, PatientType.INFECTED, PatientType.SUSPECTED

# hospital allocation (7, 5, 2): week -> ((O_12x3, O_12x4, O_3x4), Z)
HOSPITAL_WEEKS = {
    1: ((7, 5, 4), 12450),
    2: ((16, 0, 13), 17360),
    3: ((0, 8, 17), 9752),
    4: ((5, 15, 15), 21558),
    5: ((15, 11, 4), 26456),
    6: ((2, 0, 12), 3254),
    7: ((0, 0, 0), 48),
    8: ((34, 11, 4), 45458),
}
HOSPITAL_TOTAL = ((79, 50, 69), 136336)

# three-unit optimum with realized demand: week -> (allocation, overlaps, Z')
THREE_UNIT_OPTIMAL = {
    1: ((10, 3, 1), (0, 0, 4), 444),
    2: ((9, 4, 1), (0, 0, 3), 350),
    3: ((7, 5, 2), (0, 8, 17), 9752),
    4: ((8, 3, 3), (0, 0, 17), 1758),
    5: ((8, 4, 2), (8, 6, 10), 15050),
    6: ((9, 4, 1), (0, 0, 5), 546),
    7: ((10, 4, 0), (0, 0, 0), 36),
    # printed O_3x4 is 19, but only 9 is consistent with Z' = 17,950
    8: ((9, 4, 1), (15, 2, 19), 17950),
}
THREE_UNIT_TOTAL_Z = 45886
IMPROVEMENT_PCT = {1: 96, 2: 98, 3: 0, 4: 92, 5: 43, 6: 83, 7: 25, 8: 61, "Total": 66}

# two-unit optimum with realized demand: week -> (allocation, (O_12x3, O_12x4), Z)
TWO_UNIT_OPTIMAL = {
    1: ((11, 3), (0, 4), 4042),
    2: ((10, 4), (0, 2), 2050),
    3: ((9, 5), (0, 11), 11050),
    4: ((9, 5), (0, 9), 9048),
    5: ((10, 4), (0, 13), 13046),
    6: ((8, 6), (0, 2), 2044),
    7: ((10, 4), (0, 0), 36),
    8: ((10, 4), (8, 13), 21048),
}
TWO_UNIT_TOTAL = ((8, 54), 62364)

# prediction intervals: (week, type, level) -> (lower, upper)
INTERVALS = {
    (6, T1, 80): (2.31, 11.94), (6, T1, 90): (0.96, 13.29),
    (7, T1, 80): (2.30, 11.40), (7, T1, 90): (1.01, 12.68),
    (8, T1, 80): (2.40, 11.12), (8, T1, 90): (1.18, 12.65),
    (6, T3, 80): (1.87, 5.18), (6, T3, 90): (1.41, 5.64),
    (7, T3, 80): (2.20, 5.71), (7, T3, 90): (1.70, 6.21),
    (8, T3, 80): (1.87, 5.17), (8, T3, 90): (1.40, 5.64),
    (6, T4, 80): (-0.73, 1.77), (6, T4, 90): (-1.08, 2.21),
    (7, T4, 80): (-0.76, 1.59), (7, T4, 90): (-1.09, 1.92),
    (8, T4, 80): (-1.01, 1.17), (8, T4, 90): (-1.32, 1.48),
}
# cells whose printed value disagrees with the draft copy of the same table
# (12.35 and 2.12) and with the symmetry of the interval about its midpoint
INTERVAL_TYPOS = {(8, T1, 90): "upper", (6, T4, 90): "upper"}

# week-8 discrete distributions: (type, level) -> {value: mass}
WEEK8_MASSES = {
    (T3, 80): {2: 0.189, 3: 0.302, 4: 0.302, 5: 0.207},
    (T3, 90): {1: 0.021, 2: 0.236, 3: 0.236, 4: 0.236, 5: 0.236, 6: 0.035},
    (T4, 80): {0: 0.688, 1: 0.312},
    (T4, 90): {0: 0.647, 1: 0.353},
}

# stochastic three-unit runs: (week, level) -> (allocation, E overlaps, Z, realized overlaps)
THREE_UNIT_STOCHASTIC = {
    (6, 80): ((8, 5, 1), (0.0, 0.9, 9.3), 1883, (0, 0, 8)),
    (6, 90): ((8, 5, 1), (0.8, 1.3, 7.6), 2979, (0, 0, 8)),
    (7, 80): ((8, 5, 1), (1.4, 0.5, 10.1), 2998, (0, 0, 0)),
    (7, 90): ((10, 3, 1), (3.4, 0.4, 6.4), 4561, (0, 0, 0)),
    (8, 80): ((8, 5, 1), (0.0, 0.0, 5.1), 561, (24, 5, 9)),
    (8, 90): ((8, 5, 1), (1.0, 0.0, 4.2), 1497, (24, 5, 9)),
}
TWO_UNIT_STOCHASTIC = {
    (6, 80): ((9, 5), (0.0, 4.7), 4713, (0, 7)),
    (6, 90): ((9, 5), (0.0, 4.1), 4112, (0, 7)),
    (7, 80): ((9, 5), (0.9, 5.9), 6815, (0, 0)),
    (7, 90): ((8, 6), (0.0, 7.2), 7214, (0, 0)),
    (8, 80): ((9, 5), (0.0, 2.2), 2211, (16, 14)),
    (8, 90): ((9, 5), (0.7, 3.1), 3811, (16, 14)),
}

# unit utilization (%), hospital and optimal allocation, weeks 1..8
UTILIZATION = {
    "hospital": ((68, 69, 54, 55, 67, 58, 58, 73), (14, 2, 19, 2, 15, 18, 17, 18), (2, 6, 14, 20, 6, 4, 0, 4)),
    "optimal": ((47, 54, 54, 48, 59, 45, 41, 57), (23, 25, 19, 33, 19, 22, 21, 22), (4, 13, 14, 13, 6, 8, 0, 8)),
}

DAILY_PENALTY_WEEK5_DAY1 = {"three-unit": ((8, 4, 2), 14612), "two-unit": ((10, 4), 10010)}
DAILY_PENALTY_WEEK5_DAY3 = {"three-unit": ((8, 4, 2), 410), "two-unit": ((10, 4), 3010)}
