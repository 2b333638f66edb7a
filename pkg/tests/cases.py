"""Worked elections shared by the test modules."""

from ballotworks.core import ranked_profile

E1 = ranked_profile("ABC", [(4, "ABC"), (2, "BCA"), (3, "CBA")])
E2 = ranked_profile("ABC", [(6, "ABC"), (5, "CAB"), (4, "BCA"), (2, "BAC")])
E2_RAISED = ranked_profile("ABC", [(6, "ABC"), (5, "CAB"), (4, "BCA"), (2, "ABC")])
E3 = ranked_profile("ABC", [(30, "ABC"), (1, "ACB"), (29, "BAC"), (10, "BCA"), (10, "CAB"), (1, "CBA")])
PARADOX = ranked_profile("ABC", [(1, "ABC"), (1, "BCA"), (1, "CAB")])

# Ballot groups chosen so every round of the Derwent Valley mayoral count
# comes out exactly as published.
DERWENT_NAMES = ["PBe", "PBi", "MEv", "CLe", "FPe"]
DERWENT = ranked_profile(DERWENT_NAMES, [
    (870, "PBe"), (1632, "MEv"),
    (73, "PBi PBe"), (86, "PBi MEv"), (60, "PBi CLe PBe"), (62, "PBi FPe PBe"), (52, "PBi"),
    (94, "CLe PBe"), (147, "CLe MEv"), (135, "CLe FPe MEv"), (47, "CLe"),
    (324, "FPe PBe"), (172, "FPe MEv"), (124, "FPe"),
])

ABORIGINAL = ranked_profile("KMNS", [
    (6, "SK"), (15, "SM"), (12, "SN"), (4, "KM"), (3, "KN"), (13, "M"), (18, "N"),
])

CZESTOCHOWA = {"PO": "34.97", "PiS": "27.36", "RP": "13.39", "SLD": "10.49",
               "PSL": "8.77", "PJN": "2.14", "NP": "2.06", "PPP": "0.84"}

GAUTENG = {"ANC": 2348564, "DA": 1349001, "EFF": 451318, "VF+": 52436,
           "IFP": 34240, "ACDP": 27196, "COPE": 21652, "NFP": 20733}
GAUTENG_VALID_VOTES = 4382163

ELECTION1_BLT = '3 1\n4 1 2 3 0\n2 2 3 1 0\n3 3 2 1 0\n0\n"A"\n"B"\n"C"\n"Election 1"'
