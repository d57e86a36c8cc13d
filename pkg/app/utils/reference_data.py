"""Published reference rows used by the table commands and the acceptance tests"""

# Spinodal alpha_d of K-SAT, K = 3..10, with the Mertens et al. comparison row
ALPHA_D_TABLE = {
    3: "4.003", 4: "8.360", 5: "16.16", 6: "30.51",
    7: "57.21", 8: "107.21", 9: "201.29", 10: "379.01",
}
ALPHA_D_MERTENS = {
    3: 3.927, 4: 8.297, 5: 16.12, 6: 30.50,
    7: 57.22, 8: 107.24, 9: 201.35, 10: 379.10,
}

# Threshold alpha_c of K-SAT, K = 3..7, with bound and spin-glass rows
ALPHA_C_TABLE = {3: "4.396", 4: "10.077", 5: "21.234", 6: "43.45", 7: "87.84"}
ALPHA_C_UPPER_BOUND = {3: 4.51, 4: 10.23, 5: 21.33, 6: 43.51, 7: 87.88}
ALPHA_C_SPIN_GLASS = {3: 4.267, 4: 9.931, 5: 21.117, 6: 43.37, 7: 87.79}
ALPHA_C_LOWER_BOUND = {3: 3.52, 4: 7.91, 5: 18.79, 6: 40.62, 7: 84.82}

# Anchors of the 3-SAT threshold curve: the cusp and the x = 0 end point
CUSP_ANCHOR_K3 = (0.145, 3.183)
CURVE_END_ANCHOR_K3 = (0.0, 4.396)

# 2-SAT fifty-percent densities
Y50_SIZES = (50, 100, 200, 300, 400, 500)
Y50_TABLE = {50: 1.45, 100: 1.36, 200: 1.29, 300: 1.25, 400: 1.23, 500: 1.21}
Y50_SIMON = {50: 1.40, 100: 1.40, 200: 1.23, 300: 1.22, 400: 1.22, 500: 1.18}
Y50_REGRESSION = {"C": 1.01, "X": 1.64, "r_squared": 0.999}
Y50_SIMON_REGRESSION = {"C": 0.98, "X": 1.65, "r_squared": 0.87}


def printed_decimals(value: str) -> int:
    """Number of decimals printed for a table entry"""
    return len(value.split(".")[1]) if "." in value else 0
