"""
Exact algebra: permutations, polynomials, the nil Hecke ring and Schubert classes.
"""
