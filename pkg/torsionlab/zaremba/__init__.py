"""
The semigroups Gamma and Gamma_A: enumeration, prime counts and exponential growth.
"""
