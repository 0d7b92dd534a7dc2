"""
torsionlab: exact Schubert calculus, nil Hecke evaluation and torsion searches.
"""

__version__ = "0.1.0"
