"""
Operator families and searches for large torsion primes.

The searcher itself lives in torsionlab.search.searcher and is imported
explicitly, since it depends on the certificate layer.
"""
