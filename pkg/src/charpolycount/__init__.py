"""Count integer matrices with a fixed irreducible characteristic polynomial.

Exact census of n x n integer matrices with characteristic polynomial chi and
Frobenius norm at most T, next to the predicted leading term
``C_T * prod_p O_p / p^S_p`` built from the maximal order of ``Q[x]/(chi)``,
its class number and regulator, and local orbital integrals.
"""

__version__ = "0.1.0"
