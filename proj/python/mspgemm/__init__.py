"""Masked sparse-sparse matrix multiplication and graph kernels."""

from ._core import (
    CsrMatrix,
    InternalError,
    ParseError,
    PlanError,
    betweenness_centrality,
    from_triples,
    generate,
    k_truss,
    masked_multiply,
    read_matrix_market,
    traffic_estimate,
    triangle_count,
    write_matrix_market,
)

ALGORITHMS = ("msa", "hash", "mca", "heap", "heapdot", "inner")


def from_scipy(m):
    """Converts any scipy.sparse matrix to a CsrMatrix."""
    csr = m.tocsr()
    csr.sum_duplicates()
    return CsrMatrix(csr.shape, csr.indptr, csr.indices, csr.data)


def to_scipy(m):
    """Converts a CsrMatrix to scipy.sparse.csr_matrix."""
    import scipy.sparse

    return scipy.sparse.csr_matrix((m.data, m.indices, m.indptr), shape=m.shape)


__all__ = [
    "ALGORITHMS",
    "CsrMatrix",
    "InternalError",
    "ParseError",
    "PlanError",
    "betweenness_centrality",
    "from_scipy",
    "from_triples",
    "generate",
    "k_truss",
    "masked_multiply",
    "read_matrix_market",
    "to_scipy",
    "traffic_estimate",
    "triangle_count",
    "write_matrix_market",
]
