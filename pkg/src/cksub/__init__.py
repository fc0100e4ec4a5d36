"""Connected k-subpartition polytopes: a small lab plus a branch-and-cut solver.

Modules: ``graph`` (graph core), ``inequalities`` (the inequality families),
``lab`` (enumeration, validity, affine rank, facets), ``flows`` (max-flow,
vertex cuts, min-cost flow), ``separation``, ``simplex`` (bounded primal
simplex), ``branchcut`` (MWS solver), ``instances`` (generators and file
formats), ``report`` (CSV rows and figures), ``experiment`` and ``cli``.
"""

__version__ = "0.1.0"
