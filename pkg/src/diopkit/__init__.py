"""Exact computations with dioperads that have zero-input operations.

The package builds the dioperad of an associative algebra with a
(anti)symmetric invariant co-inner product, its quadratic dual and cobar
dual complex, verifies Koszulity instance by instance at desk scale, and
computes the genus-one graph complex showing the induced properad is not
contractible.
"""

from .cyclic import CyclicClass, enumerate_classes, glue, cuts, parse_class
from .dioperads import (ClassDioperad, EliminationDioperad, GeneratorSpace,
                        Presentation, SignDioperad, dims_table,
                        load_presentation, quadratic_dual, save_presentation,
                        v_presentation, w_presentation)
from .exact import Rational, SparseMatrix
from .trees import PlanarTree, Tree, corolla, enumerate_tree0

__all__ = [
    "CyclicClass", "enumerate_classes", "glue", "cuts", "parse_class",
    "ClassDioperad", "EliminationDioperad", "GeneratorSpace", "Presentation",
    "SignDioperad", "dims_table", "load_presentation", "quadratic_dual",
    "save_presentation", "v_presentation", "w_presentation",
    "Rational", "SparseMatrix", "PlanarTree", "Tree", "corolla",
    "enumerate_tree0",
]
