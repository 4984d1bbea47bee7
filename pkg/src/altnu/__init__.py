"""Alt nu-Tamari lattices, their canonical join complexes and the box complex."""

from .boxcomplex import box_complex, box_faces, descent_boxes, tau, theta
from .complex import SimplicialComplex, betti_gf2, is_vertex_decomposable
from .lattice import FiniteLattice
from .paths import NEPath, Shape, shape_from
from .shelling import betti_via_shelling, shelling_order
from .trees import DeltaNuTree, Region, enumerate_trees
from .verify import alt_tamari_lattice, verify_all, verify_isomorphism

__version__ = "0.1.0"

__all__ = [
    "DeltaNuTree", "FiniteLattice", "NEPath", "Region", "Shape", "SimplicialComplex",
    "alt_tamari_lattice", "betti_gf2", "betti_via_shelling", "box_complex", "box_faces",
    "descent_boxes", "enumerate_trees", "is_vertex_decomposable", "shape_from",
    "shelling_order", "tau", "theta", "verify_all", "verify_isomorphism",
]
