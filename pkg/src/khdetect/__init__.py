"""Exact Khovanov homology and Hopf link certificates from PD codes."""

from .alexander import (
    KhiShape,
    WirtingerPresentation,
    alexander_single,
    diagonal_multivariable,
    khi_euler_divisibility,
    prop3_solver,
    second_derivative_identity,
    torres_check,
    wirtinger,
)
from .cube import (
    ChainComplex,
    ChainMap,
    KhovanovComplex,
    Resolution,
    basepoint_chain_operator,
    build_complex,
    resolve,
)
from .detector import Certificate, HopfTemplate, detect_hopf, hopf_template, match_condition
from .homalg import (
    AbelianGroup,
    BigradedGroup,
    SparseIntMatrix,
    homology,
    homology_at,
    induced_map,
    smith_normal_form,
)
from .khovanov import (
    KhovanovResult,
    ModuleAction,
    bs_check,
    compute,
    exact_triangle_rank_check,
    jones_polynomial,
    kauffman_jones,
    kh,
    khr,
    module_action,
    shumakovitch_check,
)
from .koszul import KoszulComplex, khi_rank_bound, koszul_tensor_rank
from .laurent import LaurentPoly, NotDivisible
from .library import LIBRARY, get_diagram
from .linkdiag import (
    CrossingData,
    DiagramError,
    LinkDiagram,
    component_count,
    crossing_signs,
    linking_number,
    mirror,
    parse_json,
    parse_pd,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
