"""Expected connected components of the Ross random graph and its Lipschitz bounds."""
from .bounds import (
    b_m,
    c_km,
    kappa_lower,
    kappa_upper,
    lipschitz_report,
    s_m,
    sweep_bm,
    theorem1_check,
    verify_chain,
)
from .components import (
    accumulate,
    expected_components,
    expected_components_bruteforce,
    gamma_ec,
    gamma_ec_upper,
)
from .distributions import (
    ProbVector,
    majorizes,
    make_prob_vector,
    random_majorization_pair,
    sample_in_tv_ball,
    sorted_view,
    tv_distance,
)
from .flow import flow_bound, flow_difference, gamma_via_flow, minimal_element
from .graphsim import (
    GraphRealization,
    count_components,
    epidemic_spread,
    expected_components_exhaustive,
    mc_expected_components,
    min_seeds,
    sample_graph,
)
from .interval import Interval, interval_newton, maximize_f
from .kernels import BACKEND
from .mills import mills_ratio

__version__ = "0.1.0"
