"""Oracle quantum walk search on regular and distance-regular graphs."""

from .graphs import (
    Graph,
    IntersectionArray,
    Partition,
    build_complete,
    build_family,
    check_equitable,
    distance_partition,
    intersection_array_of,
    is_two_connected,
    laplacian_minor,
    parse_array,
    validate_array,
    vertex_deleted,
)
from .spectral import (
    build_augmented,
    closed_form_average,
    herm_eig,
    reconstruct_F,
    spectral_average_from_x0,
    sym_eig,
    walk_eigenphases,
)
from .walk import (
    empirical_average_search_probability,
    search_probability_at,
    time_average_distribution,
    walk_operators,
)

__version__ = "0.1.0"
