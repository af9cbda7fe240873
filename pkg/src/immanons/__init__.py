"""Many-body quantities for particles with generalized exchange symmetry."""

from .errors import DomainError, RangeError
from .immanant import (
    column_permuted_immanants,
    determinant,
    immanant,
    immanants,
    load_matrix,
    matrix_from_json,
    matrix_to_json,
    normalized_immanant,
    permanent,
)
from .inequalities import (
    check_hadamard_marcus,
    check_lieb_fisher,
    check_schur_dominance,
    dominance_campaign,
    random_psd_unit_diagonal,
)
from .partitions import (
    CharacterTable,
    Partition,
    character,
    character_table,
    class_size,
    cycle_type_of,
    enumerate_partitions,
    hook_dimension,
    majorizes,
)
from .scattering import (
    arrangement_probability,
    bunching_factor,
    coincidence_probability,
    distinguishable_probability,
    indistinguishable_probability,
    transition_matrix,
    transition_sweep,
)
from .states import (
    DenseState,
    SingleParticleSpace,
    evolve_one_body,
    immanon_state,
    mode_occupation_distribution,
    overlap,
    partial_pauli_check,
    permutation_operator,
    seed_dependence_probe,
    symmetrizer,
)

__version__ = "0.1.0"
