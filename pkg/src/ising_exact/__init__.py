"""Exact results of the zero-field two-dimensional Ising model, cross-checked numerically."""
from .core import Branch, CouplingPoint, critical_point, critical_temperature, derive_variables
from .errors import (CapacityError, ContractError, DomainError, IsingExactError, NumericError,
                     PropagationError, RangeError, UnsupportedRepresentationError)
from .series import RationalSeries
from .toeplitz import (CorrelationGrid, SymbolParams, critical_amplitude, diagonal_at_tc,
                       diagonal_correlation, diagonal_series, row_correlation, toeplitz_determinant)
from .thermo import (internal_energy, onsager_free_energy, series_free_energy,
                     spontaneous_magnetization)
from .painleve import (meson_spectrum, piii_solve, pvi_sigma_residual, scaling_G,
                       tracy_identity_check)
from .hirota import critical_grid_report, propagate_critical
from .lattice import (FiniteLattice, enumerate_partition, lee_yang_zeros, oracle_correlation,
                      transfer_matrix_log_z)
from .susceptibility import (c3_analytic, c4_analytic, clausen2, diagonal_chi, dn_integral,
                             nickel_amplitude, nickel_singularities, singularity_exponent)
from .qseries import (QSeries, fermionic_e8, fermionic_m34_spin, rocha_caridi, rogers_ramanujan,
                      verify_identity)

__version__ = "0.1.0"
