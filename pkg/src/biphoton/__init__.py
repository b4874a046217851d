"""Two-photon temporal wavefunctions of SFWM pairs in an EIT medium."""
from .core import (
    CoincidenceHistogram,
    DetectionParams,
    Prediction,
    SpectralGrid,
    SymmetrizedPair,
    TemporalWavefunction,
    build_spectral_amplitude,
    coincidence_counts,
    fwhm,
    predict,
    symmetrize,
    temporal_wavefunction,
)
from .config import RunConfig, load_config, parse_config, serialize_config
from .errors import BiphotonError, ConfigError, DegenerateModelError, DomainError, ReconstructionError
from .fitting import FitReport, compare_models, fit_beta, synthesize_counts
from .interferometer import (
    ProjectionSetting,
    inject_phase,
    interfere,
    measure_battery,
    reconstruct_phase,
    symmetry_error,
)
from .medium import (
    AtomicMedium,
    ComplexSpectrum,
    DriveLasers,
    PhaseMatchConvention,
    coupling_kappa,
    phase_matching,
    susceptibility,
    wavenumber,
)

__version__ = "0.1.0"
