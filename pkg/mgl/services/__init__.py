from mgl.services.analysis import SpectralService, get_spectral_service, init_spectral_service
from mgl.services.plotting import eigenfunction_figure, render_eigenfunction

__all__ = [
    "SpectralService",
    "eigenfunction_figure",
    "get_spectral_service",
    "init_spectral_service",
    "render_eigenfunction",
]
