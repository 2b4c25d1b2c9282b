"""
Spectral engines for measure-geometric Laplacians.
Provides the measure model, operator calculus, closed-form and monodromy spectra,
the discrete oracle and spectral analytics.
"""

from .measure import (
    Atom,
    CanonicalForm,
    LebesgueCdf,
    MeasureSpec,
    PiecewiseLinearCdf,
    distribution_value,
    equally_spaced_measure,
    load_measure,
    one_atom_measure,
    to_canonical,
    two_atom_measure,
    validate_measure,
)
from .calculus import (
    PiecewiseEval,
    PiecewiseSine,
    apply_laplacian,
    apply_nabla,
    apply_nabla_star,
    constant_function,
    eigen_residual,
    energy,
    inner_product,
    norm,
    periodic_jumps,
    system_residual,
)
from .closed_form import (
    EigenPair,
    SpecialAlphaClass,
    TanLineProblem,
    TanLineRoot,
    closed_form_spectrum,
    eigenpair_one_atom,
    eigenpair_two_atoms,
    family_index,
    solve_tan_line,
    special_alpha_class,
    tan_line_residual,
)
from .monodromy import (
    ConcatenationReport,
    ScanOptions,
    SpectrumResult,
    Transfer2x2,
    assemble_eigenfunction,
    atom_jump,
    concatenate_eigenfunction,
    concatenate_measure,
    concatenation_check,
    discriminant,
    find_spectrum,
    monodromy,
    oscillation_count,
    pullback_to_x,
    rotate_eigenfunction,
    segment_propagator,
    spectrum_count,
)
from .oracle import (
    AtomicApprox,
    SymmetricProfile,
    compare_spectra,
    discretize,
    jacobi_eigh,
    laplacian_profile,
    lowest_eigenpairs,
    oracle_eigenvalues,
)
from .analytics import (
    InvariantSuite,
    asymptotic_limits,
    counting_function,
    counting_sweep,
    orthogonality_suite,
    run_invariant_suite,
)
from .utils import parse_float_list, spectrum_table

__all__ = [
    'Atom',
    'CanonicalForm',
    'LebesgueCdf',
    'MeasureSpec',
    'PiecewiseLinearCdf',
    'distribution_value',
    'equally_spaced_measure',
    'load_measure',
    'one_atom_measure',
    'to_canonical',
    'two_atom_measure',
    'validate_measure',
    'PiecewiseEval',
    'PiecewiseSine',
    'apply_laplacian',
    'apply_nabla',
    'apply_nabla_star',
    'constant_function',
    'eigen_residual',
    'energy',
    'inner_product',
    'norm',
    'periodic_jumps',
    'system_residual',
    'EigenPair',
    'SpecialAlphaClass',
    'TanLineProblem',
    'TanLineRoot',
    'closed_form_spectrum',
    'eigenpair_one_atom',
    'eigenpair_two_atoms',
    'family_index',
    'solve_tan_line',
    'special_alpha_class',
    'tan_line_residual',
    'ConcatenationReport',
    'ScanOptions',
    'SpectrumResult',
    'Transfer2x2',
    'assemble_eigenfunction',
    'atom_jump',
    'concatenate_eigenfunction',
    'concatenate_measure',
    'concatenation_check',
    'discriminant',
    'find_spectrum',
    'monodromy',
    'oscillation_count',
    'pullback_to_x',
    'rotate_eigenfunction',
    'segment_propagator',
    'spectrum_count',
    'AtomicApprox',
    'SymmetricProfile',
    'compare_spectra',
    'discretize',
    'jacobi_eigh',
    'laplacian_profile',
    'lowest_eigenpairs',
    'oracle_eigenvalues',
    'InvariantSuite',
    'asymptotic_limits',
    'counting_function',
    'counting_sweep',
    'orthogonality_suite',
    'run_invariant_suite',
    'parse_float_list',
    'spectrum_table',
]
