# KSCAT
# Copyright (C) 2025 The kscat authors

# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU Affero General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.

# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU Affero General Public License for more details.

# You should have received a copy of the GNU Affero General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.
"""KSCAT: exact Koszul-Sullivan complexes, Toomer invariants and DG modules.

Copyright (c) The kscat authors
"""

__version__ = "v0.1.0"

# ruff: noqa: F401
from kscat.cohomology import (
    CapError,
    ChainMapError,
    CochainComplex,
    CohomologyWindow,
    DegreeCohomology,
    ExplicitComplex,
    InducedMap,
    cohomology,
    cohomology_euler_characteristic,
    euler_characteristic,
    induced_map,
)
from kscat.config import Caps
from kscat.corpus import (
    AlgebraSpec,
    GenerationError,
    GeneratorSpec,
    builtin_corpus,
    corpus_generate,
    dump_spec,
    load_spec,
    loads_spec,
    run_instance,
    spec_to_complex,
    spec_to_extension,
)
from kscat.graded import (
    AlgebraElement,
    GradedAlgebra,
    Generator,
    Monomial,
    ParseError,
    WordlengthFilter,
    format_element,
    graded_algebra,
    multiply,
    parse_element,
    truncate,
)
from kscat.invariants import (
    BoundStatus,
    BoundVerdict,
    FiberFamily,
    ToomerReport,
    cup_length,
    main_bound,
    projection_chain,
    toomer,
    toomer_base,
    toomer_fiber_family,
    verify_estimate_e,
)
from kscat.linalg import (
    PreimageResult,
    RationalMatrix,
    echelon_form,
    image_basis,
    kernel_basis,
    preimage,
    rank,
)
from kscat.modules import (
    Cylinder,
    DGModule,
    Homotopy,
    Lift,
    LiftError,
    ModuleElement,
    ModuleError,
    ModuleGenerator,
    ModuleMorphism,
    Resolution,
    Strictification,
    check_homotopy,
    check_morphism,
    compose,
    dg_module,
    find_lift_homotopy,
    free_module,
    identity,
    lift_through_surjection,
    mapping_cylinder,
    morphism,
    null_homotopic_morphism,
    strictify,
    strictify_retraction,
    surjective_resolution,
    zero_morphism,
)
from kscat.sullivan import (
    InterpolatingFiltration,
    KSComplex,
    LambdaExtension,
    QuotientComplex,
    StructureError,
    StructureReport,
    base_complex,
    bigraded_piece,
    build_interpolating_filtration,
    check_d_squared,
    check_ks_minimal,
    check_minimal,
    check_minimal_extension,
    check_sullivan,
    degree_split_extension,
    estimate_bound,
    fiber_differential,
    filtration_quotient,
    ks_complex,
    lambda_extension,
    quotient_complex,
)
