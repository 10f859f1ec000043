"""Named geometric structures and their verifiers."""
from .jacobi import (
    HomPoisson,
    InverseJacobi,
    JacobiPair,
    atiyah_from_flat,
    check_hom_poisson,
    check_jacobi_pair,
    invert_jacobi,
    jacobi_from_sharp,
    jacobiator_witnesses,
    lcs_to_jacobi,
    monomials,
    poisson_inverse,
    sharp_matrix,
    split_contact,
    split_lcs,
)
from .gencontact import (
    Classification,
    GenContactOp,
    HomGC,
    bfield_operator,
    build_L_JZ,
    check_gen_contact,
    check_generalized_complex,
    check_hom_gc,
    classify_dj,
    complex_operator,
    contact_operator,
    eigenframe,
    hom_gc_defects,
)
from .nacs import (
    NACS,
    ACQuadruple,
    check_almost_contact,
    check_dl_complex,
    check_nacs,
    dl_torsion,
    dl_torsion_table,
    from_phi,
    gauge_apply,
    gauge_conjugate,
    gauge_transform,
    homogenized_torsion,
    nacs_ops,
    to_phi,
)
from .gallery import (
    GALLERY_NAMES,
    canonical,
    contact_chart,
    cylinder_chart,
    complex_chart,
    nacs_normal_form,
    symplectic_chart,
)
from .products import hom_poisson_frame

__all__ = [name for name in dir() if not name.startswith("_")]
