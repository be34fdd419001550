//! Spectral radii of connected r-uniform hypergraphs, two independent ways:
//! power iteration on the adjacency tensor, and the consistent alpha of a
//! weighted incidence matrix (with rho = (r-1)! * alpha^{-1/r} tying the two
//! together). On top sit the parametric extremal families, the grafting and
//! 2-bridge contraction perturbations, and the ordering harness that ranks
//! the families below the (r-1)! * 4^{1/r} threshold.

pub mod certificates;
mod dd;
pub mod error;
pub mod families;
pub mod hypergraph;
pub mod ordering;
pub mod perturbations;
pub mod recurrences;
pub mod spectral;

pub use certificates::{
    certificate_from_perron, check_certificate, check_consistency, perron_consistency_check,
    read_certificate, solve_tree_alpha, write_certificate, CertificateEntry, CertificateVerdict,
    ConsistencyReport, CycleWitness, Site, TreeCertificate, VerdictKind, WeightedIncidenceMatrix,
};
pub use error::{Error, Result};
pub use families::{
    lookup as family_lookup, make_bd, make_cycle, make_e, make_f, make_g, make_path, registry,
    Family, FamilyGenerator, FamilySpec,
};
pub use hypergraph::{
    heuristic_isomorphic, read_hypergraph, write_hypergraph, UniformHypergraph, Violation,
};
pub use ordering::{order_report, OrderRow, OrderSettings, OrderingReport, PairCheck, RhoMethod};
pub use perturbations::{
    build_proof_certificates, contract, contract_with_maps, find_2bridges, graft_center,
    graft_edge_pair, verify_contraction_theorem, Contraction, ContractionReport, GraftAnchor,
    GraftSite, ProofCertificate, ProofTheorem, TwoBridge,
};
pub use recurrences::{
    eval_f, eval_g, eval_l, root_a, root_b, root_c, solve_alpha_n, RecurrenceTable, RootBracket,
    DEFAULT_TOL, MAX_INDEX,
};
pub use spectral::{
    alpha_from_rho, apply_tensor, poly_form, power_method, rank_factorial, rho_from_alpha,
    PowerSettings, SpectralResult,
};
