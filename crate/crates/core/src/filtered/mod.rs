//! Totalization of twisted complexes into split filtered complexes, the
//! column-filtration spectral sequence and homotopies of order `r`.

mod homotopy;
mod spectral;
mod tot;
mod total;

pub use homotopy::{check_order_r_homotopy, homotopy_to_tot, tot_to_homotopy, OrderRHomotopy};
pub use spectral::{
    is_er_quasi_iso, is_er_quasi_iso_filtered, is_er_quasi_iso_via_cone, page_map_filtered,
    page_of_morphism, spectral_page, spectral_page_filtered, SpectralEngine, SpectralPage,
};
pub use tot::{
    check_mu_chain, check_mu_naturality, check_mu_symmetry, family_from_total, mu, tensor_filtered,
    tensor_total, tot, tot_family, tot_inverse, tot_inverse_morphism, tot_morphism,
};
pub use total::{check_chain_map, check_filtered, FilteredComplex, TotLayout, TotalMap, TotalMapSpace};
