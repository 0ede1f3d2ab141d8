//! Explicit sets with prescribed large spectra and the quantizer they share.

pub mod bohr;
pub mod cube;
pub mod green;
pub mod prescribed;
pub mod quantize;
pub mod report;
pub mod riesz;

pub use bohr::{bohr_bounds, bohr_set, construct_bohr_union, plateau_set, BohrBounds, BohrUnionConfig};
pub use cube::{
    bernstein_tail, construct_cube_random, construct_cube_union, sample_support_family, BernsteinTail,
    CubeConstructionConfig, SamplerFeasibility, SupportFamily,
};
pub use green::{construct_green_plus, green_plus_function, green_windows, leading_coefficient, riesz_poly, GreenWindow};
pub use prescribed::{build_prescribed_function, construct_prescribed_small};
pub use quantize::{quantize_to_set, round_once, target_cardinality, Quantization, QuantizerConfig};
pub use report::{Check, ConstructionReport, FunctionDiagnostics, QuantizerStats, Regime, Relation, SpotCheck};
pub use riesz::{construct_riesz, is_two_dissociated, riesz_product, riesz_windows, RieszConfig, RieszWindows};
