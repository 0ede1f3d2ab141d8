//! Group arithmetic and Fourier transforms over Z_N and Z_2^n.

pub mod arith;
pub mod fft;
pub mod group;
pub mod io;
pub mod spectrum;
pub mod wht;

pub use arith::{inverse_mod, is_prime, residue_abs, symmetric_rep};
pub use group::{DensityFunction, Group, GroupSubset};
pub use io::{parse_set_file, read_set_file, write_set_file, write_spectrum_csv};
pub use spectrum::{
    dft_cyclic, dft_cyclic_function, parseval_check, parseval_check_subset, spectrum, spectrum_of_function, wht_cube,
    wht_cube_function, Coefficients, Spectrum,
};
