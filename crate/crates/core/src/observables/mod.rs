//! Truncated operators of the number and canonical phase observables, and
//! the distributions they induce in states.

mod arcs;
mod effects;
mod states;
mod window;

pub use arcs::{ArcSet, ArcSetJson, IndexSet};
pub use effects::{
    angle_effect, arc_fourier_coefficient, fourier_coefficients, hermitian_toeplitz, moment_operator,
    number_projection, number_squared, phase_effect, phase_shift_conjugate, second_moment_coefficient,
    second_phase_moment, smear_number, smear_phase, torus_p2, torus_position_effect, torus_q2,
};
pub use states::{
    angle_margin, angle_second_moment, fourier_margin, state_number_distribution, state_phase_distribution,
    DensityState, STATE_TOL,
};
pub use window::{FockWindow, TorusWindow, Window};
