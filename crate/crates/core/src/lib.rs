//! Sub-Riemannian geodesics on the Carnot group with growth vector (4,7).
//!
//! The crate covers the group law and invariant frames ([`group`]), the
//! normal Hamiltonian system with its closed-form extremals and an RK4 oracle
//! ([`dynamics`]), the SO(3) symmetry reduction ([`symmetry`]), the
//! dichotomy "inside C_n / never meets C_n" and the cut time inside C_n
//! ([`optimality`]), inversion of the factorized exponential map
//! ([`expmap`]), sampling of the unit sphere ([`sphere`]) and a numerical
//! verification suite ([`verify`]).
//!
//! All numerics are generic over [`Real`] (`f32`, `f64`); group arithmetic
//! only needs a [`Ring`] and also runs on exact rationals. The `*F64`
//! aliases below are the types most callers want.

pub mod dynamics;
pub mod error;
pub mod expmap;
pub mod group;
pub mod linalg;
pub(crate) mod newton;
pub mod optimality;
pub mod scalar;
pub mod sphere;
pub mod symmetry;
pub mod trig;
pub mod verify;

pub use dynamics::{
    closed_form_state, controls, fiber_solution, geodesic_point, hamiltonian, initial_state,
    integrate_numeric, level_residual, normalize, ode_rhs, CotangentState, FullState,
    GeodesicParams, Trajectory,
};
pub use error::{Error, Result};
pub use expmap::{
    connect, exp_factored, exp_jacobian, first_critical_time, invert_exp, recover_rotation,
    Branch, ConnectOptions, ExpParams, GeodesicAnswer, InvertOutcome, SeedGrid,
};
pub use group::{frame_left, frame_right, Generator, GroupPoint, LieAlgebra, TangentVector};
pub use optimality::{
    classify, collinearity_det, cut_time, det_coeffs, discriminant, f_and_bounds,
    heisenberg_project, GeodesicClass, HeisenbergPoint,
};
pub use scalar::{Real, Ring};
pub use sphere::{sphere_sample, Coord, Slice, SphereFamily, SphereSample};
pub use symmetry::{
    act, canonicalize, in_cn, invariants_curve, invariants_of_point, representative_point,
    symmetry_field, CanonicalParams, InvariantTuple, Rotation, SymmetryGenerator,
};

pub type GroupPointF64 = GroupPoint<f64>;
pub type GroupPointF32 = GroupPoint<f32>;
pub type TangentVectorF64 = TangentVector<f64>;
pub type CotangentStateF64 = CotangentState<f64>;
pub type FullStateF64 = FullState<f64>;
pub type GeodesicParamsF64 = GeodesicParams<f64>;
pub type GeodesicParamsF32 = GeodesicParams<f32>;
pub type TrajectoryF64 = Trajectory<f64>;
pub type RotationF64 = Rotation<f64>;
pub type CanonicalParamsF64 = CanonicalParams<f64>;
pub type InvariantTupleF64 = InvariantTuple<f64>;
pub type HeisenbergPointF64 = HeisenbergPoint<f64>;
pub type GeodesicClassF64 = GeodesicClass<f64>;
pub type ExpParamsF64 = ExpParams<f64>;
pub type GeodesicAnswerF64 = GeodesicAnswer<f64>;
