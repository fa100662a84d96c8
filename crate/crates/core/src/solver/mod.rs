//! Time steppers and their spatial operators.

pub mod cfl;
pub mod dg;
pub mod explicit;
pub mod grid;
pub mod rk3;
pub mod run;
pub mod state;

pub use cfl::{cfl_dt, rk3_dt};
pub use dg::{DdgOperator, Nonlocal};
pub use explicit::{step_ddg_k0, step_ldg_k0, DiffusionForm, K0Operator, LdgState};
pub use grid::{Boundary, Grid};
pub use rk3::{forward_euler_step, rk3_step};
pub use run::{run, RunOptions, Scheme, SchemeKind, Trajectory};
pub use state::{CellState, DGState};
