//! Exact-arithmetic toolkit for linear control systems `x' = Ax + Bu, y = Cx`.
//!
//! Systems are classified (controllable, observable, canonical), brought to Kalman
//! canonical form, embedded into Grassmannians, counted over finite fields and realized
//! from Markov parameter data. All arithmetic is exact, over `Q` or a prime field `F_q`.

pub mod cli;
pub mod counting;
pub mod error;
pub mod field;
pub mod grassmann;
pub mod io;
pub mod kalman;
pub mod matrix;
pub mod quiver;
pub mod realization;
pub mod system;

pub use error::{Error, Result};
pub use field::{Field, Scalar};
pub use grassmann::{GrassmannPoint, InfiniteGrassmannPoint, LocusMembership};
pub use kalman::{CanonicalForm, KalmanCode, MultiIndex};
pub use matrix::Matrix;
pub use quiver::{QuiverRep, StabilityWeight, SubrepMode};
pub use realization::MarkovSequence;
pub use system::{LinearSystem, SystemClass};
