// `!(a <= b)` is used on purpose so NaN fails every check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod batch;
pub mod classic;
pub mod error;
pub mod exec;
pub mod gen;
pub mod init;
pub mod io;
pub mod lazy;
pub mod linalg;
pub mod maintenance;
pub mod lp;
pub mod newton;
pub mod potential;
pub mod robust;
pub mod schedule;
pub mod solver;
pub mod trace;

pub use error::{Error, Result};
