pub mod arith;
pub mod curves;
pub mod error;
pub mod field;
pub mod lingrp;
pub mod perm;
pub mod poly;
pub mod ramify;
pub mod spectrum;
pub mod verify;

pub use error::{Error, Result};
