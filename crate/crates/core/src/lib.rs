#![no_std]

extern crate alloc;

pub mod analytic;
pub mod oracle;
pub mod params;
pub mod specfun;
pub mod sweep;
