#![allow(dead_code, unused_imports)]

pub mod exprs;
pub mod symbolic;
pub mod synthetic;
