pub mod analysis;
pub mod cli;
pub mod connections;
pub mod curvatures;
pub mod error;
pub mod fundamentals;
pub mod jets;
pub mod metrics;
pub mod tensor;
