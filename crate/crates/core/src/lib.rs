pub mod algebra;
pub mod heisenberg;
pub mod oracle;
pub mod statistics;
