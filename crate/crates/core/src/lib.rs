pub mod arith;
pub mod caps;
pub mod classify;
pub mod coxeter;
pub mod roots;
pub mod system;
pub mod partition;
pub mod dsl;
pub mod cli;
