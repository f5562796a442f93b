//! Files, reports and batch runs around `dmlst-core`.

pub mod corpus;
pub mod generate;
pub mod io;
pub mod report;
pub mod table_io;
