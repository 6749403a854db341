//! Catalog and spec plumbing shared by the command-line binary and the
//! acceptance suite.

pub mod catalog;
