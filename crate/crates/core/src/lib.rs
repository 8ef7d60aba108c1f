//! Symbolic computation for one-relator groups: the Magnus hierarchy,
//! Britton normal forms, Magnus-subgroup membership, Stallings graphs and an
//! experimental lab for intersections of Magnus subgroups.

pub mod britton;
pub mod cli;
pub mod enumerate;
pub mod error;
pub mod genset;
pub mod hierarchy;
pub mod lab;
pub mod membership;
pub mod oracle;
pub mod presentation;
pub mod selftest;
pub mod stallings;
pub mod words;
