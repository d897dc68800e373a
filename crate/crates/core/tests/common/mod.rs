//! Shared test support: fixtures and the literal step interpreter.

#![allow(dead_code)]

pub mod fixtures;
pub mod oracle;
