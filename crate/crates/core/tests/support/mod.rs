#![allow(dead_code)]

pub mod interleave;
pub mod reference;
pub mod scenarios;

use ddl_core::dsl::parse_theory;
use ddl_core::Theory;

pub fn theory(src: &str) -> Theory {
    parse_theory(src).expect("test theory parses").theory
}
