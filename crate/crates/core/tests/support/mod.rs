#![allow(dead_code)]

pub mod jet;
pub mod mms;
pub mod oracles;
