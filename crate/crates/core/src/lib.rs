//! Twisted I-function series and Picard-Fuchs operators for Calabi-Yau 3-folds
//! cut out by homogeneous bundles on Grassmannians.

#![allow(clippy::needless_range_loop)]

pub mod ratqa;
pub mod cohomring;
pub mod homobundle;
pub mod abelianization;
pub mod pfops;
pub mod qconn;
pub mod cli;
