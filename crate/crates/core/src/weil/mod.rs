//! The Weil module of U and its decomposition into irreducible constituents.

pub mod classfn;
pub mod constituent;
pub mod decompose;
pub mod degree;
pub mod heis;
pub mod module;

pub use classfn::{inner_product, inner_product_raw, ClassFunction, DEFAULT_TOL};
pub use constituent::TopSite;
pub use decompose::{decompose, Constituent, DecomposeOptions};
pub use degree::{degree_case, degree_closed_form, DegreeCase, TClass};
pub use heis::{heis_inv, heis_mul, radical, HeisElem};
pub use module::{Monomial, TopBotSplit, WeilModule};
