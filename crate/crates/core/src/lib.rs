pub mod counts;
pub mod error;
pub mod gf;
pub mod grp;
pub mod herm;
pub mod phase;
pub mod report;
pub mod ring;
pub mod weil;

pub use error::{Error, Result};
pub use gf::{Field, FieldSpec, Fq};
pub use herm::{DiagSpec, Form, FormSpec, FormType};
pub use phase::Phase;
pub use ring::{AElem, AddChar, Ring, RingSpec};
pub use grp::{GroupTable, Subgroup};
pub use report::{run_suite, Report, Status, SuiteOptions};
pub use weil::{decompose, ClassFunction, Constituent, DecomposeOptions, WeilModule};
