//! Expression language and table-file format.

mod parse;
mod table_file;

pub use parse::{normalize, parse, DslError, Loc, RingExpr};
pub use table_file::{dump_table, parse_table, LoadedTable, TableFileError};
