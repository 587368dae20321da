//! Built-in catalog of groups, representations and checkable statements.

mod builtins;
pub mod entry;
pub mod expr;
pub mod table;
pub mod theorems;

pub use entry::{entry_ids, load_entry, load_entry_over, normalize_id, CatalogEntry};
pub use table::{table_row, table_rows, TableRow};
pub use theorems::{
    run_all, run_script, run_theorem_check, script_certificates, theorem_ids, theorem_script, theorem_scripts, CheckReport,
    SubCheck, TheoremScript,
};
