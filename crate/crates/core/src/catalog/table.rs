//! Noether numbers and separating Noether numbers of the non-cyclic groups
//! of order 17 to 31.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const TABLE_SCHEMA: &str = "sepinv-table/1";

const TABLE_SOURCE: &str = include_str!("../../catalog/table1.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableRow {
    pub gap_id: String,
    pub name: String,
    pub beta: u32,
    pub beta_sep: u32,
    /// `catalog` when the row is backed by scripted checks, `external` when
    /// the value rests on results outside this catalog.
    pub status: String,
    /// Field assumption under which the values hold, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assumption: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TableFile {
    schema: String,
    rows: Vec<TableRow>,
}

pub fn table_rows() -> Result<Vec<TableRow>> {
    let file: TableFile = serde_json::from_str(TABLE_SOURCE).map_err(|e| Error::Parse(format!("table: {e}")))?;
    if file.schema != TABLE_SCHEMA {
        return Err(Error::ValidationFailure(format!("table schema `{}`", file.schema)));
    }
    Ok(file.rows)
}

pub fn table_row(gap_id: &str) -> Result<TableRow> {
    let key = super::normalize_id(gap_id);
    table_rows()?.into_iter().find(|r| r.gap_id == key).ok_or_else(|| Error::UnknownEntry(gap_id.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_parse() {
        let rows = table_rows().unwrap();
        assert_eq!(rows.len(), 36);
        let r = table_row("24,3").unwrap();
        assert_eq!((r.beta, r.beta_sep), (12, 12));
        let r = table_row("18,3").unwrap();
        assert_eq!((r.beta, r.beta_sep), (8, 6));
        assert_eq!(rows.iter().filter(|r| r.status == "catalog").count(), 10);
    }
}
