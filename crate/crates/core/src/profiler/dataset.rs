use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::ProfileError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CsvOptions {
    pub delimiter: u8,
    pub has_header: bool,
}

impl Default for CsvOptions {
    fn default() -> Self {
        CsvOptions {
            delimiter: b',',
            has_header: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub cells: Vec<String>,
}

impl Column {
    pub fn new(name: impl Into<String>, cells: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Column {
            name: name.into(),
            cells: cells.into_iter().map(Into::into).collect(),
        }
    }
}

/// Rectangular table of text cells.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dataset {
    columns: Vec<Column>,
    row_count: usize,
}

impl Dataset {
    pub fn new(columns: Vec<Column>) -> Result<Self, ProfileError> {
        let row_count = columns.first().map_or(0, |c| c.cells.len());
        let mut names = HashSet::new();
        for column in &columns {
            if !names.insert(column.name.trim().to_owned()) {
                return Err(ProfileError::DuplicateColumn(column.name.trim().to_owned()));
            }
            if column.cells.len() != row_count {
                return Err(ProfileError::RaggedRow {
                    line: 0,
                    expected: row_count,
                    found: column.cells.len(),
                });
            }
        }
        Ok(Dataset { columns, row_count })
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn column(&self, name: &str) -> Option<&Column> {
        let name = name.trim();
        self.columns.iter().find(|c| c.name.trim() == name)
    }

    pub fn row_count(&self) -> usize {
        self.row_count
    }
}

/// Reads RFC 4180 delimited text. Cells are kept verbatim; a leading UTF-8
/// BOM is ignored.
pub fn ingest_csv(bytes: &[u8], options: &CsvOptions) -> Result<Dataset, ProfileError> {
    let bytes = bytes.strip_prefix(b"\xEF\xBB\xBF").unwrap_or(bytes);
    if bytes.iter().all(u8::is_ascii_whitespace) {
        return Err(ProfileError::EmptyInput);
    }
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(options.delimiter)
        .has_headers(false)
        .flexible(true)
        .from_reader(bytes);

    let mut records = reader.records();
    let mut header: Option<Vec<String>> = None;
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut width = None;

    if options.has_header {
        let record = records
            .next()
            .ok_or(ProfileError::EmptyInput)?
            .map_err(|e| ProfileError::Csv(e.to_string()))?;
        width = Some(record.len());
        header = Some(record.iter().map(|s| s.trim().to_owned()).collect());
    }

    for record in records {
        let record = record.map_err(|e| ProfileError::Csv(e.to_string()))?;
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(ProfileError::RaggedRow {
                line: record.position().map_or(0, |p| p.line()),
                expected,
                found: record.len(),
            });
        }
        rows.push(record.iter().map(str::to_owned).collect());
    }

    if rows.is_empty() {
        return Err(if header.is_some() {
            ProfileError::NoDataRows
        } else {
            ProfileError::EmptyInput
        });
    }
    let width = width.unwrap_or(0);
    let names = header.unwrap_or_else(|| (1..=width).map(|i| format!("col{i}")).collect());

    let mut columns: Vec<Column> = names
        .into_iter()
        .map(|name| Column {
            name,
            cells: Vec::with_capacity(rows.len()),
        })
        .collect();
    for row in rows {
        for (column, cell) in columns.iter_mut().zip(row) {
            column.cells.push(cell);
        }
    }
    Dataset::new(columns)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_table() {
        let ds = ingest_csv(b"a,b\n1,2\n3,4", &CsvOptions::default()).unwrap();
        assert_eq!(ds.columns().len(), 2);
        assert_eq!(ds.row_count(), 2);
        assert_eq!(ds.column("b").unwrap().cells, vec!["2", "4"]);
    }

    #[test]
    fn ragged_row_reports_line() {
        let err = ingest_csv(b"a,b\n1,2\n3\n", &CsvOptions::default()).unwrap_err();
        assert_eq!(
            err,
            ProfileError::RaggedRow {
                line: 3,
                expected: 2,
                found: 1
            }
        );
    }

    #[test]
    fn headerless_names() {
        let options = CsvOptions {
            has_header: false,
            ..Default::default()
        };
        let ds = ingest_csv(b"x,1\ny,2\n", &options).unwrap();
        let names: Vec<_> = ds.columns().iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, vec!["col1", "col2"]);
        assert_eq!(ds.row_count(), 2);
    }

    #[test]
    fn quoting_bom_and_delimiter() {
        let options = CsvOptions {
            delimiter: b';',
            has_header: true,
        };
        let ds = ingest_csv("\u{feff}name;note\n\"Smith; J\";\"said \"\"hi\"\"\"\n".as_bytes(), &options).unwrap();
        assert_eq!(ds.columns()[0].name, "name");
        assert_eq!(ds.columns()[0].cells[0], "Smith; J");
        assert_eq!(ds.columns()[1].cells[0], "said \"hi\"");
    }

    #[test]
    fn empty_inputs() {
        assert_eq!(ingest_csv(b"", &CsvOptions::default()), Err(ProfileError::EmptyInput));
        assert_eq!(ingest_csv(b"a,b\n", &CsvOptions::default()), Err(ProfileError::NoDataRows));
    }

    #[test]
    fn duplicate_names_after_trim() {
        let err = ingest_csv(b"a, a\n1,2\n", &CsvOptions::default()).unwrap_err();
        assert_eq!(err, ProfileError::DuplicateColumn("a".into()));
    }
}
