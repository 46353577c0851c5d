//! CSV ingestion: counts, optional constant exposure, optional labels.

use countshrink::CountDataset;

use crate::args::InputArgs;
use crate::record::sha256_hex;
use crate::Failure;

/// Label column used when the caller names none and the header has it.
const DEFAULT_LABEL_COL: &str = "id";

/// A parsed input file plus the digest of its exact bytes.
#[derive(Debug)]
pub struct Ingested {
    pub data: CountDataset,
    pub digest: String,
}

/// Where to find a field: resolved once, before any row is read.
struct Columns {
    count: usize,
    exposure: Option<usize>,
    label: Option<usize>,
}

/// Reads the file named by `args`, checks every row, and builds the dataset.
///
/// Counts must parse as nonnegative integers and exposures must be one
/// positive constant; violations are reported with their 1-based file row.
pub fn ingest_csv(args: &InputArgs) -> Result<Ingested, Failure> {
    if !args.delimiter.is_ascii() {
        return Err(Failure::Usage(
            "delimiter must be a single ASCII character".to_string(),
        ));
    }
    let bytes = std::fs::read(&args.input).map_err(|e| {
        Failure::Data(format!("cannot read {}: {e}", args.input.display()))
    })?;
    let digest = sha256_hex(&bytes);

    let mut reader = csv::ReaderBuilder::new()
        .delimiter(args.delimiter as u8)
        .has_headers(!args.no_header)
        .from_reader(bytes.as_slice());

    let columns = resolve_columns(args, &mut reader)?;
    // 1-based file row of the first data record.
    let first_data_row = if args.no_header { 1 } else { 2 };

    let mut y = Vec::new();
    let mut labels = Vec::new();
    let mut exposure: Option<(f64, usize)> = None; // (value, row it came from)

    for (i, record) in reader.records().enumerate() {
        let row = first_data_row + i;
        let record =
            record.map_err(|e| Failure::Data(format!("malformed CSV at row {row}: {e}")))?;

        let raw = field(&record, columns.count, row)?;
        let count: u64 = raw.trim().parse().map_err(|_| {
            Failure::Data(format!(
                "row {row}: count '{raw}' is not a nonnegative integer"
            ))
        })?;
        y.push(count);

        if let Some(col) = columns.exposure {
            let raw = field(&record, col, row)?;
            let value: f64 = raw.trim().parse().map_err(|_| {
                Failure::Data(format!("row {row}: exposure '{raw}' is not a number"))
            })?;
            if !(value.is_finite() && value > 0.0) {
                return Err(Failure::Data(format!(
                    "row {row}: exposure must be a positive finite number, got {raw}"
                )));
            }
            match exposure {
                None => exposure = Some((value, row)),
                Some((first, first_row)) if first != value => {
                    return Err(Failure::Data(format!(
                        "exposure must be constant: row {row} has {value}, \
                         row {first_row} has {first}"
                    )));
                }
                Some(_) => {}
            }
        }

        if let Some(col) = columns.label {
            labels.push(field(&record, col, row)?.to_string());
        }
    }

    if y.is_empty() {
        return Err(Failure::Data(format!(
            "{} contains no data rows",
            args.input.display()
        )));
    }

    let mut data = CountDataset::new(y);
    if columns.label.is_some() {
        data = data
            .with_labels(labels)
            .map_err(|e| Failure::Data(e.to_string()))?;
    }
    if let Some((value, _)) = exposure {
        data = data
            .with_exposure(value)
            .map_err(|e| Failure::Data(e.to_string()))?;
    }
    Ok(Ingested { data, digest })
}

/// Maps the requested column names (or indices, without a header) to field
/// positions.
fn resolve_columns<R: std::io::Read>(
    args: &InputArgs,
    reader: &mut csv::Reader<R>,
) -> Result<Columns, Failure> {
    if args.no_header {
        let count = parse_index(&args.count_col, "--count-col")?;
        let exposure = args
            .exposure_col
            .as_deref()
            .map(|c| parse_index(c, "--exposure-col"))
            .transpose()?;
        let label = args
            .label_col
            .as_deref()
            .map(|c| parse_index(c, "--label-col"))
            .transpose()?;
        return Ok(Columns { count, exposure, label });
    }

    let headers = reader
        .headers()
        .map_err(|e| Failure::Data(format!("cannot read header row: {e}")))?
        .clone();
    let find = |name: &str| headers.iter().position(|h| h == name);
    let missing = |name: &str| {
        let available: Vec<&str> = headers.iter().collect();
        Failure::Data(format!(
            "column '{name}' not found; available columns: {}",
            available.join(", ")
        ))
    };

    let count = find(&args.count_col).ok_or_else(|| missing(&args.count_col))?;
    let exposure = match args.exposure_col.as_deref() {
        Some(name) => Some(find(name).ok_or_else(|| missing(name))?),
        None => None,
    };
    // An explicitly named label column must exist; the default one is used
    // only when present.
    let label = match args.label_col.as_deref() {
        Some(name) => Some(find(name).ok_or_else(|| missing(name))?),
        None => find(DEFAULT_LABEL_COL),
    };
    Ok(Columns { count, exposure, label })
}

/// One field by position, with a row-numbered error when the row is short.
fn field<'r>(record: &'r csv::StringRecord, col: usize, row: usize) -> Result<&'r str, Failure> {
    record.get(col).ok_or_else(|| {
        Failure::Data(format!(
            "row {row}: no column {col} (row has {} fields)",
            record.len()
        ))
    })
}

/// 0-based column index for headerless input.
fn parse_index(spec: &str, flag: &str) -> Result<usize, Failure> {
    spec.parse().map_err(|_| {
        Failure::Usage(format!(
            "with --no-header, {flag} must be a 0-based column index, got '{spec}'"
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;
    use std::path::Path;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    fn default_args(path: &Path) -> InputArgs {
        InputArgs {
            input: path.to_path_buf(),
            count_col: "count".to_string(),
            exposure_col: None,
            label_col: None,
            delimiter: ',',
            no_header: false,
        }
    }

    #[test]
    fn header_file_with_default_label_column() {
        let f = write_temp("id,count\na,0\nb,3\n");
        let got = ingest_csv(&default_args(f.path())).unwrap();
        assert_eq!(got.data.counts(), &[0, 3]);
        assert_eq!(
            got.data.labels().unwrap(),
            &["a".to_string(), "b".to_string()]
        );
        assert_eq!(got.digest.len(), 64);
    }

    #[test]
    fn negative_count_is_rejected_with_its_file_row() {
        let f = write_temp("id,count\na,0\nc,-1\n");
        let err = ingest_csv(&default_args(f.path())).unwrap_err();
        match err {
            Failure::Data(msg) => {
                assert!(msg.contains("row 3"), "message was: {msg}");
                assert!(msg.contains("-1"));
            }
            other => panic!("expected data error, got {other:?}"),
        }
    }

    #[test]
    fn missing_column_names_the_available_ones() {
        let f = write_temp("id,n\na,0\n");
        let err = ingest_csv(&default_args(f.path())).unwrap_err();
        match err {
            Failure::Data(msg) => {
                assert!(msg.contains("'count' not found"));
                assert!(msg.contains("id, n"));
            }
            other => panic!("expected data error, got {other:?}"),
        }
    }

    #[test]
    fn constant_exposure_is_accepted_heterogeneous_rejected() {
        let f = write_temp("count,N\n1,120152\n4,120152\n");
        let mut args = default_args(f.path());
        args.exposure_col = Some("N".to_string());
        let got = ingest_csv(&args).unwrap();
        assert_eq!(got.data.exposure(), Some(120152.0));

        let g = write_temp("count,N\n1,120152\n4,99\n");
        args.input = g.path().to_path_buf();
        let err = ingest_csv(&args).unwrap_err();
        match err {
            Failure::Data(msg) => assert!(msg.contains("constant"), "message was: {msg}"),
            other => panic!("expected data error, got {other:?}"),
        }
    }

    #[test]
    fn headerless_mode_addresses_columns_by_index() {
        let f = write_temp("7\n0\n2\n");
        let mut args = default_args(f.path());
        args.no_header = true;
        args.count_col = "0".to_string();
        let got = ingest_csv(&args).unwrap();
        assert_eq!(got.data.counts(), &[7, 0, 2]);
        assert!(got.data.labels().is_none());

        args.count_col = "count".to_string();
        let err = ingest_csv(&args).unwrap_err();
        assert!(matches!(err, Failure::Usage(_)));
    }

    #[test]
    fn empty_and_unreadable_inputs_are_data_errors() {
        let f = write_temp("id,count\n");
        let err = ingest_csv(&default_args(f.path())).unwrap_err();
        assert!(matches!(err, Failure::Data(_)));

        let args = default_args(Path::new("/nonexistent/file.csv"));
        let err = ingest_csv(&args).unwrap_err();
        assert!(matches!(err, Failure::Data(_)));
    }

    #[test]
    fn explicit_label_column_must_exist() {
        let f = write_temp("count\n3\n");
        let mut args = default_args(f.path());
        args.label_col = Some("site".to_string());
        let err = ingest_csv(&args).unwrap_err();
        match err {
            Failure::Data(msg) => assert!(msg.contains("'site' not found")),
            other => panic!("expected data error, got {other:?}"),
        }
    }
}
