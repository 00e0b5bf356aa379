//! Reads a CSV with a label column and standardizes it.
//!
//! cargo run --example load_csv -- path/to/file.csv label_column

use somchroma::dataset::{load_csv, read_csv, standardize, CsvOptions};

const DEMO: &str = "\
name,height,weight,flag
a,1.70,65,1
b,1.82,80,1
c,1.65,55,1
d,1.90,92,1
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let data = match (args.next(), args.next()) {
        (Some(path), label) => load_csv(
            path,
            &CsvOptions {
                label_column: label,
                ..CsvOptions::with_header()
            },
        )?,
        (None, _) => read_csv(
            DEMO.as_bytes(),
            &CsvOptions {
                label_column: Some("name".into()),
                ..CsvOptions::with_header()
            },
        )?,
    };
    println!(
        "{} rows x {} columns: {:?}",
        data.n_rows(),
        data.n_cols(),
        data.column_names()
    );

    let (z, params) = standardize(&data)?;
    for (j, name) in data.column_names().iter().enumerate() {
        println!(
            "{name:>8}  mean {:>8.3}  sd {:>7.3}",
            params.means[j], params.stddevs[j]
        );
    }
    let constant: Vec<&String> = params
        .constant_columns()
        .iter()
        .map(|&j| &data.column_names()[j])
        .collect();
    println!("constant columns: {constant:?}");
    if let Some(labels) = z.row_labels() {
        for (label, row) in labels.iter().zip(z.rows()) {
            println!("{label}: {row:.3?}");
        }
    }
    Ok(())
}
