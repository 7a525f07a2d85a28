//! Rate traces as CSV: `snr_db,rate1,stderr1,rate2,stderr2,trials`, one row
//! per SNR point, floats with 12 significant digits.

use std::io::{Read, Write};

use mimo_dof_core::RateTrace;

pub const HEADER: [&str; 6] = ["snr_db", "rate1", "stderr1", "rate2", "stderr2", "trials"];

#[derive(Debug, thiserror::Error)]
pub enum CsvError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("unexpected header {0:?}")]
    Header(Vec<String>),
    #[error("row {row}: {message}")]
    Row { row: usize, message: String },
}

fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn write_trace<W: Write>(trace: &RateTrace, out: W) -> Result<(), CsvError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for k in 0..trace.len() {
        w.write_record([
            sig12(trace.snr_db[k]),
            sig12(trace.rate1[k]),
            sig12(trace.stderr1[k]),
            sig12(trace.rate2[k]),
            sig12(trace.stderr2[k]),
            trace.trials.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Parses a trace; the seed is not part of the file and is supplied by the caller.
pub fn read_trace<R: Read>(input: R, seed: u64) -> Result<RateTrace, CsvError> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != HEADER {
        return Err(CsvError::Header(header));
    }
    let mut trace = RateTrace {
        snr_db: Vec::new(),
        rate1: Vec::new(),
        stderr1: Vec::new(),
        rate2: Vec::new(),
        stderr2: Vec::new(),
        trials: 0,
        seed,
    };
    for (row, record) in r.records().enumerate() {
        let record = record?;
        let field = |i: usize| -> Result<f64, CsvError> {
            record[i].parse().map_err(|_| CsvError::Row {
                row,
                message: format!("bad number {:?} in column {}", &record[i], HEADER[i]),
            })
        };
        trace.snr_db.push(field(0)?);
        trace.rate1.push(field(1)?);
        trace.stderr1.push(field(2)?);
        trace.rate2.push(field(3)?);
        trace.stderr2.push(field(4)?);
        trace.trials = record[5].parse().map_err(|_| CsvError::Row {
            row,
            message: format!("bad trial count {:?}", &record[5]),
        })?;
    }
    Ok(trace)
}
