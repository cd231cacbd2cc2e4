//! CSV output with nine significant digits.

use std::io::Write;

use polar_rsma_core::montecarlo::{GroupSummary, ResultTable};

use crate::error::CliError;

pub const ROW_HEADER: [&str; 11] = [
    "scheme", "snr_db", "chi", "xi", "user", "outage_mc", "outage_se", "outage_cf", "erg_mc", "erg_se", "erg_cf",
];

pub const SUMMARY_HEADER: [&str; 14] = [
    "scheme",
    "snr_db",
    "chi",
    "xi",
    "outage_sum_rate",
    "outage_sum_rate_se",
    "outage_sum_rate_cf",
    "erg_sum",
    "erg_sum_se",
    "erg_sum_cf",
    "erg_common",
    "erg_common_se",
    "erg_private",
    "erg_private_se",
];

/// Nine significant digits in scientific notation.
pub fn num(x: f64) -> String {
    format!("{x:.8e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn write_rows<W: Write>(table: &ResultTable, out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(ROW_HEADER)?;
    for r in &table.rows {
        w.write_record([
            r.scheme.name().to_string(),
            num(r.snr_db),
            num(r.chi),
            num(r.xi),
            r.user.to_string(),
            num(r.outage_mc),
            num(r.outage_se),
            opt(r.outage_cf),
            num(r.erg_mc),
            num(r.erg_se),
            opt(r.erg_cf),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn summary_record(s: &GroupSummary) -> [String; 14] {
    [
        s.scheme.name().to_string(),
        num(s.point.snr_db),
        num(s.point.chi),
        num(s.point.xi),
        num(s.outage_sum_rate.0),
        num(s.outage_sum_rate.1),
        opt(s.outage_sum_rate_cf),
        num(s.ergodic.0),
        num(s.ergodic.1),
        opt(s.ergodic_cf),
        num(s.ergodic_common.0),
        num(s.ergodic_common.1),
        num(s.ergodic_private.0),
        num(s.ergodic_private.1),
    ]
}

pub fn write_summaries<W: Write>(table: &ResultTable, out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_HEADER)?;
    for s in &table.summaries {
        w.write_record(summary_record(s))?;
    }
    w.flush()?;
    Ok(())
}
