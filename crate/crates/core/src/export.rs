//! CSV helpers shared by the table and snapshot writers.
//!
//! Dialect: comma separator, `.` decimal point, LF line endings, mandatory
//! header row, floats with 17 significant digits.

/// Formats a float with 17 significant digits in scientific notation.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}
