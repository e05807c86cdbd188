/// Shortest decimal text that round-trips the value rounded to 12 significant
/// digits. Always uses '.' as decimal point; zero (either sign) prints as `0`.
pub fn format_sig12(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == 0.0 {
        return "0".to_string();
    }
    let rounded: f64 = format!("{v:.11e}").parse().expect("valid float text");
    let mag = rounded.abs();
    if (1e-6..1e16).contains(&mag) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats() {
        assert_eq!(format_sig12(2.0), "2");
        assert_eq!(format_sig12(0.1 + 0.2), "0.3");
        assert_eq!(format_sig12(1.02 + 1e-15), "1.02");
        assert_eq!(format_sig12(-0.0), "0");
        assert_eq!(format_sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_sig12(-1234.5), "-1234.5");
        assert_eq!(format_sig12(1.5e-9), "1.5e-9");
        assert_eq!(format_sig12(2e20), "2e20");
        assert_eq!(format_sig12(123456789012345.0), "123456789012000");
    }
}
