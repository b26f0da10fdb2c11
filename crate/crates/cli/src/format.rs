//! Fixed-precision number formatting shared by every emitter.

/// Rounds `v` to `digits` significant digits.
pub fn round_sig(v: f64, digits: usize) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    let digits = digits.clamp(1, 17);
    format!("{:.*e}", digits - 1, v).parse().expect("formatted float parses")
}

/// `%g`-like rendering of `v` rounded to `digits` significant digits:
/// positional notation for moderate magnitudes, exponent form otherwise.
/// Non-finite values render as `NA`.
pub fn fmt_num(v: f64, digits: usize) -> String {
    if !v.is_finite() {
        return "NA".to_string();
    }
    let r = round_sig(v, digits);
    if r == 0.0 {
        return "0".to_string();
    }
    let exp = r.abs().log10().floor() as i32;
    if (-5..digits.max(1) as i32).contains(&exp) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}
