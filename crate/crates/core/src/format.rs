//! Number formatting shared by the text and CSV outputs.

/// `x` formatted like C's `%.9g`, except that negative zero prints as `0`.
pub fn g9(x: f64) -> String {
    g(x, 9)
}

/// `x` formatted like C's `%.{p}g`, except that negative zero prints as `0`.
pub fn g(x: f64, p: usize) -> String {
    let p = p.max(1);
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", strip_zeros(mantissa), sign, exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf() {
        assert_eq!(g9(0.0), "0");
        assert_eq!(g9(-0.0), "0");
        assert_eq!(g9(1.0), "1");
        assert_eq!(g9(0.5), "0.5");
        assert_eq!(g9(std::f64::consts::PI), "3.14159265");
        assert_eq!(g9(-0.0842206), "-0.0842206");
        assert_eq!(g9(123456789.0), "123456789");
        assert_eq!(g9(1234567890.0), "1.23456789e+09");
        assert_eq!(g9(0.0001), "0.0001");
        assert_eq!(g9(0.00001234), "1.234e-05");
        assert_eq!(g9(9.9999999999), "10");
        assert_eq!(g9(f64::NAN), "nan");
        assert_eq!(g(2.0 / 3.0, 3), "0.667");
    }
}
