//! Float formatting shared by every command: 12 significant digits, so
//! output is stable across platforms and thread counts.

use serde_json::Value;

const SIG: usize = 12;

/// `x` rounded to 12 significant digits, in `%g` style.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIG - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIG as i32).contains(&exp) {
        let decimals = (SIG as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// A JSON number carrying exactly the digits [`sig12`] prints.
pub fn num(x: f64) -> Value {
    sig12(x)
        .parse::<f64>()
        .ok()
        .and_then(serde_json::Number::from_f64)
        .map_or(Value::Null, Value::Number)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(sig12(0.1 + 0.2), "0.3");
        assert_eq!(sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(sig12(6.0 / 7.0), "0.857142857143");
        assert_eq!(sig12(123456.0), "123456");
        assert_eq!(sig12(-2.5), "-2.5");
        assert_eq!(sig12(1.0e-7), "1e-7");
        assert_eq!(sig12(1.234e15), "1.234e15");
        assert_eq!(sig12(0.0), "0");
    }

    #[test]
    fn json_numbers() {
        assert_eq!(num(1.0 / 3.0).to_string(), "0.333333333333");
        assert_eq!(num(f64::NAN), Value::Null);
    }
}
