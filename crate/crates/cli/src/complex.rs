//! Complex-number syntax for `--mu`.
//!
//! Grammar: `[real][(+|-)[imag]i]` or `[(+|-)][imag]i`, where `real` and
//! `imag` are decimal floats (exponents allowed) and `j` may replace `i`.
//! Examples: `2`, `-0.5`, `i`, `-i`, `3i`, `1+2i`, `1.5e-3-2.5j`.

use anyhow::{bail, Context, Result};
use num_complex::Complex64;

pub fn parse_complex(text: &str) -> Result<Complex64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        bail!("empty complex number");
    }
    let z = match s.strip_suffix(['i', 'j']) {
        None => Complex64::new(parse_real(&s)?, 0.0),
        Some(body) => {
            // Split at the last sign that is not the leading one and not an
            // exponent sign.
            let bytes = body.as_bytes();
            let split = (1..bytes.len())
                .rev()
                .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
            let (re, im) = match split {
                Some(k) => (parse_real(&body[..k])?, parse_imag(&body[k..])?),
                None => (0.0, parse_imag(body)?),
            };
            Complex64::new(re, im)
        }
    };
    if !(z.re.is_finite() && z.im.is_finite()) {
        bail!("complex number '{text}' is not finite");
    }
    Ok(z)
}

fn parse_real(s: &str) -> Result<f64> {
    s.parse::<f64>().with_context(|| format!("bad real part '{s}'"))
}

fn parse_imag(s: &str) -> Result<f64> {
    match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => s.parse::<f64>().with_context(|| format!("bad imaginary part '{s}'")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepted_forms() {
        let cases = [
            ("2", (2.0, 0.0)),
            ("-0.5", (-0.5, 0.0)),
            ("i", (0.0, 1.0)),
            ("-i", (0.0, -1.0)),
            ("+i", (0.0, 1.0)),
            ("3i", (0.0, 3.0)),
            ("1+2i", (1.0, 2.0)),
            ("1-i", (1.0, -1.0)),
            ("1.5e-3-2.5j", (1.5e-3, -2.5)),
            ("-1e+2+1E-1i", (-100.0, 0.1)),
            (" 0.3 + 0.4i ", (0.3, 0.4)),
        ];
        for (s, (re, im)) in cases {
            assert_eq!(parse_complex(s).unwrap(), Complex64::new(re, im), "{s}");
        }
    }

    #[test]
    fn rejected_forms() {
        for s in ["", "abc", "1+", "1+2", "nan", "inf+i", "1+2k", "i1"] {
            assert!(parse_complex(s).is_err(), "{s}");
        }
    }
}
