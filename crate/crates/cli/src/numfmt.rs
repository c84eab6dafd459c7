//! Number formatting and the `a+bi` complex notation of the command line.

use univalence_core::C64;

/// Shortest decimal text that parses back to exactly `x`.
///
/// Plain notation for `1e-5 <= |x| < 1e16` and zero, exponent notation
/// otherwise.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let a = x.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// `a+bi` / `a-bi`, each part in [`format_float`] form.
pub fn format_complex(z: C64) -> String {
    let im = format_float(z.im);
    if im.starts_with('-') {
        format!("{}{}i", format_float(z.re), im)
    } else {
        format!("{}+{}i", format_float(z.re), im)
    }
}

/// Parses `0.5+0.3i`, `-2e-3-1i`, `0.25`, `3i`, `-i`. Spaces are ignored,
/// `j` is accepted for `i`.
pub fn parse_complex(text: &str) -> Result<C64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse `{text}` as a complex number (expected e.g. 0.5+0.3i)");
    if s.is_empty() {
        return Err(bad());
    }
    let number = |t: &str| -> Result<f64, String> {
        let x: f64 = t.parse().map_err(|_| bad())?;
        if x.is_finite() {
            Ok(x)
        } else {
            Err(bad())
        }
    };
    let Some(body) = s.strip_suffix('i').or_else(|| s.strip_suffix('j')) else {
        return Ok(C64::new(number(&s)?, 0.0));
    };
    // split at the last sign that is neither leading nor part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (number(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => number(other)?,
    };
    Ok(C64::new(re, im))
}
