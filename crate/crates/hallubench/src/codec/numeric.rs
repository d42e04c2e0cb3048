//! Canonicalization of numeric answer strings.

/// Canonicalizes a numeric string for exact comparison.
///
/// Strips currency signs, percent signs, and thousands separators, trims
/// insignificant zeros, and normalizes the sign, so `"$1,234.50"` and
/// `"1234.5"` compare equal. Returns `None` when the remainder is not a
/// plain decimal number.
pub fn canonical_numeric(raw: &str) -> Option<String> {
    let mut s = raw.trim();
    s = s.trim_start_matches(['$', '€', '£']).trim();
    s = s.trim_end_matches('%').trim();
    let cleaned: String = s.chars().filter(|c| *c != ',').collect();
    let mut rest = cleaned.trim();

    let negative = match rest.strip_prefix('-') {
        Some(r) => {
            rest = r;
            true
        }
        None => {
            rest = rest.strip_prefix('+').unwrap_or(rest);
            false
        }
    };

    let (int_part, frac_part) = match rest.split_once('.') {
        Some((i, f)) => (i, f),
        None => (rest, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }

    let int_trimmed = int_part.trim_start_matches('0');
    let int_canon = if int_trimmed.is_empty() { "0" } else { int_trimmed };
    let frac_canon = frac_part.trim_end_matches('0');

    let mut out = String::new();
    let is_zero = int_canon == "0" && frac_canon.is_empty();
    if negative && !is_zero {
        out.push('-');
    }
    out.push_str(int_canon);
    if !frac_canon.is_empty() {
        out.push('.');
        out.push_str(frac_canon);
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::canonical_numeric;

    #[test]
    fn strips_separators_and_decorations() {
        assert_eq!(canonical_numeric("1,234").as_deref(), Some("1234"));
        assert_eq!(canonical_numeric("$3.50").as_deref(), Some("3.5"));
        assert_eq!(canonical_numeric("100%").as_deref(), Some("100"));
        assert_eq!(canonical_numeric("€1,000,000").as_deref(), Some("1000000"));
    }

    #[test]
    fn trims_insignificant_zeros() {
        assert_eq!(canonical_numeric("72.0").as_deref(), Some("72"));
        assert_eq!(canonical_numeric("72.").as_deref(), Some("72"));
        assert_eq!(canonical_numeric("007").as_deref(), Some("7"));
        assert_eq!(canonical_numeric(".5").as_deref(), Some("0.5"));
        assert_eq!(canonical_numeric("-0.250").as_deref(), Some("-0.25"));
    }

    #[test]
    fn normalizes_sign() {
        assert_eq!(canonical_numeric("+9").as_deref(), Some("9"));
        assert_eq!(canonical_numeric("-0").as_deref(), Some("0"));
        assert_eq!(canonical_numeric("-0.0").as_deref(), Some("0"));
        assert_eq!(canonical_numeric("-12").as_deref(), Some("-12"));
    }

    #[test]
    fn rejects_non_numbers() {
        assert_eq!(canonical_numeric("seventy two"), None);
        assert_eq!(canonical_numeric("72 dollars"), None);
        assert_eq!(canonical_numeric("1.2.3"), None);
        assert_eq!(canonical_numeric(""), None);
        assert_eq!(canonical_numeric("."), None);
    }
}
