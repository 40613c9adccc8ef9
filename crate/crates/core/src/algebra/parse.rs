use super::field::check_modulus;
use super::poly::Poly;
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};

fn parse_err(s: &str, why: &str) -> Error {
    Error::Parse(format!("{why} in {s:?}"))
}

/// Parse a polynomial such as `"T^3 + 2*T + 1"` over `F_q`.
///
/// Coefficients must already lie in `[0, q)`; a leading `-` on a term negates it.
pub fn parse_poly(s: &str, q: u32) -> Result<Poly> {
    check_modulus(q)?;
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(parse_err(s, "empty polynomial"));
    }
    let mut acc = Poly::zero(q);
    let mut rest = compact.as_str();
    let mut first = true;
    while !rest.is_empty() {
        let negate = match rest.as_bytes()[0] {
            b'+' if !first => {
                rest = &rest[1..];
                false
            }
            b'-' => {
                rest = &rest[1..];
                true
            }
            _ if first => false,
            _ => return Err(parse_err(s, "expected '+' or '-'")),
        };
        first = false;
        let end = rest.find(['+', '-']).unwrap_or(rest.len());
        let term = parse_term(&rest[..end], q).map_err(|e| match e {
            Error::Parse(why) => parse_err(s, &why),
            other => other,
        })?;
        acc = if negate { &acc - &term } else { &acc + &term };
        rest = &rest[end..];
    }
    Ok(acc)
}

fn parse_coeff(t: &str, q: u32) -> Result<u32> {
    let v: u64 = t
        .parse()
        .map_err(|_| Error::Parse(format!("bad coefficient {t:?}")))?;
    if v >= q as u64 {
        return Err(Error::Parse(format!(
            "coefficient {v} out of range for q = {q}"
        )));
    }
    Ok(v as u32)
}

fn parse_term(t: &str, q: u32) -> Result<Poly> {
    if t.is_empty() {
        return Err(Error::Parse("empty term".into()));
    }
    let (coeff, mono) = match t.find('T') {
        None => return Ok(Poly::constant(q, parse_coeff(t, q)?)),
        Some(0) => (1, t),
        Some(i) => {
            let c = t[..i]
                .strip_suffix('*')
                .ok_or_else(|| Error::Parse(format!("expected '*' before T in {t:?}")))?;
            (parse_coeff(c, q)?, &t[i..])
        }
    };
    let exp = match mono.strip_prefix('T') {
        Some("") => 1,
        Some(e) => e
            .strip_prefix('^')
            .and_then(|e| e.parse::<usize>().ok())
            .ok_or_else(|| Error::Parse(format!("bad exponent in {t:?}")))?,
        None => unreachable!(),
    };
    Ok(Poly::monomial(q, coeff, exp))
}

fn strip_parens(s: &str) -> &str {
    let t = s.trim();
    if t.starts_with('(') && t.ends_with(')') {
        &t[1..t.len() - 1]
    } else {
        t
    }
}

/// Parse `"P"`, `"P/Q"` or `"(P)/(Q)"`.
pub fn parse_ratfunc(s: &str, q: u32) -> Result<RatFunc> {
    match s.split_once('/') {
        None => Ok(RatFunc::from_poly(parse_poly(strip_parens(s), q)?)),
        Some((n, d)) => RatFunc::new(
            parse_poly(strip_parens(n), q)?,
            parse_poly(strip_parens(d), q)?,
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_display() {
        let f = parse_poly("T^3 + 2*T + 1", 3).unwrap();
        assert_eq!(f.coeffs(), &[1, 2, 0, 1]);
        assert_eq!(parse_poly(&f.to_string(), 3).unwrap(), f);
        assert_eq!(parse_poly("T - 1", 3).unwrap().coeffs(), &[2, 1]);
        assert_eq!(parse_poly("0", 2).unwrap(), Poly::zero(2));
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(parse_poly("3*T + 1", 3).is_err());
        assert!(parse_poly("T + 2", 2).is_err());
        assert!(parse_poly("T^", 2).is_err());
        assert!(parse_poly("T T", 2).is_err());
    }

    #[test]
    fn ratfunc_syntax() {
        let r = parse_ratfunc("(T + 1)/(T^2 + 1)", 2).unwrap();
        // T^2 + 1 = (T + 1)^2 over F_2
        assert_eq!(r.den(), &parse_poly("T + 1", 2).unwrap());
        assert!(r.num().is_one());
    }
}
