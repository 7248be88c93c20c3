//! Recursive-descent reader for the polynomial grammar:
//!
//! ```text
//! expr   := sign? term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := sign? atom ('^' uint)?
//! atom   := int | ident | '(' expr ')'
//! ```
//!
//! `1/2*x` reads as `(1/2)*x`; a divisor must evaluate to a nonzero constant.

use num_traits::{ToPrimitive, Zero};

use super::{rational_from_big, Polynomial, Ring};
use crate::error::{ParseErrorKind, Result};
use crate::syntax::{tokenize, Cursor, Tok};

/// Parse a single polynomial over `ring`.
pub fn parse_poly(text: &str, ring: &Ring) -> Result<Polynomial> {
    let tokens = tokenize(text)?;
    let mut cur = Cursor::new(&tokens);
    let p = parse_expr(&mut cur, ring)?;
    cur.expect(&Tok::Eof)?;
    Ok(p)
}

/// Parse a comma-separated list of polynomials. An empty string yields an empty list.
pub fn parse_poly_list(text: &str, ring: &Ring) -> Result<Vec<Polynomial>> {
    let tokens = tokenize(text)?;
    let mut cur = Cursor::new(&tokens);
    let mut out = Vec::new();
    if cur.peek().tok == Tok::Eof {
        return Ok(out);
    }
    loop {
        out.push(parse_expr(&mut cur, ring)?);
        if !cur.eat(&Tok::Comma) {
            break;
        }
    }
    cur.expect(&Tok::Eof)?;
    Ok(out)
}

pub(crate) fn parse_expr(cur: &mut Cursor<'_>, ring: &Ring) -> Result<Polynomial> {
    let mut acc = if cur.eat(&Tok::Minus) {
        -&parse_term(cur, ring)?
    } else {
        cur.eat(&Tok::Plus);
        parse_term(cur, ring)?
    };
    loop {
        if cur.eat(&Tok::Plus) {
            acc = &acc + &parse_term(cur, ring)?;
        } else if cur.eat(&Tok::Minus) {
            acc = &acc - &parse_term(cur, ring)?;
        } else {
            return Ok(acc);
        }
    }
}

fn parse_term(cur: &mut Cursor<'_>, ring: &Ring) -> Result<Polynomial> {
    let mut acc = parse_factor(cur, ring)?;
    loop {
        if cur.eat(&Tok::Star) {
            acc = &acc * &parse_factor(cur, ring)?;
        } else if matches!(cur.peek().tok, Tok::Slash) {
            let err_nonconst = cur.error_kind(ParseErrorKind::NonConstantDivision);
            let err_zero = cur.error_kind(ParseErrorKind::DivisionByZero);
            cur.next();
            let divisor = parse_factor(cur, ring)?;
            let c = divisor.as_constant().ok_or(err_nonconst)?;
            if c.is_zero() {
                return Err(err_zero);
            }
            acc = acc.scale(&c.recip());
        } else {
            return Ok(acc);
        }
    }
}

fn parse_factor(cur: &mut Cursor<'_>, ring: &Ring) -> Result<Polynomial> {
    if cur.eat(&Tok::Minus) {
        return Ok(-&parse_factor(cur, ring)?);
    }
    if cur.eat(&Tok::Plus) {
        return parse_factor(cur, ring);
    }
    let base = parse_atom(cur, ring)?;
    if cur.eat(&Tok::Caret) {
        let tok = cur.peek().clone();
        return match &tok.tok {
            Tok::Int(n) => {
                let e = n.to_u32().ok_or_else(|| cur.error_kind(ParseErrorKind::NonIntegerExponent(n.to_string())))?;
                cur.next();
                Ok(base.pow(e))
            }
            Tok::Decimal(s) => Err(cur.error_kind(ParseErrorKind::NonIntegerExponent(s.clone()))),
            Tok::Minus => Err(cur.error_kind(ParseErrorKind::NonIntegerExponent("-".into()))),
            Tok::Ident(s) => Err(cur.error_kind(ParseErrorKind::NonIntegerExponent(s.clone()))),
            other => Err(cur.error(format!("expected exponent, found {}", other.describe()))),
        };
    }
    Ok(base)
}

fn parse_atom(cur: &mut Cursor<'_>, ring: &Ring) -> Result<Polynomial> {
    let tok = cur.peek().clone();
    match &tok.tok {
        Tok::Int(n) => {
            cur.next();
            Ok(Polynomial::constant(ring, rational_from_big(n.clone())))
        }
        Tok::Decimal(s) => Err(cur.error(format!("decimal literal `{s}` not supported; use a fraction"))),
        Tok::Ident(name) => match ring.index_of(name) {
            Some(i) => {
                cur.next();
                Ok(Polynomial::var(ring, i))
            }
            None => Err(cur.error_kind(ParseErrorKind::UnknownVariable(name.clone()))),
        },
        Tok::LParen => {
            cur.next();
            let inner = parse_expr(cur, ring)?;
            cur.expect(&Tok::RParen)?;
            Ok(inner)
        }
        other => Err(cur.error(format!("expected a number, variable or `(`, found {}", other.describe()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::ring::{rational, Monomial, RingDescriptor};

    #[test]
    fn parses_mixed_terms() {
        let r = RingDescriptor::new(&["x", "y"]).unwrap();
        let p = parse_poly("x^2*y + 1/2*x", &r).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.coeff(&Monomial::new(vec![2, 1])), rational(1, 1));
        assert_eq!(p.coeff(&Monomial::new(vec![1, 0])), rational(1, 2));
    }

    #[test]
    fn parses_parenthesized_power() {
        let r = RingDescriptor::new(&["x1", "x2", "x3", "y1", "y2", "y3", "y4"]).unwrap();
        let p = parse_poly("(x1*x2*x3)^2", &r).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.coeff(&Monomial::new(vec![2, 2, 2, 0, 0, 0, 0])), rational(1, 1));
    }

    #[test]
    fn unknown_variable() {
        let r = RingDescriptor::new(&["x", "y"]).unwrap();
        let err = parse_poly("x + z", &r).unwrap_err();
        assert!(matches!(
            err,
            Error::Parse { kind: ParseErrorKind::UnknownVariable(ref v), line: 1, column: 5 } if v == "z"
        ));
    }

    #[test]
    fn rejects_bad_exponents_and_division() {
        let r = RingDescriptor::new(&["x", "y"]).unwrap();
        for (text, want) in [
            ("x^y", ParseErrorKind::NonIntegerExponent("y".into())),
            ("x^1.5", ParseErrorKind::NonIntegerExponent("1.5".into())),
            ("x^-1", ParseErrorKind::NonIntegerExponent("-".into())),
            ("x/y", ParseErrorKind::NonConstantDivision),
            ("x/(1-1)", ParseErrorKind::DivisionByZero),
        ] {
            match parse_poly(text, &r) {
                Err(Error::Parse { kind, .. }) => assert_eq!(kind, want, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
        assert!(parse_poly("x +", &r).is_err());
        assert!(parse_poly("(x", &r).is_err());
        assert!(parse_poly("x y", &r).is_err());
    }

    #[test]
    fn constant_division_and_signs() {
        let r = RingDescriptor::new(&["x", "y"]).unwrap();
        assert_eq!(parse_poly("x/2 - -y", &r).unwrap(), parse_poly("1/2*x + y", &r).unwrap());
        assert_eq!(parse_poly("-x^2", &r).unwrap().to_string(), "-x^2");
    }

    #[test]
    fn list_parsing() {
        let r = RingDescriptor::new(&["x", "y"]).unwrap();
        let l = parse_poly_list("x^2, x*y", &r).unwrap();
        assert_eq!(l.len(), 2);
        assert!(parse_poly_list("", &r).unwrap().is_empty());
    }
}
