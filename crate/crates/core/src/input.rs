//! Reader for input files:
//!
//! ```text
//! # comment
//! ring B = Q[x, y]
//! derivation D on B { x -> 0; y -> x }
//! module M on D { basis e1, e2; d e1 -> 0; d e2 -> x*e1; relations: y*e2; }
//! ```
//!
//! Variables and basis elements without an image map to 0.

use crate::derivation::Derivation;
use crate::dmodule::{make_module, split_linear, DeltaModule};
use crate::error::{Error, Result};
use crate::ring::parse::parse_expr;
use crate::ring::{Polynomial, Ring, RingDescriptor};
use crate::syntax::{tokenize, Cursor, Tok};

#[derive(Debug, Clone, Default)]
pub struct Document {
    pub rings: Vec<(String, Ring)>,
    pub derivations: Vec<(String, Derivation)>,
    pub modules: Vec<(String, DeltaModule)>,
}

fn pick<'a, T>(items: &'a [(String, T)], name: Option<&str>, what: &str) -> Result<&'a T> {
    match name {
        Some(n) => items
            .iter()
            .find(|(k, _)| k == n)
            .map(|(_, v)| v)
            .ok_or_else(|| Error::Input(format!("no {what} named `{n}`"))),
        None => match items {
            [(_, v)] => Ok(v),
            [] => Err(Error::Input(format!("input defines no {what}"))),
            _ => Err(Error::Input(format!("input defines several {what}s; choose one by name"))),
        },
    }
}

impl Document {
    /// A named derivation, or the only one. Falls back to the base of the only module.
    pub fn derivation(&self, name: Option<&str>) -> Result<&Derivation> {
        if name.is_none() && self.derivations.is_empty() && self.modules.len() == 1 {
            return Ok(self.modules[0].1.base());
        }
        pick(&self.derivations, name, "derivation")
    }

    pub fn module(&self, name: Option<&str>) -> Result<&DeltaModule> {
        pick(&self.modules, name, "module")
    }

    fn has_name(&self, n: &str) -> bool {
        self.rings.iter().any(|(k, _)| k == n)
            || self.derivations.iter().any(|(k, _)| k == n)
            || self.modules.iter().any(|(k, _)| k == n)
    }
}

pub fn parse_document(text: &str) -> Result<Document> {
    let tokens = tokenize(text)?;
    let mut cur = Cursor::new(&tokens);
    let mut doc = Document::default();
    loop {
        while cur.eat(&Tok::Semi) {}
        if cur.peek().tok == Tok::Eof {
            return Ok(doc);
        }
        let kw = cur.peek().clone();
        let name_err = |cur: &Cursor<'_>, n: &str| cur.error(format!("name `{n}` already defined"));
        if cur.at_keyword("ring") {
            cur.next();
            let name = cur.expect_ident()?;
            if doc.has_name(&name) {
                return Err(name_err(&cur, &name));
            }
            cur.expect(&Tok::Equals)?;
            cur.expect_keyword("Q")?;
            cur.expect(&Tok::LBracket)?;
            let mut vars = Vec::new();
            if cur.peek().tok != Tok::RBracket {
                loop {
                    vars.push(cur.expect_ident()?);
                    if !cur.eat(&Tok::Comma) {
                        break;
                    }
                }
            }
            let close = cur.peek().clone();
            cur.expect(&Tok::RBracket)?;
            let ring = RingDescriptor::new(&vars).map_err(|e| {
                Error::parse(crate::error::ParseErrorKind::Syntax(e.to_string()), close.line, close.column)
            })?;
            doc.rings.push((name, ring));
        } else if cur.at_keyword("derivation") {
            cur.next();
            let name = cur.expect_ident()?;
            if doc.has_name(&name) {
                return Err(name_err(&cur, &name));
            }
            cur.expect_keyword("on")?;
            let ring_name = cur.expect_ident()?;
            let ring = doc
                .rings
                .iter()
                .find(|(k, _)| *k == ring_name)
                .map(|(_, r)| r.clone())
                .ok_or_else(|| cur.error(format!("unknown ring `{ring_name}`")))?;
            let images = parse_derivation_body(&mut cur, &ring)?;
            doc.derivations.push((name, Derivation::new(&ring, images)?));
        } else if cur.at_keyword("module") {
            cur.next();
            let name = cur.expect_ident()?;
            if doc.has_name(&name) {
                return Err(name_err(&cur, &name));
            }
            cur.expect_keyword("on")?;
            let dname = cur.expect_ident()?;
            let base = doc
                .derivations
                .iter()
                .find(|(k, _)| *k == dname)
                .map(|(_, d)| d.clone())
                .ok_or_else(|| cur.error(format!("unknown derivation `{dname}`")))?;
            let m = parse_module_body(&mut cur, &base)?;
            doc.modules.push((name, m));
        } else {
            return Err(cur.error(format!("expected `ring`, `derivation` or `module`, found {}", kw.tok.describe())));
        }
    }
}

fn parse_derivation_body(cur: &mut Cursor<'_>, ring: &Ring) -> Result<Vec<Polynomial>> {
    cur.expect(&Tok::LBrace)?;
    let mut images: Vec<Option<Polynomial>> = vec![None; ring.arity()];
    loop {
        while cur.eat(&Tok::Semi) {}
        if cur.eat(&Tok::RBrace) {
            break;
        }
        let at = cur.peek().clone();
        let var = cur.expect_ident()?;
        let i = ring.index_of(&var).ok_or_else(|| {
            Error::parse(crate::error::ParseErrorKind::UnknownVariable(var.clone()), at.line, at.column)
        })?;
        if images[i].is_some() {
            return Err(Error::parse(
                crate::error::ParseErrorKind::Syntax(format!("`{var}` given two images")),
                at.line,
                at.column,
            ));
        }
        cur.expect(&Tok::Arrow)?;
        images[i] = Some(parse_expr(cur, ring)?);
        if !matches!(cur.peek().tok, Tok::Semi | Tok::RBrace) {
            return Err(cur.error(format!("expected `;` or `}}`, found {}", cur.peek().tok.describe())));
        }
    }
    Ok(images.into_iter().map(|p| p.unwrap_or_else(|| Polynomial::zero(ring))).collect())
}

fn parse_module_body(cur: &mut Cursor<'_>, base: &Derivation) -> Result<DeltaModule> {
    let ring = base.ring();
    cur.expect(&Tok::LBrace)?;
    cur.expect_keyword("basis")?;
    let mut basis = Vec::new();
    loop {
        basis.push(cur.expect_ident()?);
        if !cur.eat(&Tok::Comma) {
            break;
        }
    }
    let at = cur.peek().clone();
    let ext = ring
        .extend(&basis)
        .map_err(|e| Error::parse(crate::error::ParseErrorKind::Syntax(e.to_string()), at.line, at.column))?;
    let p = basis.len();
    let mut columns: Vec<Option<Vec<Polynomial>>> = vec![None; p];
    let mut relations = Vec::new();
    let linear = |cur: &mut Cursor<'_>| -> Result<Vec<Polynomial>> {
        let at = cur.peek().clone();
        let poly = parse_expr(cur, &ext)?;
        split_linear(&poly, ring, &basis)
            .map_err(|e| Error::parse(crate::error::ParseErrorKind::Syntax(e.to_string()), at.line, at.column))
    };
    loop {
        while cur.eat(&Tok::Semi) {}
        if cur.eat(&Tok::RBrace) {
            break;
        }
        if cur.at_keyword("d") {
            cur.next();
            let at = cur.peek().clone();
            let e = cur.expect_ident()?;
            let j = basis.iter().position(|b| *b == e).ok_or_else(|| {
                Error::parse(crate::error::ParseErrorKind::UnknownVariable(e.clone()), at.line, at.column)
            })?;
            cur.expect(&Tok::Arrow)?;
            columns[j] = Some(linear(cur)?);
        } else if cur.at_keyword("relations") {
            cur.next();
            cur.expect(&Tok::Colon)?;
            loop {
                relations.push(linear(cur)?);
                if !cur.eat(&Tok::Comma) {
                    break;
                }
            }
        } else {
            return Err(cur.error(format!("expected `d`, `relations` or `}}`, found {}", cur.peek().tok.describe())));
        }
        if !matches!(cur.peek().tok, Tok::Semi | Tok::RBrace) {
            return Err(cur.error(format!("expected `;` or `}}`, found {}", cur.peek().tok.describe())));
        }
    }
    let cols: Vec<Vec<Polynomial>> =
        columns.into_iter().map(|c| c.unwrap_or_else(|| vec![Polynomial::zero(ring); p])).collect();
    let connection = (0..p).map(|i| (0..p).map(|j| cols[j][i].clone()).collect()).collect();
    make_module(base, &basis, connection, relations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::ParseErrorKind;

    const SAMPLE: &str = "# quotient example
ring B = Q[x, y]
derivation D on B { x -> 0; y -> x^2 }
module M on D {
  basis e1, e2;
  d e1 -> 0;
  d e2 -> e1;
  relations: y*e2, y*e1 + x^2*e2, x^2*e1;
}
";

    #[test]
    fn reads_sample() {
        let doc = parse_document(SAMPLE).unwrap();
        let d = doc.derivation(None).unwrap();
        assert_eq!(d.to_string(), "x -> 0; y -> x^2");
        let m = doc.module(Some("M")).unwrap();
        assert_eq!(m.rank(), 2);
        assert_eq!(m.relations().len(), 3);
        assert_eq!(m.display(&m.apply(&m.unit(1)).unwrap()).to_string(), "e1");
    }

    #[test]
    fn reports_positions() {
        let err = parse_document("ring B = Q[x]\nderivation D on B { z -> 1 }").unwrap_err();
        assert_eq!(err, Error::Parse { kind: ParseErrorKind::UnknownVariable("z".into()), line: 2, column: 21 });
        assert!(parse_document("ring B = Q[x, x]").unwrap_err().is_parse());
        assert!(parse_document("ring B = Q[x] derivation D on C { }").unwrap_err().is_parse());
        assert!(parse_document("ring B = Q[x]\nmodule M on D { basis e; }").unwrap_err().is_parse());
        assert!(parse_document("field F").unwrap_err().is_parse());
    }

    #[test]
    fn domain_errors_are_not_parse_errors() {
        let text =
            "ring B = Q[x, y]\nderivation D on B { y -> x }\nmodule M on D { basis e1, e2; d e1 -> e2; d e2 -> e1; }";
        let err = parse_document(text).unwrap_err();
        assert!(matches!(err, Error::NotNilpotent(_)));
    }

    #[test]
    fn nonlinear_module_text() {
        let text = "ring B = Q[x]\nderivation D on B { }\nmodule M on D { basis e; d e -> e^2; }";
        assert!(parse_document(text).unwrap_err().is_parse());
    }
}
