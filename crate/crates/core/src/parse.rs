//! Recursive-descent parser for field elements, truncated series and
//! minimal polynomials.
//!
//! ```text
//! expr   := ('+'|'-')? term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' nat)?
//! atom   := nat ('/' nat)? | name | '(' expr ')'
//! ```
//!
//! `name` is a tower generator, or the polynomial variable (`X` for series).

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::ExtensionField;
use crate::scalar::Scalar;
use crate::series::TruncSeries;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Name(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = text[start..i].parse().expect("ascii digits");
            out.push((start, Tok::Num(n)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Name(text[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            let ch = text[i..].chars().next().unwrap();
            return Err(Error::Parse {
                position: i,
                message: format!("unexpected character '{ch}'"),
            });
        }
    }
    Ok(out)
}

/// Polynomial in one variable with coefficients in `field`, lowest degree first.
type Poly = Vec<Vec<Scalar>>;

struct Parser<'a> {
    field: &'a ExtensionField,
    var: Option<&'a str>,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &str, field: &'a ExtensionField, var: Option<&'a str>) -> Result<Self> {
        Ok(Parser {
            field,
            var,
            toks: tokenize(text)?,
            pos: 0,
            end: text.len(),
        })
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position: self.here(),
            message: message.into(),
        })
    }

    fn peek_op(&self) -> Option<char> {
        match self.toks.get(self.pos) {
            Some((_, Tok::Op(c))) => Some(*c),
            _ => None,
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek_op() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse_all(mut self) -> Result<Poly> {
        if self.toks.is_empty() {
            return self.err("empty expression");
        }
        let p = self.expr()?;
        if self.pos < self.toks.len() {
            return self.err("unexpected trailing input");
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<Poly> {
        let negate = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = self.neg(&acc);
        }
        loop {
            if self.eat('+') {
                let t = self.term()?;
                acc = self.add(&acc, &t);
            } else if self.eat('-') {
                let t = self.term()?;
                acc = self.add(&acc, &self.neg(&t));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            let f = self.factor()?;
            acc = self.mul(&acc, &f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let e = match self.toks.get(self.pos) {
            Some((_, Tok::Num(n))) => n.clone(),
            _ => return self.err("expected a natural-number exponent"),
        };
        let e: usize = match e.try_into() {
            Ok(e) if e <= 4096 => e,
            _ => return self.err("exponent too large"),
        };
        self.pos += 1;
        let mut out = self.constant(self.field.one());
        for _ in 0..e {
            out = self.mul(&out, &base);
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<Poly> {
        let (at, tok) = match self.toks.get(self.pos) {
            Some(t) => t.clone(),
            None => return self.err("unexpected end of input"),
        };
        self.pos += 1;
        match tok {
            Tok::Num(num) => {
                let den = if self.eat('/') {
                    match self.toks.get(self.pos) {
                        Some((_, Tok::Num(d))) => {
                            let d = d.clone();
                            self.pos += 1;
                            d
                        }
                        _ => return self.err("malformed rational: expected a denominator"),
                    }
                } else {
                    BigInt::one()
                };
                if den.is_zero() {
                    return Err(Error::Parse {
                        position: at,
                        message: "malformed rational: zero denominator".into(),
                    });
                }
                let c = self.field.base().from_ratio(&num, &den).map_err(|_| Error::Parse {
                    position: at,
                    message: format!("denominator {den} is not invertible in {}", self.field.base()),
                })?;
                Ok(self.constant(self.field.scalar(c)))
            }
            Tok::Name(name) => {
                if Some(name.as_str()) == self.var {
                    let mut p = vec![self.field.zero(); 2];
                    p[1] = self.field.one();
                    return Ok(p);
                }
                match self.field.generator(&name) {
                    Some(g) => Ok(self.constant(g)),
                    None => Err(Error::Parse {
                        position: at,
                        message: format!("unknown symbol '{name}'"),
                    }),
                }
            }
            Tok::Op('(') => {
                let inner = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(inner)
            }
            Tok::Op(c) => Err(Error::Parse {
                position: at,
                message: format!("unexpected '{c}'"),
            }),
        }
    }

    fn constant(&self, c: Vec<Scalar>) -> Poly {
        vec![c]
    }

    fn neg(&self, p: &Poly) -> Poly {
        p.iter().map(|c| self.field.sub(&self.field.zero(), c)).collect()
    }

    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let zero = self.field.zero();
        (0..a.len().max(b.len()))
            .map(|d| self.field.add(a.get(d).unwrap_or(&zero), b.get(d).unwrap_or(&zero)))
            .collect()
    }

    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        let mut out = vec![self.field.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if self.field.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let p = self.field.mul(x, y);
                out[i + j] = self.field.add(&out[i + j], &p);
            }
        }
        out
    }
}

fn degree(field: &ExtensionField, p: &Poly) -> Option<usize> {
    p.iter().rposition(|c| !field.is_zero(c))
}

/// Parses an element of `field` written over its tower generators.
pub fn parse_element_expr(text: &str, field: &ExtensionField) -> Result<Vec<Scalar>> {
    let p = Parser::new(text, field, None)?.parse_all()?;
    Ok(p.into_iter().next().unwrap_or_else(|| field.zero()))
}

/// Parses a series in `X` over `field`, truncated at `bound`. A nonzero
/// term of degree `>= bound` is an error rather than silently dropped.
pub fn parse_series_expr(text: &str, field: &Arc<ExtensionField>, bound: usize) -> Result<TruncSeries> {
    if field.generator("X").is_some() {
        return Err(Error::Parse {
            position: 0,
            message: "'X' is reserved for the series variable".into(),
        });
    }
    let p = Parser::new(text, field, Some("X"))?.parse_all()?;
    if let Some(d) = degree(field, &p) {
        if d >= bound {
            return Err(Error::Parse {
                position: 0,
                message: format!("term of degree {d} does not fit below the bound {bound}"),
            });
        }
    }
    let mut coeffs = p;
    coeffs.resize(bound, field.zero());
    TruncSeries::from_coeffs(field.clone(), coeffs)
}

/// Parses a monic polynomial in the variable `var` with coefficients in
/// `field`, returning coefficients lowest degree first.
pub fn parse_polynomial(text: &str, field: &ExtensionField, var: &str) -> Result<Vec<Vec<Scalar>>> {
    if field.generator(var).is_some() {
        return Err(Error::DuplicateGenerator(var.to_string()));
    }
    let mut p = Parser::new(text, field, Some(var))?.parse_all()?;
    let d = degree(field, &p).unwrap_or(0);
    p.truncate(d + 1);
    Ok(p)
}

/// Builds a field from `(name, polynomial text)` pairs, each polynomial in
/// its own generator over the preceding levels.
pub fn parse_tower<'t, I>(base: crate::scalar::BaseField, tower: I) -> Result<ExtensionField>
where
    I: IntoIterator<Item = (&'t str, &'t str)>,
{
    let mut field = ExtensionField::trivial(base);
    for (name, text) in tower {
        let poly = parse_polynomial(text, &field, name)?;
        field = field.adjoin(name, poly)?;
    }
    Ok(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::BaseField;
    use proptest::prelude::*;

    const Q: BaseField = BaseField::Rationals;

    fn q(v: i64) -> Scalar {
        Q.from_i64(v)
    }

    fn qab() -> Arc<ExtensionField> {
        Arc::new(parse_tower(Q, [("a", "a^2 - 2"), ("b", "b^2 - 3")]).unwrap())
    }

    fn qi() -> Arc<ExtensionField> {
        Arc::new(parse_tower(Q, [("i", "i^2 + 1")]).unwrap())
    }

    #[test]
    fn elements() {
        let k = qab();
        assert_eq!(parse_element_expr("1 + a", &k).unwrap(), vec![q(1), q(1), q(0), q(0)]);
        assert_eq!(parse_element_expr("a*b", &k).unwrap(), k.unit(3));
        assert_eq!(parse_element_expr("a^2", &k).unwrap(), k.scalar(q(2)));
        assert_eq!(parse_element_expr("-3/6*b + (a - a)", &k).unwrap()[2], Q.from_ratio(&(-1).into(), &2.into()).unwrap());
        assert_eq!(parse_element_expr("i", &qi()).unwrap(), vec![q(0), q(1)]);
    }

    #[test]
    fn element_errors() {
        let k = qab();
        let pos = |t: &str| match parse_element_expr(t, &k) {
            Err(Error::Parse { position, .. }) => position,
            other => panic!("{t}: {other:?}"),
        };
        assert_eq!(pos("1 + c"), 4);
        assert_eq!(pos("1/0"), 0);
        assert_eq!(pos("a +"), 3);
        assert_eq!(pos("a b"), 2);
        assert_eq!(pos("(a"), 2);
        assert_eq!(pos("X"), 0);
        assert_eq!(pos("2 $ 3"), 2);
        assert_eq!(pos("a^b"), 2);
        assert_eq!(pos(""), 0);
    }

    #[test]
    fn series() {
        let k = qi();
        let s = parse_series_expr("i*X^3 + X^4", &k, 10).unwrap();
        assert_eq!(s.valuation(), Some(3));
        let m = parse_series_expr("X^16", &k, 20).unwrap();
        assert_eq!(m.valuation(), Some(16));
        assert_eq!((0..20).filter(|&d| !m.coeff(d).is_zero()).count(), 1);
        let t = parse_series_expr("(1+i)*X^2 - X^5", &k, 8).unwrap();
        assert_eq!(t.coeff_coords(2), &[q(1), q(1)]);
        assert_eq!(t.coeff_coords(5), &[q(-1), q(0)]);
        assert_eq!((0..8).filter(|&d| !t.coeff(d).is_zero()).count(), 2);
        assert!(parse_series_expr("X^8", &k, 8).is_err());
        // Cancelling high terms are fine.
        assert!(parse_series_expr("X^9 - X^9 + X", &k, 8).is_ok());
    }

    #[test]
    fn prime_field_rationals() {
        let f7 = ExtensionField::trivial(BaseField::Prime(7));
        assert_eq!(parse_element_expr("1/2", &f7).unwrap(), vec![BaseField::Prime(7).from_i64(4)]);
        assert!(parse_element_expr("1/7", &f7).is_err());
    }

    #[test]
    fn polynomials() {
        let k = Arc::new(parse_tower(Q, [("a", "a^2 - 2")]).unwrap());
        let p = parse_polynomial("b^2 - 3", &k, "b").unwrap();
        assert_eq!(p.len(), 3);
        assert!(parse_polynomial("a^2 - 3", &k, "a").is_err());
        assert!(parse_tower(Q, [("a", "2*a^2 - 2")]).is_err());
        assert!(parse_tower(Q, [("a", "5")]).is_err());
        assert!(matches!(parse_tower(Q, [("a", "a^2 + b")]), Err(Error::Parse { position: 6, .. })));
        // Coefficients may involve earlier generators.
        let t = parse_tower(Q, [("a", "a^2 - 2"), ("b", "b^2 - a")]).unwrap();
        assert_eq!(t.degree(), 4);
    }

    fn arb_series() -> impl Strategy<Value = Vec<(usize, i64, i64, i64, i64)>> {
        prop::collection::vec((0usize..8, -5i64..5, 1i64..4, -3i64..3, -3i64..3), 0..6)
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(terms in arb_series()) {
            let k = qab();
            let mut s = TruncSeries::zero(k.clone(), 8);
            for (d, num, den, x, y) in terms {
                let c = vec![Q.from_ratio(&num.into(), &den.into()).unwrap(), q(x), q(y), q(x * y)];
                let sum = k.add(s.coeff_coords(d), &c);
                s.set_coeff(d, &sum).unwrap();
            }
            let printed = s.to_string();
            let back = parse_series_expr(&printed, &k, 8).unwrap();
            prop_assert_eq!(back, s, "{}", printed);
        }
    }
}
